# Shared package
