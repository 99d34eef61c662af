# Use cases package
