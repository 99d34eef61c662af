# Interfaces package
from .repository import TableRepositoryInterface
from .trial_runner import SequentialTrialRunner, TrialRunnerInterface
