import logging
import sys

from .config import (
    CheckConfig,
    ConfigManager,
    ConfigSource,
    EngineConfig,
    LoggingConfig,
    get_config,
    reset_config,
)
from .container import Container, ServiceRegistry, get_container, reset_container
from .file_repository import FileTableRepository
from .process_pool import ProcessPool, ProcessPoolTrialRunner, create_trial_runner


def setup_logging(level=logging.WARNING, log_format=None):
    """Send log records to stderr so stdout carries only command output."""
    if log_format is None:
        log_format = "[%(asctime)s] %(levelname)s %(name)s: %(message)s"
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            level = logging.WARNING
    logging.basicConfig(level=level, format=log_format, stream=sys.stderr, force=True)
    logging.getLogger("multiprocessing").setLevel(logging.WARNING)


__all__ = [
    'setup_logging',
    'get_config',
    'reset_config',
    'ConfigManager',
    'ConfigSource',
    'EngineConfig',
    'CheckConfig',
    'LoggingConfig',
    'get_container',
    'reset_container',
    'Container',
    'ServiceRegistry',
    'FileTableRepository',
    'ProcessPool',
    'ProcessPoolTrialRunner',
    'create_trial_runner',
]
