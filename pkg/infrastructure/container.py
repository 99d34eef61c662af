import logging
import threading
from contextlib import contextmanager
from typing import Any, Callable, Dict, Optional

from core.errors import GenLogicError
from core.interfaces.repository import TableRepositoryInterface
from core.interfaces.trial_runner import TrialRunnerInterface
from core.use_cases.query_service import QueryService

from .config import ConfigManager, get_config
from .file_repository import FileTableRepository
from .process_pool import create_trial_runner

logger = logging.getLogger(__name__)


class ServiceRegistry:
    def __init__(self, config: ConfigManager):
        self.config = config
        self._services: Dict[str, Any] = {}
        self._factories: Dict[str, Callable[[], Any]] = {}
        self._lock = threading.RLock()
        self._register_builtin_factories()

    def _register_builtin_factories(self):
        self._factories.update({
            'repository': FileTableRepository,
            'trial_runner': self._create_trial_runner,
            'query_service': self._create_query_service,
        })

    def _create_trial_runner(self) -> TrialRunnerInterface:
        check = self.config.get_check_config()
        return create_trial_runner(check.use_multiprocess, check.max_workers)

    def _create_query_service(self) -> QueryService:
        engine = self.config.get_engine_config()
        return QueryService(
            repository=self.get_service('repository'),
            decimal_places=engine.decimal_places,
            enumeration_bound=engine.enumeration_bound,
            subset_bound=engine.subset_bound,
        )

    def register_factory(self, service_name: str, factory: Callable[[], Any]):
        with self._lock:
            self._factories[service_name] = factory
            self._services.pop(service_name, None)

    def get_service(self, service_name: str) -> Any:
        with self._lock:
            if service_name not in self._services:
                if service_name not in self._factories:
                    raise GenLogicError(f"Unknown service: {service_name}")
                self._services[service_name] = self._factories[service_name]()
                logger.debug("Created service %s", service_name)
            return self._services[service_name]

    def clear_services(self):
        with self._lock:
            self._services.clear()


class Container:
    def __init__(self, config: Optional[ConfigManager] = None):
        self.config = config or get_config()
        self.registry = ServiceRegistry(self.config)

    def get_repository(self) -> TableRepositoryInterface:
        return self.registry.get_service('repository')

    def get_trial_runner(self) -> TrialRunnerInterface:
        return self.registry.get_service('trial_runner')

    def get_query_service(self) -> QueryService:
        return self.registry.get_service('query_service')

    def shutdown(self):
        self.registry.clear_services()

    @contextmanager
    def managed_lifecycle(self):
        try:
            yield self
        finally:
            self.shutdown()


_container: Optional[Container] = None


def get_container(config_file: Optional[str] = None) -> Container:
    global _container
    if _container is None or config_file is not None:
        _container = Container(get_config(config_file))
    return _container


def reset_container():
    global _container
    _container = None
