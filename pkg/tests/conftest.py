from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from core.parser import parse
from core.vocabulary import Vocabulary
from core.worldstore import ingest_csv
from infrastructure import reset_config, reset_container
from infrastructure.file_repository import FileTableRepository

settings.register_profile(
    "genlogic",
    max_examples=200,
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
settings.load_profile("genlogic")

DEMOS = Path(__file__).resolve().parent.parent / "demos"


@pytest.fixture
def demos() -> Path:
    return DEMOS


@pytest.fixture
def repository() -> FileTableRepository:
    return FileTableRepository()


def _load(vocab_name: str, data_name: str):
    vocab = FileTableRepository().load_vocabulary(str(DEMOS / vocab_name))
    table = ingest_csv((DEMOS / data_name).read_text(encoding="utf-8"), vocab)
    return vocab, table


@pytest.fixture
def weather():
    return _load("weather_vocab.json", "weather.csv")


@pytest.fixture
def blame():
    return _load("blame_vocab.json", "blame.csv")


@pytest.fixture
def birds():
    return _load("birds_vocab.json", "birds.csv")


@pytest.fixture
def football():
    return _load("football_vocab.json", "football.csv")


@pytest.fixture
def weather_vocab() -> Vocabulary:
    return Vocabulary(("rain", "wet"))


@pytest.fixture
def f(weather_vocab):
    """Parse against the weather vocabulary."""
    return lambda text: parse(text, weather_vocab)


@pytest.fixture(autouse=True)
def fresh_services(monkeypatch, tmp_path):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("GENLOGIC_USE_MULTIPROCESS", "false")
    reset_config()
    reset_container()
    yield
    reset_config()
    reset_container()
