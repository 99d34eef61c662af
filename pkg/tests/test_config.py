import json

import pytest
import yaml

from core.errors import GenLogicError
from infrastructure.config import ConfigManager, ConfigSource, get_config, reset_config
from shared.config import Config


def write_yaml(path, data):
    path.write_text(yaml.safe_dump(data), encoding="utf-8")
    return str(path)


class TestDefaults:
    def test_engine_defaults(self):
        engine = ConfigManager().get_engine_config()
        assert engine.enumeration_bound == Config.ENUMERATION_BOUND
        assert engine.subset_bound == Config.SUBSET_BOUND
        assert engine.decimal_places == Config.DECIMAL_PLACES

    def test_fixture_disables_multiprocessing(self):
        manager = ConfigManager()
        assert manager.get_check_config().use_multiprocess is False
        assert manager.get_config_source("check.use_multiprocess") is ConfigSource.ENVIRONMENT

    def test_default_source(self):
        assert ConfigManager().get_config_source("engine.subset_bound") is ConfigSource.DEFAULT


class TestLayering:
    def test_yaml_file_overrides_defaults(self, tmp_path):
        path = write_yaml(tmp_path / "settings.yaml", {"check": {"trials": 25, "seed": 99}})
        check = ConfigManager(path).get_check_config()
        assert (check.trials, check.seed) == (25, 99)

    def test_json_file(self, tmp_path):
        path = tmp_path / "settings.json"
        path.write_text(json.dumps({"engine": {"decimal_places": 3}}), encoding="utf-8")
        assert ConfigManager(str(path)).get_engine_config().decimal_places == 3

    def test_environment_beats_file(self, tmp_path, monkeypatch):
        path = write_yaml(tmp_path / "settings.yaml", {"check": {"trials": 25}})
        monkeypatch.setenv("GENLOGIC_CHECK_TRIALS", "40")
        manager = ConfigManager(path)
        assert manager.get_check_config().trials == 40
        assert manager.get_config_source("check.trials") is ConfigSource.ENVIRONMENT

    def test_file_is_found_in_working_directory(self, tmp_path):
        write_yaml(tmp_path / "genlogic.yaml", {"engine": {"subset_bound": 5}})
        assert ConfigManager().get_engine_config().subset_bound == 5

    @pytest.mark.parametrize("text, expected", [
        ("yes", True), ("OFF", False), ("12", 12), ("INFO", "INFO"),
    ])
    def test_environment_values_are_converted(self, text, expected):
        assert ConfigManager()._convert_env_value(text) == expected


class TestBadFiles:
    def test_explicit_missing_file_raises(self, tmp_path):
        with pytest.raises(GenLogicError):
            ConfigManager(str(tmp_path / "absent.yaml"))

    def test_explicit_malformed_file_raises(self, tmp_path):
        path = tmp_path / "broken.yaml"
        path.write_text("engine: [unclosed", encoding="utf-8")
        with pytest.raises(GenLogicError):
            ConfigManager(str(path))

    def test_non_mapping_raises(self, tmp_path):
        path = write_yaml(tmp_path / "list.yaml", [1, 2, 3])
        with pytest.raises(GenLogicError, match="mapping"):
            ConfigManager(path)

    def test_malformed_discovered_file_is_skipped(self, tmp_path, caplog):
        (tmp_path / "genlogic.yaml").write_text("engine: [unclosed", encoding="utf-8")
        manager = ConfigManager()
        assert manager.get_engine_config().subset_bound == Config.SUBSET_BOUND
        assert "Failed to load config file" in caplog.text

    def test_unknown_keys_are_ignored(self, tmp_path, caplog):
        path = write_yaml(tmp_path / "extra.yaml", {"engine": {"subset_bound": 8, "turbo": True}})
        assert ConfigManager(path).get_engine_config().subset_bound == 8
        assert "turbo" in caplog.text


class TestTypedSettings:
    def test_word_for_a_count_is_rejected(self, tmp_path):
        path = write_yaml(tmp_path / "settings.yaml", {"check": {"trials": "many"}})
        with pytest.raises(GenLogicError, match="check.trials"):
            ConfigManager(path).get_check_config()

    @pytest.mark.parametrize("section, values", [
        ("engine", {"subset_bound": 2.5}),
        ("engine", {"decimal_places": True}),
        ("check", {"max_workers": "several"}),
        ("logging", {"level": ["INFO"]}),
    ])
    def test_wrong_types_name_the_key(self, tmp_path, section, values):
        path = write_yaml(tmp_path / "settings.yaml", {section: values})
        key = f"{section}.{next(iter(values))}"
        with pytest.raises(GenLogicError, match=key):
            ConfigManager(path).get_section(section)

    def test_numeric_and_boolean_strings_are_coerced(self, tmp_path, monkeypatch):
        monkeypatch.delenv("GENLOGIC_USE_MULTIPROCESS")
        path = write_yaml(tmp_path / "settings.yaml",
                          {"check": {"seed": "42", "use_multiprocess": "yes"}})
        check = ConfigManager(path).get_check_config()
        assert (check.seed, check.use_multiprocess) == (42, True)

    def test_bad_environment_value(self, monkeypatch):
        monkeypatch.setenv("GENLOGIC_DECIMAL_PLACES", "six")
        with pytest.raises(GenLogicError, match="environment"):
            ConfigManager().get_engine_config()


class TestSingleton:
    def test_singleton(self, tmp_path):
        assert get_config() is get_config()
        path = write_yaml(tmp_path / "other.yaml", {"check": {"trials": 3}})
        assert get_config(path).get_check_config().trials == 3
        reset_config()
        assert get_config().get_check_config().trials == Config.CHECK_TRIALS
