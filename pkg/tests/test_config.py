"""Configuration loading, overrides, snapshots and settings."""

from pathlib import Path

import pytest
import yaml
from pydantic import ValidationError

from fedloc.config.config_loader import apply_overrides, load_yaml_with_env, parse_override
from fedloc.config.config_manager import ExperimentConfigManager, dump_config
from fedloc.config.config_models import ExperimentConfig, Strategy, TrainingConfig
from fedloc.config.settings import get_settings, reset_settings
from fedloc.exceptions import ConfigError

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"

BASE_YAML = """
n_labels: 4
n_clients: 3
master_seed: {{ env.get("FEDLOC_TEST_SEED", "7") }}
federation:
  rounds: 2
  sigma: 5.0
"""


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "experiment.yaml"
    path.write_text(BASE_YAML)
    return path


class TestLoading:
    def test_values_and_defaults(self, config_file):
        config = ExperimentConfigManager(str(config_file)).get_config()
        assert (config.n_labels, config.n_clients, config.master_seed) == (4, 3, 7)
        assert config.federation.rounds == 2
        assert config.federation.lambda_tilde == 1.0
        assert config.strategies == list(Strategy)

    def test_environment_substitution(self, config_file, monkeypatch):
        monkeypatch.setenv("FEDLOC_TEST_SEED", "123")
        assert load_yaml_with_env(str(config_file))["master_seed"] == 123

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.yaml"
        path.write_text("")
        assert ExperimentConfigManager(str(path)).get_config() == ExperimentConfig()

    def test_shipped_configs_validate(self):
        for name in ("experiment.yaml", "smoke.yaml"):
            ExperimentConfigManager(str(CONFIG_DIR / name)).get_config()


class TestErrors:
    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            ExperimentConfigManager(str(tmp_path / "nope.yaml"))

    def test_invalid_yaml(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("n_labels: [1, 2\n")
        with pytest.raises(ConfigError, match="Invalid YAML"):
            ExperimentConfigManager(str(path))

    def test_root_must_be_mapping(self, tmp_path):
        path = tmp_path / "list.yaml"
        path.write_text("- 1\n- 2\n")
        with pytest.raises(ConfigError):
            ExperimentConfigManager(str(path))

    @pytest.mark.parametrize(
        "override",
        [
            "n_labels=0",
            "federation.sigma=-1",
            "partition.beta_low=90",
            "strategies=[BEST]",
            "federation.training.batch_size=0",
        ],
    )
    def test_validation_errors(self, config_file, override):
        with pytest.raises(ConfigError, match="validation"):
            ExperimentConfigManager(str(config_file), [override])


class TestOverrides:
    def test_later_overrides_win(self, config_file):
        manager = ExperimentConfigManager(
            str(config_file), ["federation.sigma=1.5", "n_clients=5", "federation.sigma=2.5"]
        )
        config = manager.get_config()
        assert config.federation.sigma == 2.5
        assert config.n_clients == 5

    def test_creates_missing_sections(self):
        data = apply_overrides({}, ["fusion.prior=empirical", "sweep.axis=M", "sweep.values=[2, 4]"])
        assert data == {"fusion": {"prior": "empirical"}, "sweep": {"axis": "M", "values": [2, 4]}}

    def test_cannot_descend_into_scalars(self):
        with pytest.raises(ConfigError):
            apply_overrides({"n_labels": 4}, ["n_labels.x=1"])

    @pytest.mark.parametrize("item", ["n_labels", "=3", "n_labels=[1"])
    def test_malformed(self, item):
        with pytest.raises(ConfigError):
            parse_override(item)

    def test_values_are_yaml(self):
        assert parse_override("a.b=0.001") == (["a", "b"], 0.001)
        assert parse_override("flag=true") == (["flag"], True)
        assert parse_override("name=FEDAMP-F") == (["name"], "FEDAMP-F")


class TestSnapshot:
    def test_snapshot_reloads_to_same_config(self, config_file, tmp_path):
        manager = ExperimentConfigManager(str(config_file), ["sweep.axis=sigma", "sweep.values=[1, 10]"])
        path = manager.write_snapshot(tmp_path / "out")
        assert path.name == "resolved_config.yaml"
        assert ExperimentConfigManager(str(path)).get_config() == manager.get_config()

    def test_dump_uses_plain_values(self):
        dumped = yaml.safe_load(dump_config(ExperimentConfig(strategies=[Strategy.LM_F])))
        assert dumped["strategies"] == ["LM-F"]


class TestModels:
    def test_duplicate_strategies_collapse(self):
        config = ExperimentConfig(strategies=["GM", "LM-F", "GM"])
        assert config.strategies == [Strategy.GM, Strategy.LM_F]

    def test_full_batch(self):
        assert TrainingConfig(batch_size="full").batch_size == "full"
        with pytest.raises(ValidationError):
            TrainingConfig(batch_size=0)


class TestSettings:
    def test_environment(self, monkeypatch):
        monkeypatch.setenv("FEDLOC_OUTPUT_DIR", "/tmp/fedloc-out")
        monkeypatch.setenv("FEDLOC_WORKERS", "3")
        reset_settings()
        settings = get_settings()
        assert settings.output_dir == "/tmp/fedloc-out"
        assert settings.workers == 3
        assert get_settings() is settings
