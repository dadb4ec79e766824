import platform
from pathlib import Path

import pytest

from pipeline.config import ConfigLoader

ROOT = Path(__file__).parent


def test_bundled_config_loads():
    loader = ConfigLoader(config_dir=str(ROOT / "config"))
    settings = loader.pipeline_settings()
    assert settings.ordering == "lex"
    assert settings.pad == 2
    assert loader.get("classify.n_max") == 7
    assert loader.get_api_config()["enabled"] is False
    assert loader.get("redundancy.table_path") is None


def test_dot_path_lookup(config_dir):
    loader = ConfigLoader(config_dir=str(config_dir))
    assert loader.get("classify.n_max") == 3
    assert loader.get("classify.missing", 5) == 5
    assert loader.get("pipeline.ordering.deeper", "x") == "x"
    assert loader.tietze_settings().length_factor == 10
    assert loader.pipeline_settings().tietze.max_passes == 1000


def test_platform_file_wins(tmp_path, config_writer):
    base = tmp_path / "conf"
    config_writer(base)
    override = config_writer(tmp_path / "other", classify={"n_max": 5})
    target = base / f"config.{platform.system().lower()}.yaml"
    target.write_text(override.read_text())
    assert ConfigLoader(config_dir=str(base)).get("classify.n_max") == 5


def test_explicit_config_file(tmp_path, config_writer):
    path = config_writer(tmp_path / "explicit", classify={"n_start": 3, "n_max": 4})
    loader = ConfigLoader(config_dir=str(tmp_path / "nowhere"), config_file=str(path))
    assert loader.get("classify.n_start") == 3
    with pytest.raises(FileNotFoundError):
        ConfigLoader(config_file=str(tmp_path / "absent.yaml"))


def test_missing_directory(tmp_path):
    with pytest.raises(FileNotFoundError):
        ConfigLoader(config_dir=str(tmp_path / "empty"))


@pytest.mark.parametrize(
    "overrides",
    [
        {"tietze": None},
        {"results": None},
        {"pipeline": {"ordering": "spiral"}},
        {"pipeline": {"retry_orderings": ["lex", "zigzag"]}},
        {"classify": {"n_start": 0}},
        {"classify": {"n_start": 4, "n_max": 3}},
        {"classify": {"n_max": "seven"}},
    ],
)
def test_invalid_configs(tmp_path, config_writer, overrides):
    config_writer(tmp_path / "bad", **overrides)
    with pytest.raises(ValueError):
        ConfigLoader(config_dir=str(tmp_path / "bad"))


def test_unparseable_yaml(tmp_path):
    (tmp_path / "config.yaml").write_text("pipeline: [unclosed\n")
    with pytest.raises(RuntimeError):
        ConfigLoader(config_dir=str(tmp_path))
