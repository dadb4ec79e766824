import random
from pathlib import Path
from typing import Callable, List

import pytest
import yaml

from cubical.lattice import FACE_OFFSETS, CubicalComplex

ROOT = Path(__file__).parent


def _random_connected(rng: random.Random, size: int, extent: int = 4) -> CubicalComplex:
    cubes = {(0, 0, 0)}
    attempts = 0
    while len(cubes) < size and attempts < 50 * size:
        attempts += 1
        x, y, z = rng.choice(sorted(cubes))
        dx, dy, dz = rng.choice(FACE_OFFSETS)
        cube = (x + dx, y + dy, z + dz)
        if all(0 <= c < extent for c in cube):
            cubes.add(cube)
    return CubicalComplex(cubes)


@pytest.fixture(scope="session")
def random_complex() -> Callable[[random.Random, int], CubicalComplex]:
    return _random_connected


@pytest.fixture(scope="session")
def complex_corpus() -> List[CubicalComplex]:
    """100 face-connected complexes of 1 to 14 cubes inside a 4x4x4 box."""
    rng = random.Random(20240611)
    return [_random_connected(rng, rng.randint(1, 14)) for _ in range(100)]


@pytest.fixture
def ring() -> CubicalComplex:
    """3x3x1 annulus of cubes around a missing center: a solid torus."""
    return CubicalComplex(
        (x, y, 0) for x in range(3) for y in range(3) if (x, y) != (1, 1)
    )


@pytest.fixture
def knot_table_path() -> Path:
    return ROOT / "data" / "knots_le7.txt"


def write_config(directory: Path, **overrides) -> Path:
    """config.yaml with every path redirected under `directory`."""
    config = {
        "pipeline": {"ordering": "lex", "seed": 0, "max_generators": 4,
                     "retry_orderings": ["lex", "revlex", "random"]},
        "tietze": {"max_passes": 1000, "length_factor": 10},
        "classify": {"n_start": 2, "n_max": 3, "jobs": 1},
        "cache": {"enabled": True, "dir": str(directory / "cache"), "pipeline_version": "1"},
        "results": {"dir": str(directory / "results"), "results_file": "results.jsonl",
                    "report_csv": "classification.csv", "summary_file": "summary.md"},
        "redundancy": {"table_path": None},
        "knots": {"pad": 2, "transpose": False},
        "logging": {"level": "INFO", "file": str(directory / "logs" / "cubeknot.log")},
        "api": {"enabled": True, "host": "127.0.0.1", "port": 8088},
    }
    for section, values in overrides.items():
        if values is None:
            config.pop(section, None)
        else:
            config[section] = {**config.get(section, {}), **values}
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / "config.yaml"
    path.write_text(yaml.safe_dump(config), encoding="utf-8")
    return path


@pytest.fixture
def config_dir(tmp_path: Path) -> Path:
    write_config(tmp_path / "config_home")
    return tmp_path / "config_home"


@pytest.fixture
def config_writer() -> Callable[..., Path]:
    return write_config
