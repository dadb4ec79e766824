"""
Plain-text dump of a cubical complex: one `x y z` cube index per line, `#`
comments allowed.
"""

import logging
from pathlib import Path
from typing import List, Union

from cubical.lattice import Cube, CubicalComplex
from pipeline.errors import ComplexError

logger = logging.getLogger(__name__)

HEADER = "# cubeknot complex v1"


def dumps_complex(k: CubicalComplex) -> str:
    lines = [HEADER, f"# {len(k)} cubes"]
    lines += [f"{x} {y} {z}" for x, y, z in k.sorted_cubes]
    return "\n".join(lines) + "\n"


def loads_complex(text: str, source: str = "<string>") -> CubicalComplex:
    cubes: List[Cube] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        if len(parts) != 3:
            raise ComplexError(f"{source}:{lineno}: expected three integers, got {line!r}")
        try:
            x, y, z = (int(p) for p in parts)
        except ValueError as e:
            raise ComplexError(f"{source}:{lineno}: {e}") from e
        cubes.append((x, y, z))
    return CubicalComplex(cubes)


def save_complex(k: CubicalComplex, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_complex(k), encoding="utf-8")
    logger.info(f"Saved {len(k)} cubes to {path}")
    return path


def load_complex(path: Union[str, Path]) -> CubicalComplex:
    path = Path(path)
    k = loads_complex(path.read_text(encoding="utf-8"), str(path))
    logger.info(f"Loaded {len(k)} cubes from {path}")
    return k


def looks_like_complex(text: str) -> bool:
    """True for the dump format, False for a grid or knot table entry."""
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            return not line.startswith("[") and ":" not in line and not line.startswith("braid")
    return False
