"""
Cubical knot complements from grid diagrams.

Column i sits at x = 2i and row j at y = 2j. Horizontal arcs are runs of cubes
at z = 0, vertical arcs runs at z = 2, and every marker gets a connector cube
at z = 1 joining the two levels. Verticals therefore pass over horizontals
with a one-cube gap at each crossing.
"""

import logging
from typing import Dict, FrozenSet, Set, Tuple

from pydantic import BaseModel, ConfigDict

from cubical.lattice import NEIGHBOR_OFFSETS, FACE_OFFSETS, Cube, CubicalComplex
from knots.grid import GridDiagram
from pipeline.errors import EmbeddingError

logger = logging.getLogger(__name__)

Arc = Tuple[str, int, int]  # ("h", row, 0) | ("v", column, 0) | ("j", column, row)


class KnotEmbedding(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    knot_cubes: FrozenSet[Cube]
    box: CubicalComplex
    complement: CubicalComplex


def _knot_arcs(d: GridDiagram) -> Dict[Cube, Arc]:
    owner: Dict[Cube, Arc] = {}

    def claim(cube: Cube, arc: Arc) -> None:
        if cube in owner:
            raise EmbeddingError(f"Cube {cube} claimed by {owner[cube]} and {arc}")
        owner[cube] = arc

    for row, (c1, c2) in d.horizontal_arcs().items():
        for x in range(2 * c1, 2 * c2 + 1):
            claim((x, 2 * row, 0), ("h", row, 0))
    for col, (r1, r2) in d.vertical_arcs().items():
        for y in range(2 * r1, 2 * r2 + 1):
            claim((2 * col, y, 2), ("v", col, 0))
        for row in (r1, r2):
            claim((2 * col, 2 * row, 1), ("j", col, row))
    return owner


def _arcs_adjacent(a: Arc, b: Arc) -> bool:
    if a == b:
        return True
    kinds = {a[0], b[0]}
    if kinds == {"h", "v"}:
        return False
    if "j" not in kinds:
        return False
    junction, other = (a, b) if a[0] == "j" else (b, a)
    if other[0] == "j":
        return False
    _, col, row = junction
    return other == ("h", row, 0) or other == ("v", col, 0)


def _check_knot(owner: Dict[Cube, Arc], d: GridDiagram) -> None:
    cubes = set(owner)
    for (x, y, z) in cubes:
        degree = sum((x + dx, y + dy, z + dz) in cubes for dx, dy, dz in FACE_OFFSETS)
        if degree != 2:
            raise EmbeddingError(f"Knot cube {(x, y, z)} has {degree} face-neighbors")

    for (x, y, z), arc in owner.items():
        for dx, dy, dz in NEIGHBOR_OFFSETS:
            other = owner.get((x + dx, y + dy, z + dz))
            if other is not None and not _arcs_adjacent(arc, other):
                raise EmbeddingError(f"Arcs {arc} and {other} touch near {(x, y, z)}")

    if not CubicalComplex(cubes).is_connected("face"):
        raise EmbeddingError(f"Diagram {d.to_text()} is a link, not a knot")


def embed_complement(d: GridDiagram, pad: int = 2) -> KnotEmbedding:
    if pad < 2:
        raise EmbeddingError(f"pad must be at least 2, got {pad}")
    owner = _knot_arcs(d)
    _check_knot(owner, d)

    knot: Set[Cube] = set(owner)
    lo = tuple(min(c[i] for c in knot) - pad for i in range(3))
    hi = tuple(max(c[i] for c in knot) + pad for i in range(3))
    box = CubicalComplex.box((lo[0], lo[1], lo[2]), (hi[0], hi[1], hi[2]))
    complement = box.difference(knot)

    components = complement.components("face")
    if len(components) != 1:
        raise EmbeddingError(f"Complement splits into {len(components)} face-components")

    logger.info(
        f"Embedded grid of size {d.size}: {len(knot)} knot cubes, "
        f"{len(complement)} complement cubes"
    )
    return KnotEmbedding(knot_cubes=frozenset(knot), box=box, complement=complement)
