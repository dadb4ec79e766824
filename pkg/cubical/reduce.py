"""
Toplex-level preprocessing: shaving redundant cubes and growing a collapsible
subcomplex. Both steps are driven by the redundancy oracle.
"""

import logging
from collections import deque
from typing import Deque, Iterable, Optional, Set

from cubical.lattice import (
    FACE_OFFSETS,
    NEIGHBOR_OFFSETS,
    Cube,
    CubicalComplex,
    neighbor_mask_in,
)
from cubical.morse import Ordering, order_cells
from cubical.redundancy import RedundancyOracle, default_oracle
from pipeline.errors import ComplexError

logger = logging.getLogger(__name__)


def _neighbors(
    cube: Cube, cubes: Set[Cube], offsets: Iterable[Cube] = NEIGHBOR_OFFSETS
) -> Iterable[Cube]:
    x, y, z = cube
    for dx, dy, dz in offsets:
        other = (x + dx, y + dy, z + dz)
        if other in cubes:
            yield other


def shave(
    k: CubicalComplex,
    ordering: Ordering = "lex",
    seed: int = 0,
    oracle: Optional[RedundancyOracle] = None,
) -> CubicalComplex:
    """
    Remove redundant cubes until none is left.

    Each removal enqueues the remaining neighbors, which are rechecked in FIFO
    order. Outer passes scan in the ordering policy and stop after a pass that
    removes nothing.
    """
    oracle = oracle or default_oracle()
    cubes: Set[Cube] = set(k.cubes)
    scan = order_cells(cubes, ordering, seed)

    def redundant(cube: Cube) -> bool:
        return oracle.is_redundant(neighbor_mask_in(cube, cubes))

    removed_total = 0
    while True:
        removed = 0
        for start in scan:
            if start not in cubes or not redundant(start):
                continue
            cubes.discard(start)
            removed += 1
            queue: Deque[Cube] = deque(_neighbors(start, cubes))
            while queue:
                cube = queue.popleft()
                if cube in cubes and redundant(cube):
                    cubes.discard(cube)
                    removed += 1
                    queue.extend(_neighbors(cube, cubes))
        removed_total += removed
        if removed == 0:
            break

    logger.info(f"Shaving: {len(k)} cubes -> {len(cubes)} cubes ({removed_total} removed)")
    return CubicalComplex(cubes)


def collapsible_subset(
    k: CubicalComplex,
    ordering: Ordering = "lex",
    seed: int = 0,
    oracle: Optional[RedundancyOracle] = None,
) -> CubicalComplex:
    """
    Grow a collapsible subcomplex from the first cube of the ordering.

    A candidate joins when it is redundant with respect to the cubes already
    collected. Only face neighbors are offered, so the result is face-connected.
    """
    if not len(k):
        raise ComplexError("collapsible_subset needs a non-empty complex")
    oracle = oracle or default_oracle()
    available: Set[Cube] = set(k.cubes)
    seed_cube = order_cells(available, ordering, seed)[0]

    collected: Set[Cube] = {seed_cube}
    available.discard(seed_cube)
    queue: Deque[Cube] = deque(_neighbors(seed_cube, available, FACE_OFFSETS))
    while queue:
        cube = queue.popleft()
        if cube in collected:
            continue
        if oracle.is_redundant(neighbor_mask_in(cube, collected)):
            collected.add(cube)
            available.discard(cube)
            queue.extend(_neighbors(cube, available, FACE_OFFSETS))

    logger.info(f"Collapsible subset: {len(collected)} of {len(k)} cubes")
    return CubicalComplex(collected)
