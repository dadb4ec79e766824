"""
Cubical complexes over the Z^3 grid.

Cells use Khalimsky coordinates: an odd coordinate spans a unit interval and an
even coordinate is a point, so the unit cube with integer index (x, y, z) is the
3-cell (2x+1, 2y+1, 2z+1). A CubicalComplex stores its 3-cubes in a padded
bitmap and exposes the closed cell set they generate.
"""

import itertools
import logging
from functools import cached_property
from typing import (
    AbstractSet,
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Literal,
    Tuple,
    Union,
)

import networkx as nx
import numpy as np

from pipeline.errors import ComplexError

logger = logging.getLogger(__name__)

Cell = Tuple[int, int, int]
Cube = Tuple[int, int, int]

# Bit i of a neighbor mask refers to NEIGHBOR_OFFSETS[i].
NEIGHBOR_OFFSETS: Tuple[Cube, ...] = tuple(
    d for d in itertools.product((-1, 0, 1), repeat=3) if d != (0, 0, 0)
)
OFFSET_BIT: Dict[Cube, int] = {d: i for i, d in enumerate(NEIGHBOR_OFFSETS)}
FACE_OFFSETS: Tuple[Cube, ...] = tuple(
    d for d in NEIGHBOR_OFFSETS if sum(abs(c) for c in d) == 1
)

Adjacency = Literal["face", "vertex"]


def dimension(cell: Cell) -> int:
    """Number of odd coordinates."""
    return sum(c & 1 for c in cell)


def boundary(cell: Cell) -> List[Cell]:
    """Facets of a cell: every odd coordinate moved down and up by one."""
    facets: List[Cell] = []
    for axis, c in enumerate(cell):
        if c & 1:
            for shifted in (c - 1, c + 1):
                facet = list(cell)
                facet[axis] = shifted
                facets.append((facet[0], facet[1], facet[2]))
    return facets


def cube_to_cell(cube: Cube) -> Cell:
    return (2 * cube[0] + 1, 2 * cube[1] + 1, 2 * cube[2] + 1)


def cell_to_cube(cell: Cell) -> Cube:
    if dimension(cell) != 3:
        raise ComplexError(f"Cell {cell} is not a 3-cube")
    return ((cell[0] - 1) // 2, (cell[1] - 1) // 2, (cell[2] - 1) // 2)


def cube_closure(cube: Cube) -> List[Cell]:
    """The 27 cells of a closed cube, in lexicographic order."""
    x, y, z = 2 * cube[0], 2 * cube[1], 2 * cube[2]
    return [
        (x + a, y + b, z + c)
        for a, b, c in itertools.product(range(3), repeat=3)
    ]


def adjacent_cubes(cell: Cell) -> Iterator[Cube]:
    """Every cube whose closure contains the cell."""
    options = []
    for c in cell:
        if c & 1:
            options.append(((c - 1) // 2,))
        else:
            options.append((c // 2 - 1, c // 2))
    return itertools.product(*options)


def neighbor_mask_in(cube: Cube, cubes: AbstractSet[Cube]) -> int:
    """Neighbor mask of `cube` relative to an arbitrary set of cubes."""
    x, y, z = cube
    mask = 0
    for bit, (dx, dy, dz) in enumerate(NEIGHBOR_OFFSETS):
        if (x + dx, y + dy, z + dz) in cubes:
            mask |= 1 << bit
    return mask


class CubicalComplex:
    """
    A pure cubical complex given by its 3-cubes.

    The cubes live in a boolean bitmap whose box is padded by one cube on every
    side, so neighbor lookups around any stored cube stay in range. Instances
    are immutable once built.
    """

    def __init__(self, cubes: Iterable[Cube] = ()):
        self._cubes: FrozenSet[Cube] = frozenset(
            (int(x), int(y), int(z)) for x, y, z in cubes
        )
        if self._cubes:
            coords = np.array(sorted(self._cubes), dtype=np.int64)
            self._origin = coords.min(axis=0) - 1
            shape = coords.max(axis=0) - self._origin + 2
            self._bits = np.zeros(tuple(int(s) for s in shape), dtype=bool)
            local = coords - self._origin
            self._bits[local[:, 0], local[:, 1], local[:, 2]] = True
        else:
            self._origin = np.zeros(3, dtype=np.int64)
            self._bits = np.zeros((1, 1, 1), dtype=bool)

    @classmethod
    def box(cls, lo: Cube, hi: Cube) -> "CubicalComplex":
        """Solid box of cubes with indices lo <= index <= hi (inclusive)."""
        ranges = [range(a, b + 1) for a, b in zip(lo, hi)]
        return cls(itertools.product(*ranges))

    def __contains__(self, cube: object) -> bool:
        return cube in self._cubes

    def __iter__(self) -> Iterator[Cube]:
        return iter(self.sorted_cubes)

    def __len__(self) -> int:
        return len(self._cubes)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CubicalComplex):
            return NotImplemented
        return self._cubes == other._cubes

    def __hash__(self) -> int:
        return hash(self._cubes)

    def __repr__(self) -> str:
        return f"CubicalComplex({len(self._cubes)} cubes)"

    @property
    def cubes(self) -> FrozenSet[Cube]:
        return self._cubes

    @cached_property
    def sorted_cubes(self) -> List[Cube]:
        return sorted(self._cubes)

    @property
    def bounding_box(self) -> Tuple[Cube, Cube]:
        """Padded bitmap box as (lowest, highest) cube index, inclusive."""
        lo = tuple(int(v) for v in self._origin)
        hi = tuple(int(v) + s - 1 for v, s in zip(self._origin, self._bits.shape))
        return (lo[0], lo[1], lo[2]), (hi[0], hi[1], hi[2])

    def top_cells(self) -> List[Cell]:
        return [cube_to_cell(cube) for cube in self.sorted_cubes]

    def has_cube(self, cube: Cube) -> bool:
        i = cube[0] - int(self._origin[0])
        j = cube[1] - int(self._origin[1])
        k = cube[2] - int(self._origin[2])
        sx, sy, sz = self._bits.shape
        if 0 <= i < sx and 0 <= j < sy and 0 <= k < sz:
            return bool(self._bits[i, j, k])
        return False

    def has_cell(self, cell: Cell) -> bool:
        """Closure membership: some cube containing the cell is present."""
        return any(self.has_cube(cube) for cube in adjacent_cubes(cell))

    @cached_property
    def _cell_set(self) -> FrozenSet[Cell]:
        cells = set()
        for cube in self._cubes:
            cells.update(cube_closure(cube))
        return frozenset(cells)

    def cells(self) -> FrozenSet[Cell]:
        """The closed cell set generated by the cubes."""
        return self._cell_set

    def coboundary(self, cell: Cell) -> List[Cell]:
        return coboundary(cell, self)

    def neighbor_mask(self, topcell: Cell) -> int:
        return neighbor_mask(topcell, self)

    def euler_characteristic(self) -> int:
        return euler_characteristic(self)

    def components(self, adjacency: Adjacency = "vertex") -> List[FrozenSet[Cube]]:
        """
        Connected components of the cubes.

        "vertex" joins cubes sharing any cell, which is topological connectivity
        of the closed complex; "face" joins cubes sharing a square.
        """
        offsets = NEIGHBOR_OFFSETS if adjacency == "vertex" else FACE_OFFSETS
        graph = nx.Graph()
        graph.add_nodes_from(self._cubes)
        for x, y, z in self._cubes:
            for dx, dy, dz in offsets:
                other = (x + dx, y + dy, z + dz)
                if other in self._cubes:
                    graph.add_edge((x, y, z), other)
        components = [frozenset(c) for c in nx.connected_components(graph)]
        return sorted(components, key=lambda c: min(c))

    def is_connected(self, adjacency: Adjacency = "vertex") -> bool:
        return len(self.components(adjacency)) <= 1

    def difference(self, other: Iterable[Cube]) -> "CubicalComplex":
        return CubicalComplex(self._cubes - set(other))


def coboundary(cell: Cell, complex: CubicalComplex) -> List[Cell]:
    """Cells of the complex having `cell` as a facet."""
    if not complex.has_cell(cell):
        raise ComplexError(f"Cell {cell} is not in the complex")
    cofaces: List[Cell] = []
    for axis, c in enumerate(cell):
        if c & 1:
            continue
        for shifted in (c - 1, c + 1):
            coface = list(cell)
            coface[axis] = shifted
            candidate = (coface[0], coface[1], coface[2])
            if complex.has_cell(candidate):
                cofaces.append(candidate)
    return cofaces


def neighbor_mask(topcell: Cell, complex: CubicalComplex) -> int:
    """Bit i is set iff the cube at NEIGHBOR_OFFSETS[i] from `topcell` is present."""
    if dimension(topcell) != 3:
        raise ComplexError(f"neighbor_mask needs a 3-cube, got {topcell}")
    x, y, z = cell_to_cube(topcell)
    mask = 0
    for bit, (dx, dy, dz) in enumerate(NEIGHBOR_OFFSETS):
        if complex.has_cube((x + dx, y + dy, z + dz)):
            mask |= 1 << bit
    return mask


def euler_characteristic(
    cells: Union[CubicalComplex, Iterable[Cell]],
) -> int:
    """Alternating count of cells by dimension."""
    if isinstance(cells, CubicalComplex):
        cells = cells.cells()
    return sum(-1 if dimension(cell) & 1 else 1 for cell in cells)


def closure(cells: Iterable[Cell]) -> FrozenSet[Cell]:
    """All faces of the given cells, the cells themselves included."""
    closed = set()
    stack = list(cells)
    while stack:
        cell = stack.pop()
        if cell in closed:
            continue
        closed.add(cell)
        stack.extend(boundary(cell))
    return frozenset(closed)

