"""
Discrete vector fields by the coreduction method.

The construction works on anything that satisfies ComplexView, so the same code
runs on closed cubical cell sets and on C-structures.
"""

import logging
import random
from collections import Counter, deque
from typing import (
    Deque,
    Dict,
    FrozenSet,
    Hashable,
    Iterable,
    List,
    Literal,
    Protocol,
    Set,
    Tuple,
    TypeVar,
)

import networkx as nx
from pydantic import BaseModel, ConfigDict

from cubical.lattice import Cell, CubicalComplex, boundary, dimension

logger = logging.getLogger(__name__)

Ordering = Literal["lex", "revlex", "random"]
ORDERINGS: Tuple[str, ...] = ("lex", "revlex", "random")

C = TypeVar("C", bound=Hashable)


class ComplexView(Protocol):
    def cells(self) -> Iterable[Hashable]: ...

    def dimension(self, cell: Hashable) -> int: ...

    def boundary(self, cell: Hashable) -> Counter: ...

    def coboundary(self, cell: Hashable) -> List[Hashable]: ...

    def is_regular_facet(self, tau: Hashable, sigma: Hashable) -> bool: ...


class CubicalView:
    """ComplexView over a closed set of Khalimsky cells."""

    def __init__(self, cells: Iterable[Cell]):
        self._cells: FrozenSet[Cell] = frozenset(cells)

    @classmethod
    def from_complex(cls, complex: CubicalComplex) -> "CubicalView":
        return cls(complex.cells())

    def cells(self) -> FrozenSet[Cell]:
        return self._cells

    def dimension(self, cell: Cell) -> int:
        return dimension(cell)

    def boundary(self, cell: Cell) -> Counter:
        return Counter(f for f in boundary(cell) if f in self._cells)

    def coboundary(self, cell: Cell) -> List[Cell]:
        cofaces = []
        for axis, c in enumerate(cell):
            if c & 1:
                continue
            for shifted in (c - 1, c + 1):
                coface = list(cell)
                coface[axis] = shifted
                candidate = (coface[0], coface[1], coface[2])
                if candidate in self._cells:
                    cofaces.append(candidate)
        return cofaces

    def is_regular_facet(self, tau: Cell, sigma: Cell) -> bool:
        # Cubical cells are regular: every facet occurs once.
        return tau in self._cells and tau in boundary(sigma)


class DiscreteVectorField(BaseModel):
    """Vectors (tau, sigma) in discovery order plus the critical cells."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    vectors: Tuple[Tuple[Hashable, Hashable], ...] = ()
    critical: Tuple[Hashable, ...] = ()

    @property
    def pairing(self) -> Dict[Hashable, Hashable]:
        return dict(self.vectors)

    def critical_by_dimension(self, view: ComplexView) -> Dict[int, int]:
        counts: Dict[int, int] = {}
        for cell in self.critical:
            d = view.dimension(cell)
            counts[d] = counts.get(d, 0) + 1
        return counts

    def is_partition_of(self, cells: Iterable[Hashable]) -> bool:
        """Domain, image and critical set are disjoint and cover `cells`."""
        domain = [t for t, _ in self.vectors]
        image = [s for _, s in self.vectors]
        listed = domain + image + list(self.critical)
        return len(listed) == len(set(listed)) and set(listed) == set(cells)

    def dump(self, view: ComplexView) -> str:
        """Debug text: `VEC dim tau sigma` and `CRIT dim sigma` lines."""
        lines = [
            f"VEC {view.dimension(t)} {_format_cell(t)} {_format_cell(s)}"
            for t, s in self.vectors
        ]
        lines += [f"CRIT {view.dimension(c)} {_format_cell(c)}" for c in self.critical]
        return "\n".join(lines) + ("\n" if lines else "")


def _format_cell(cell: Hashable) -> str:
    if isinstance(cell, tuple):
        return ",".join(str(c) for c in cell)
    return str(cell)


def order_cells(cells: Iterable[C], ordering: Ordering = "lex", seed: int = 0) -> List[C]:
    """Initial cell order for a policy; `random` shuffles the sorted order."""
    ordered = sorted(cells)
    if ordering == "lex":
        return ordered
    if ordering == "revlex":
        return ordered[::-1]
    if ordering == "random":
        random.Random(seed).shuffle(ordered)
        return ordered
    raise ValueError(f"Unknown ordering policy: {ordering}")


def coreduction_dvf(
    view: ComplexView, ordering: Ordering = "lex", seed: int = 0
) -> DiscreteVectorField:
    """
    Build an acyclic discrete vector field by coreductions.

    Whenever the queue runs dry the first remaining cell of minimal dimension
    becomes critical. A dequeued cell whose remaining boundary is a single
    regular facet of multiplicity one is paired with it; a cell with empty
    remaining boundary passes its coboundary on to the queue.
    """
    ordered = order_cells(view.cells(), ordering, seed)
    by_dimension = sorted(ordered, key=view.dimension)
    remaining: Set[Hashable] = set(ordered)
    queue: Deque[Hashable] = deque()
    queued: Set[Hashable] = set()
    vectors: List[Tuple[Hashable, Hashable]] = []
    critical: List[Hashable] = []

    def enqueue(cells: Iterable[Hashable]) -> None:
        for u in cells:
            if u in remaining and u not in queued:
                queue.append(u)
                queued.add(u)

    cursor = 0
    while remaining:
        if not queue:
            while by_dimension[cursor] not in remaining:
                cursor += 1
            r = by_dimension[cursor]
            remaining.discard(r)
            critical.append(r)
            enqueue(view.coboundary(r))
            continue

        sigma = queue.popleft()
        queued.discard(sigma)
        if sigma not in remaining:
            continue
        live = {t: m for t, m in view.boundary(sigma).items() if t in remaining}
        if len(live) == 1:
            (tau, multiplicity), = live.items()
            if multiplicity == 1 and view.is_regular_facet(tau, sigma):
                remaining.discard(tau)
                remaining.discard(sigma)
                vectors.append((tau, sigma))
                enqueue(view.coboundary(tau))
        elif not live:
            enqueue(view.coboundary(sigma))

    logger.debug(f"Coreduction: {len(vectors)} vectors, {len(critical)} critical cells")
    return DiscreteVectorField(vectors=tuple(vectors), critical=tuple(critical))


def modified_facet_graph(view: ComplexView, dvf: DiscreteVectorField) -> nx.DiGraph:
    """G_V: cell -> facet edges, reversed along every vector."""
    pairing = dvf.pairing
    graph = nx.DiGraph()
    for sigma in view.cells():
        graph.add_node(sigma)
        for tau in view.boundary(sigma):
            if pairing.get(tau) == sigma:
                graph.add_edge(tau, sigma)
            else:
                graph.add_edge(sigma, tau)
    return graph


def verify_acyclic(view: ComplexView, dvf: DiscreteVectorField) -> bool:
    try:
        cycle = nx.find_cycle(modified_facet_graph(view, dvf))
    except nx.NetworkXNoCycle:
        return True
    logger.debug(f"Vector field has a cycle of length {len(cycle)}")
    return False


def critical_euler_check(view: ComplexView, dvf: DiscreteVectorField) -> bool:
    """Alternating count of critical cells equals that of all cells."""

    def alternating(cells: Iterable[Hashable]) -> int:
        return sum(-1 if view.dimension(c) & 1 else 1 for c in cells)

    return alternating(dvf.critical) == alternating(view.cells())
