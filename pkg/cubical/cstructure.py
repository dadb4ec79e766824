"""
C-structures: two-dimensional combinatorial complexes carrying fundamental-group
data.

Vertices and edges are integer ids, each edge has a source and target vertex,
and each face has a boundary word of signed edge ids (a closed edge path).
Alpha-collapses remove a vertex-edge or edge-face reduction pair while keeping
every boundary word a closed path.
"""

import copy
import logging
from collections import Counter, deque
from typing import Deque, Dict, Iterable, List, Literal, Optional, Set, Tuple

from pydantic import BaseModel, ConfigDict

from cubical.lattice import Cell, CubicalComplex, dimension
from cubical.morse import CubicalView, DiscreteVectorField, coreduction_dvf
from groups.presentation import AbelianGroup, GroupPresentation
from groups.smith import smith_normal_form
from groups.words import Word, cyclic_reduce, inverse
from pipeline.errors import CStructureError

logger = logging.getLogger(__name__)

CCell = Tuple[int, int]  # (dimension, id)
BASE_VERTEX = 0


class ReductionPairC(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["vertex-edge", "edge-face"]
    lower: int
    upper: int

    @classmethod
    def from_vector(cls, tau: CCell, sigma: CCell) -> "ReductionPairC":
        if (tau[0], sigma[0]) == (0, 1):
            return cls(kind="vertex-edge", lower=tau[1], upper=sigma[1])
        if (tau[0], sigma[0]) == (1, 2):
            return cls(kind="edge-face", lower=tau[1], upper=sigma[1])
        raise CStructureError(f"No alpha-collapse for the pair {tau}, {sigma}")


def substitute(w: Iterable[int], z: int, zeta: Iterable[int]) -> Word:
    """Replace edge z by the path zeta and z^-1 by its inverse."""
    zeta = tuple(zeta)
    if any(abs(letter) == z for letter in zeta):
        raise CStructureError(f"Edge {z} occurs in its own substitute")
    zeta_inv = inverse(zeta)
    out: List[int] = []
    for letter in w:
        if letter == z:
            out.extend(zeta)
        elif letter == -z:
            out.extend(zeta_inv)
        else:
            out.append(letter)
    return tuple(out)


class CStructure:
    """
    Mutable C-structure with occurrence indexes for fast collapses.

    `reduce_words` applies free and cyclic reduction to every word touched by a
    collapse; turn it off to observe raw substitutions.
    """

    def __init__(
        self,
        vertices: Iterable[int],
        edges: Dict[int, Tuple[int, int]],
        faces: Dict[int, Iterable[int]],
        reduce_words: bool = True,
    ):
        self.vertices: Set[int] = set(vertices)
        self.edges: Dict[int, Tuple[int, int]] = dict(edges)
        self.faces: Dict[int, Deque[int]] = {f: deque(w) for f, w in faces.items()}
        self.reduce_words = reduce_words

        self._vertex_edges: Dict[int, Set[int]] = {v: set() for v in self.vertices}
        for e, (s, t) in self.edges.items():
            if s not in self.vertices or t not in self.vertices:
                raise CStructureError(f"Edge {e} references a missing vertex")
            self._vertex_edges[s].add(e)
            self._vertex_edges[t].add(e)
        self._edge_faces: Dict[int, Set[int]] = {e: set() for e in self.edges}
        for f, word in self.faces.items():
            for letter in word:
                if abs(letter) not in self.edges:
                    raise CStructureError(f"Face {f} references missing edge {abs(letter)}")
                self._edge_faces[abs(letter)].add(f)

    def copy(self) -> "CStructure":
        return copy.deepcopy(self)

    def __repr__(self) -> str:
        return (
            f"CStructure({len(self.vertices)} vertices, {len(self.edges)} edges, "
            f"{len(self.faces)} faces)"
        )

    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.faces)

    def endpoints(self, letter: int) -> Tuple[int, int]:
        """Start and end vertex of a signed edge letter."""
        s, t = self.edges[abs(letter)]
        return (s, t) if letter > 0 else (t, s)

    def is_closed_path(self, word: Iterable[int]) -> bool:
        word = list(word)
        if not word:
            return True
        for a, b in zip(word, word[1:] + word[:1]):
            if self.endpoints(a)[1] != self.endpoints(b)[0]:
                return False
        return True

    def check_cycles(self) -> None:
        for f, word in self.faces.items():
            if not self.is_closed_path(word):
                raise CStructureError(f"Boundary word of face {f} is not a closed path")

    def _set_word(self, face: int, word: Iterable[int]) -> None:
        word = tuple(word)
        if self.reduce_words:
            word = cyclic_reduce(word)
        for letter in self.faces.get(face, ()):
            self._edge_faces[abs(letter)].discard(face)
        self.faces[face] = deque(word)
        for letter in word:
            self._edge_faces[abs(letter)].add(face)

    def _remove_face(self, face: int) -> None:
        for letter in self.faces.pop(face):
            self._edge_faces[abs(letter)].discard(face)

    def _remove_edge(self, edge: int) -> None:
        s, t = self.edges.pop(edge)
        self._vertex_edges[s].discard(edge)
        self._vertex_edges[t].discard(edge)
        del self._edge_faces[edge]

    def collapse(self, pair: ReductionPairC) -> "CStructure":
        """Apply one alpha-collapse in place and return self."""
        if pair.kind == "vertex-edge":
            self._collapse_vertex_edge(pair.lower, pair.upper)
        else:
            self._collapse_edge_face(pair.lower, pair.upper)
        return self

    def _collapse_vertex_edge(self, vertex: int, edge: int) -> None:
        if vertex not in self.vertices or edge not in self.edges:
            raise CStructureError(f"Pair ({vertex}, {edge}) is not in the structure")
        s, t = self.edges[edge]
        if s == t:
            raise CStructureError(f"Edge {edge} is a loop; it cannot collapse a vertex")
        if vertex not in (s, t):
            raise CStructureError(f"Vertex {vertex} is not an endpoint of edge {edge}")
        other = t if vertex == s else s

        # The contracted edge becomes a constant path, so its letters vanish.
        for face in sorted(self._edge_faces[edge]):
            self._set_word(
                face, (x for x in self.faces[face] if abs(x) != edge)
            )
        self._remove_edge(edge)

        for e in sorted(self._vertex_edges.pop(vertex)):
            a, b = self.edges[e]
            self.edges[e] = (other if a == vertex else a, other if b == vertex else b)
            self._vertex_edges[other].add(e)
        self.vertices.discard(vertex)

    def _collapse_edge_face(self, edge: int, face: int) -> None:
        if edge not in self.edges or face not in self.faces:
            raise CStructureError(f"Pair ({edge}, {face}) is not in the structure")
        word = list(self.faces[face])
        positions = [i for i, x in enumerate(word) if abs(x) == edge]
        if len(positions) != 1:
            raise CStructureError(
                f"Edge {edge} occurs {len(positions)} times in face {face}; need exactly 1"
            )
        rotated = word[positions[0]:] + word[: positions[0]]
        sign, rest = rotated[0], tuple(rotated[1:])
        replacement = inverse(rest) if sign > 0 else rest

        self._remove_face(face)
        for other in sorted(self._edge_faces[edge]):
            self._set_word(other, substitute(self.faces[other], edge, replacement))
        self._remove_edge(edge)

    def presentation(self) -> GroupPresentation:
        return presentation(self)

    def boundary_matrices(self) -> Tuple[List[List[int]], List[List[int]]]:
        """Abelianized boundary matrices (edges x vertices, faces x edges)."""
        vertex_index = {v: i for i, v in enumerate(sorted(self.vertices))}
        edge_index = {e: i for i, e in enumerate(sorted(self.edges))}
        d1 = []
        for e in sorted(self.edges):
            row = [0] * len(vertex_index)
            s, t = self.edges[e]
            row[vertex_index[t]] += 1
            row[vertex_index[s]] -= 1
            d1.append(row)
        d2 = []
        for f in sorted(self.faces):
            row = [0] * len(edge_index)
            for letter in self.faces[f]:
                row[edge_index[abs(letter)]] += 1 if letter > 0 else -1
            d2.append(row)
        return d1, d2


class CStructureView:
    """ComplexView over a C-structure; cells are (dimension, id) pairs."""

    def __init__(self, c: CStructure):
        self._c = c
        self._cofaces: Dict[CCell, List[CCell]] = {}
        for v in c.vertices:
            self._cofaces[(0, v)] = []
        for e, (s, t) in sorted(c.edges.items()):
            self._cofaces[(1, e)] = []
            for v in {s, t}:
                self._cofaces[(0, v)].append((1, e))
        for f, word in sorted(c.faces.items()):
            self._cofaces[(2, f)] = []
            for e in sorted({abs(x) for x in word}):
                self._cofaces[(1, e)].append((2, f))

    def cells(self) -> List[CCell]:
        return list(self._cofaces)

    def dimension(self, cell: CCell) -> int:
        return cell[0]

    def boundary(self, cell: CCell) -> Counter:
        dim, ident = cell
        if dim == 0:
            return Counter()
        if dim == 1:
            s, t = self._c.edges[ident]
            return Counter({(0, s): 1, (0, t): 1}) if s != t else Counter({(0, s): 2})
        return Counter((1, abs(x)) for x in self._c.faces[ident])

    def coboundary(self, cell: CCell) -> List[CCell]:
        return self._cofaces[cell]

    def is_regular_facet(self, tau: CCell, sigma: CCell) -> bool:
        return self.boundary(sigma).get(tau, 0) == 1


def from_quotient(
    k: CubicalComplex, a: CubicalComplex, reduce_words: bool = True
) -> CStructure:
    """
    C-structure of k/a: cells of k outside the closure of a, with the closure
    of a crushed to the base vertex 0.
    """
    if not a.cubes <= k.cubes:
        raise CStructureError("The collapsible subcomplex is not contained in k")
    if not len(a):
        raise CStructureError("The collapsible subcomplex is empty")
    if not is_collapsible(a):
        raise CStructureError("The subcomplex to crush is not collapsible")
    crushed = a.cells()

    remaining = sorted(cell for cell in k.cells() if cell not in crushed)
    vertex_id: Dict[Cell, int] = {}
    edge_id: Dict[Cell, int] = {}
    faces: Dict[int, List[int]] = {}

    for cell in remaining:
        if dimension(cell) == 0:
            vertex_id[cell] = len(vertex_id) + 1

    def vertex_of(cell: Cell) -> int:
        return BASE_VERTEX if cell in crushed else vertex_id[cell]

    edges: Dict[int, Tuple[int, int]] = {}
    for cell in remaining:
        if dimension(cell) == 1:
            axis = next(i for i, c in enumerate(cell) if c & 1)
            lo, hi = list(cell), list(cell)
            lo[axis] -= 1
            hi[axis] += 1
            ident = len(edge_id) + 1
            edge_id[cell] = ident
            edges[ident] = (vertex_of(tuple(lo)), vertex_of(tuple(hi)))

    for cell in remaining:
        if dimension(cell) == 2:
            ident = len(faces) + 1
            faces[ident] = [
                letter
                for letter in _square_word(cell, edge_id)
                if letter is not None
            ]

    c = CStructure(
        [BASE_VERTEX] + list(vertex_id.values()),
        edges,
        faces,
        reduce_words=reduce_words,
    )
    logger.info(
        f"C-structure of quotient: {len(c.vertices)} vertices, "
        f"{len(c.edges)} edges, {len(c.faces)} faces"
    )
    return c


def _square_word(cell: Cell, edge_id: Dict[Cell, int]) -> List[Optional[int]]:
    """Counterclockwise boundary of a square in its (i, j) plane, i < j."""
    i, j = [axis for axis, c in enumerate(cell) if c & 1]

    def shifted(di: int, dj: int) -> Cell:
        moved = list(cell)
        moved[i] += di
        moved[j] += dj
        return (moved[0], moved[1], moved[2])

    letters = []
    for offset, sign in (((0, -1), 1), ((1, 0), 1), ((0, 1), -1), ((-1, 0), -1)):
        edge = edge_id.get(shifted(*offset))
        letters.append(None if edge is None else sign * edge)
    return letters


def is_collapsible(k: CubicalComplex) -> bool:
    """True when coreduction leaves a single critical vertex."""
    if not len(k):
        return False
    dvf = coreduction_dvf(CubicalView.from_complex(k))
    return len(dvf.critical) == 1


def alpha_collapse(c: CStructure, pair: ReductionPairC, in_place: bool = False) -> CStructure:
    target = c if in_place else c.copy()
    return target.collapse(pair)


def collapse_field(c: CStructure, dvf: DiscreteVectorField) -> CStructure:
    """Collapse every vector of the field, in discovery order, in place."""
    for tau, sigma in dvf.vectors:
        c.collapse(ReductionPairC.from_vector(tau, sigma))
    return c


def presentation(c: CStructure) -> GroupPresentation:
    """Edges become generators (renumbered in id order), face words relators."""
    if len(c.vertices) != 1:
        raise CStructureError(
            f"A presentation needs exactly one vertex, found {len(c.vertices)}"
        )
    order = sorted(c.edges)
    new_id = {e: i + 1 for i, e in enumerate(order)}
    relators = tuple(
        tuple(new_id[abs(x)] if x > 0 else -new_id[abs(x)] for x in c.faces[f])
        for f in sorted(c.faces)
    )
    names = tuple(f"e{e}" for e in order)
    return GroupPresentation(generators=len(order), relators=relators, names=names)


def cellular_h1(c: CStructure) -> AbelianGroup:
    """H1 of the cell complex straight from its abelianized boundary maps."""
    d1, d2 = c.boundary_matrices()
    rank_d1 = len(smith_normal_form(d1)) if d1 and d1[0] else 0
    diagonal = smith_normal_form(d2) if d2 and d2[0] else []
    cycles = len(c.edges) - rank_d1
    return AbelianGroup.from_diagonal(cycles, diagonal)
