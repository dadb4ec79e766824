"""
Integer Smith normal form with exact Python integers.

Only the diagonal is returned; the transforming matrices are never needed by
the homology computations in this package.
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from groups.presentation import AbelianGroup, GroupPresentation
from groups.words import exponent_sums

logger = logging.getLogger(__name__)


def _least_entry(a: List[List[int]], s: int) -> Optional[Tuple[int, int]]:
    """Position of the nonzero entry of least absolute value in the block a[s:, s:]."""
    best: Optional[Tuple[int, int]] = None
    best_abs = 0
    for i in range(s, len(a)):
        row = a[i]
        for j in range(s, len(row)):
            v = row[j]
            if v and (best is None or abs(v) < best_abs):
                best, best_abs = (i, j), abs(v)
                if best_abs == 1:
                    return best
    return best


def _move_to_start(a: List[List[int]], s: int, pos: Tuple[int, int]) -> None:
    i, j = pos
    if i != s:
        a[s], a[i] = a[i], a[s]
    if j != s:
        for row in a:
            row[s], row[j] = row[j], row[s]


def _clear_edging(a: List[List[int]], s: int) -> bool:
    """Reduce row s and column s modulo the pivot; True when both became zero."""
    pivot = a[s][s]
    clean = True
    for i in range(s + 1, len(a)):
        if a[i][s]:
            q = a[i][s] // pivot
            row_i, row_s = a[i], a[s]
            for j in range(s, len(row_i)):
                row_i[j] -= q * row_s[j]
            clean = clean and not a[i][s]
    cols = len(a[s])
    for j in range(s + 1, cols):
        if a[s][j]:
            q = a[s][j] // pivot
            for row in a[s:]:
                row[j] -= q * row[s]
            clean = clean and not a[s][j]
    return clean


def _least_in_edging(a: List[List[int]], s: int) -> Tuple[int, int]:
    pos, least = (s, s), abs(a[s][s])
    for i in range(s + 1, len(a)):
        if a[i][s] and abs(a[i][s]) < least:
            pos, least = (i, s), abs(a[i][s])
    for j in range(s + 1, len(a[s])):
        if a[s][j] and abs(a[s][j]) < least:
            pos, least = (s, j), abs(a[s][j])
    return pos


def _non_divisible_row(a: List[List[int]], s: int) -> Optional[int]:
    pivot = a[s][s]
    for i in range(s + 1, len(a)):
        for j in range(s + 1, len(a[i])):
            if a[i][j] % pivot:
                return i
    return None


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> List[int]:
    """
    Nonzero Smith diagonal d1 | d2 | ... as positive integers.

    Pivots are chosen by least absolute value; only unimodular row and column
    operations are applied.
    """
    m = np.array(matrix, dtype=object)
    if m.size == 0:
        return []
    a: List[List[int]] = [[int(v) for v in row] for row in m.reshape(m.shape[0], -1)]

    diagonal: List[int] = []
    s = 0
    while s < min(len(a), len(a[0])):
        pos = _least_entry(a, s)
        if pos is None:
            break
        _move_to_start(a, s, pos)
        while True:
            if not _clear_edging(a, s):
                _move_to_start(a, s, _least_in_edging(a, s))
                continue
            bad = _non_divisible_row(a, s)
            if bad is None:
                break
            a[s] = [x + y for x, y in zip(a[s], a[bad])]
        diagonal.append(abs(a[s][s]))
        s += 1
    return diagonal


def relation_matrix(p: GroupPresentation) -> List[List[int]]:
    """Exponent-sum matrix: one row per relator, one column per generator."""
    rows = []
    for relator in p.relators:
        sums = exponent_sums(relator)
        rows.append([sums.get(g, 0) for g in range(1, p.generators + 1)])
    return rows


def abelianization(p: GroupPresentation) -> AbelianGroup:
    if not p.relators or p.generators == 0:
        return AbelianGroup(rank=p.generators)
    return AbelianGroup.from_diagonal(p.generators, smith_normal_form(relation_matrix(p)))
