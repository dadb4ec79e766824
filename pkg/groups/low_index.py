"""
Low-index subgroup enumeration by coset-table backtracking.

Subgroups of index at most n correspond to transitive actions on n or fewer
points with a chosen base point. Tables are filled at their first undefined
entry (row-major), every relator is scanned at every coset to deduce forced
entries or detect contradictions, and a partial table is abandoned as soon as
some other base point is known to give a smaller standard table, which keeps
one representative per conjugacy class.

Cosets are numbered from 0 internally; column 2i holds the action of generator
i+1 and column 2i+1 that of its inverse.
"""

import logging
from typing import List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from groups.presentation import GroupPresentation
from groups.words import Word

logger = logging.getLogger(__name__)

UNDEFINED = -1
Table = List[List[int]]


class CosetTable(BaseModel):
    """Permutation action of each generator on cosets 0..index-1."""

    model_config = ConfigDict(frozen=True)

    index: int = Field(ge=1)
    perms: Tuple[Tuple[int, ...], ...] = ()

    @model_validator(mode="after")
    def _check_perms(self) -> "CosetTable":
        for perm in self.perms:
            if len(perm) != self.index:
                raise ValueError("each permutation must act on every coset")
        return self

    def act(self, coset: int, letter: int) -> int:
        """Image of a coset under one signed generator letter."""
        perm = self.perms[abs(letter) - 1]
        if letter > 0:
            return perm[coset]
        return perm.index(coset)

    def rows(self) -> Table:
        """Full table with inverse columns, as used during enumeration."""
        rows = [[UNDEFINED] * (2 * len(self.perms)) for _ in range(self.index)]
        for i, perm in enumerate(self.perms):
            for c, image in enumerate(perm):
                rows[c][2 * i] = image
                rows[image][2 * i + 1] = c
        return rows

    @classmethod
    def from_rows(cls, rows: Table, generators: int) -> "CosetTable":
        perms = tuple(tuple(row[2 * i] for row in rows) for i in range(generators))
        return cls(index=len(rows), perms=perms)


def _columns(word: Word) -> List[int]:
    return [2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1 for x in word]


def _scan(table: Table, relator: Sequence[int], coset: int) -> Optional[bool]:
    """
    Scan one relator at one coset.

    Returns False on a contradiction, True when an entry (and its inverse)
    was deduced, None when nothing changed.
    """
    f, i, n = coset, 0, len(relator)
    while i < n and table[f][relator[i]] != UNDEFINED:
        f = table[f][relator[i]]
        i += 1
    if i == n:
        return None if f == coset else False

    b, j = coset, n - 1
    while j >= i and table[b][relator[j] ^ 1] != UNDEFINED:
        b = table[b][relator[j] ^ 1]
        j -= 1
    if j < i:
        return None if f == b else False
    if j == i:
        col = relator[i]
        if table[b][col ^ 1] != UNDEFINED or table[f][col] != UNDEFINED:
            return False
        table[f][col] = b
        table[b][col ^ 1] = f
        return True
    return None


def _deduce(table: Table, relators: List[List[int]]) -> bool:
    """Scan to a fixpoint; False when the table cannot be completed."""
    changed = True
    while changed:
        changed = False
        for coset in range(len(table)):
            for relator in relators:
                outcome = _scan(table, relator, coset)
                if outcome is False:
                    return False
                if outcome:
                    changed = True
    return True


def _compare_from(table: Table, base: int) -> int:
    """
    Compare the standard table seen from `base` with `table` itself.

    Returns -1 if it is smaller at the first position where both are known,
    1 if larger, 0 if equal or undecided.
    """
    new_of = {base: 0}
    old_of = [base]
    width = len(table[0])
    row = 0
    while row < len(old_of):
        for col in range(width):
            image = table[old_of[row]][col]
            mine = table[row][col] if row < len(table) else UNDEFINED
            if image == UNDEFINED or mine == UNDEFINED:
                return 0
            if image not in new_of:
                new_of[image] = len(old_of)
                old_of.append(image)
            renumbered = new_of[image]
            if renumbered != mine:
                return -1 if renumbered < mine else 1
        row += 1
    return 0


def _is_pruned(table: Table) -> bool:
    return any(_compare_from(table, base) < 0 for base in range(1, len(table)))


def _first_undefined(table: Table) -> Optional[Tuple[int, int]]:
    for c, row in enumerate(table):
        for col, value in enumerate(row):
            if value == UNDEFINED:
                return c, col
    return None


def low_index_subgroups(p: GroupPresentation, n: int) -> List[CosetTable]:
    """One coset table per conjugacy class of subgroups of index <= n."""
    if n < 1:
        raise ValueError("n must be at least 1")
    g = p.generators
    if g == 0:
        return [CosetTable(index=1)]
    relators = [_columns(r) for r in p.relators if r]
    found: List[CosetTable] = []

    def backtrack(table: Table) -> None:
        position = _first_undefined(table)
        if position is None:
            found.append(CosetTable.from_rows(table, g))
            return
        coset, col = position
        inv = col ^ 1
        candidates = [d for d in range(len(table)) if table[d][inv] == UNDEFINED]
        if len(table) < n:
            candidates.append(len(table))
        for d in candidates:
            trial = [row[:] for row in table]
            if d == len(trial):
                trial.append([UNDEFINED] * (2 * g))
            trial[coset][col] = d
            trial[d][inv] = coset
            if _deduce(trial, relators) and not _is_pruned(trial):
                backtrack(trial)

    start: Table = [[UNDEFINED] * (2 * g)]
    if _deduce(start, relators):
        backtrack(start)
    found.sort(key=lambda t: (t.index, t.perms))
    logger.debug(f"Low-index search: {len(found)} subgroups of index <= {n}")
    return found
