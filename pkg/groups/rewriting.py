"""
Reidemeister-Schreier presentations of finite-index subgroups.
"""

import logging
from collections import deque
from typing import Deque, Dict, List, Set, Tuple

from groups.low_index import CosetTable
from groups.presentation import GroupPresentation
from groups.words import Word, free_reduce
from pipeline.errors import GroupError

logger = logging.getLogger(__name__)


def validate_table(p: GroupPresentation, t: CosetTable) -> None:
    """Raise GroupError unless `t` is a transitive action of `p` on its cosets."""
    if len(t.perms) != p.generators:
        raise GroupError(
            f"Coset table acts with {len(t.perms)} generators, presentation has {p.generators}"
        )
    for i, perm in enumerate(t.perms, start=1):
        if sorted(perm) != list(range(t.index)):
            raise GroupError(f"Generator {i} does not act as a permutation")
    for relator in p.relators:
        for coset in range(t.index):
            end = coset
            for letter in relator:
                end = t.act(end, letter)
            if end != coset:
                raise GroupError(f"Relator does not fix coset {coset}")

    reached = {0}
    queue: Deque[int] = deque([0])
    while queue:
        c = queue.popleft()
        for perm in t.perms:
            for image in (perm[c], perm.index(c)):
                if image not in reached:
                    reached.add(image)
                    queue.append(image)
    if len(reached) != t.index:
        raise GroupError("Coset table action is not transitive")


def _spanning_tree(t: CosetTable) -> Set[Tuple[int, int]]:
    """Positive edges (coset, generator) of a BFS tree of the coset graph."""
    tree: Set[Tuple[int, int]] = set()
    seen = {0}
    queue: Deque[int] = deque([0])
    while queue:
        c = queue.popleft()
        for gen in range(1, len(t.perms) + 1):
            for letter in (gen, -gen):
                image = t.act(c, letter)
                if image in seen:
                    continue
                seen.add(image)
                queue.append(image)
                # c --gen--> image, or image --gen--> c for the inverse letter
                tree.add((c, gen) if letter > 0 else (image, gen))
    return tree


def schreier_generators(t: CosetTable) -> Dict[Tuple[int, int], int]:
    """Number every non-tree edge (coset, generator) from 1."""
    tree = _spanning_tree(t)
    numbering: Dict[Tuple[int, int], int] = {}
    for coset in range(t.index):
        for gen in range(1, len(t.perms) + 1):
            if (coset, gen) not in tree:
                numbering[(coset, gen)] = len(numbering) + 1
    return numbering


def subgroup_presentation(p: GroupPresentation, t: CosetTable) -> GroupPresentation:
    """Presentation of the stabilizer of coset 0 on Schreier generators."""
    validate_table(p, t)
    numbering = schreier_generators(t)

    relators: List[Word] = []
    for relator in p.relators:
        for coset in range(t.index):
            rewritten: List[int] = []
            current = coset
            for letter in relator:
                gen = abs(letter)
                if letter > 0:
                    edge = (current, gen)
                    current = t.act(current, letter)
                    sign = 1
                else:
                    current = t.act(current, letter)
                    edge = (current, gen)
                    sign = -1
                schreier = numbering.get(edge)
                if schreier is not None:
                    rewritten.append(sign * schreier)
            relators.append(free_reduce(rewritten))

    names = tuple(f"{p.generator_names[g - 1]}_{c}" for (c, g) in numbering)
    return GroupPresentation(
        generators=len(numbering), relators=tuple(relators), names=names
    )
