"""
Tietze simplification of finite presentations.

Each pass tries, in order: free and cyclic reduction, dropping empty and
duplicate relators, eliminating a generator that occurs exactly once in some
relator, and shortening relators by substituting pieces of shorter ones. The
loop stops at a fixpoint or when the pass budget runs out.
"""

import logging
from typing import Dict, List, Optional, Set, Tuple

from pydantic import BaseModel, Field

from groups.presentation import GroupPresentation
from groups.words import (
    Word,
    canonical_cyclic,
    cyclic_reduce,
    encode,
    inverse,
    occurrences,
    rotate,
    substitute_generator,
)

logger = logging.getLogger(__name__)


class TietzeSettings(BaseModel):
    max_passes: int = Field(default=1000, ge=1)
    length_factor: int = Field(default=10, ge=1)


def _reduce_all(relators: List[Word]) -> List[Word]:
    return [cyclic_reduce(r) for r in relators]


def _drop_trivial(relators: List[Word]) -> List[Word]:
    seen: Set[Word] = set()
    kept: List[Word] = []
    for r in relators:
        if not r:
            continue
        key = canonical_cyclic(r)
        if key in seen:
            continue
        seen.add(key)
        kept.append(r)
    return kept


def _eliminate_one(
    relators: List[Word], length_cap: int
) -> Optional[Tuple[int, List[Word]]]:
    """Solve one relator for a generator occurring in it exactly once."""
    order = sorted(range(len(relators)), key=lambda i: (len(relators[i]), i))
    for index in order:
        relator = relators[index]
        for gen in sorted({abs(x) for x in relator}):
            if occurrences(relator, gen) != 1:
                continue
            position = next(i for i, x in enumerate(relator) if abs(x) == gen)
            rotated = rotate(relator, position)
            sign, rest = rotated[0], rotated[1:]
            # x^s rest = 1, so x = rest^-1 for s = +1 and x = rest for s = -1.
            value = inverse(rest) if sign > 0 else rest
            updated = [
                cyclic_reduce(substitute_generator(r, gen, value))
                for i, r in enumerate(relators)
                if i != index
            ]
            if sum(len(r) for r in updated) > length_cap:
                continue
            return gen, updated
    return None


def _shorten_with(short: Word, target: Word) -> Optional[Word]:
    """
    Replace a piece of `target` longer than half of a cyclic conjugate of
    `short` (or its inverse) with the inverse of the complementary piece.
    """
    n = len(short)
    if n == 0 or len(target) < n // 2 + 1:
        return None
    conjugates = sorted({rotate(w, i) for w in (short, inverse(short)) for i in range(n)})
    encoded_target = encode(target)
    for piece_len in range(n, n // 2, -1):
        if piece_len > len(target):
            continue
        doubled = encoded_target + encoded_target[: piece_len - 1]
        for conj in conjugates:
            start = doubled.find(encode(conj[:piece_len]))
            if start >= 0:
                rotated = rotate(target, start)
                return cyclic_reduce(inverse(conj[piece_len:]) + rotated[piece_len:])
    return None


def _shorten_pass(relators: List[Word]) -> bool:
    changed = False
    order = sorted(range(len(relators)), key=lambda i: (len(relators[i]), i))
    for s_index in order:
        short = relators[s_index]
        for t_index in range(len(relators)):
            if t_index == s_index or len(relators[t_index]) < len(short):
                continue
            shorter = _shorten_with(short, relators[t_index])
            if shorter is not None and len(shorter) < len(relators[t_index]):
                relators[t_index] = shorter
                changed = True
    return changed


def tietze_simplify(
    p: GroupPresentation, settings: Optional[TietzeSettings] = None
) -> GroupPresentation:
    settings = settings or TietzeSettings()
    generators: Set[int] = set(range(1, p.generators + 1))
    relators: List[Word] = list(p.relators)
    length_cap = settings.length_factor * max(p.total_length, 1)

    passes = 0
    while passes < settings.max_passes:
        passes += 1
        before = (len(generators), list(relators))
        relators = _drop_trivial(_reduce_all(relators))

        eliminated = _eliminate_one(relators, length_cap)
        if eliminated is not None:
            gen, relators = eliminated
            generators.discard(gen)
            continue

        if _shorten_pass(relators):
            continue
        if (len(generators), relators) == before:
            break

    relators = _drop_trivial(_reduce_all(relators))
    result = _renumber(p, generators, relators)
    logger.debug(
        f"Tietze: <{p.generators}|{len(p.relators)}> -> "
        f"<{result.generators}|{len(result.relators)}> in {passes} passes"
    )
    return result


def _renumber(
    p: GroupPresentation, generators: Set[int], relators: List[Word]
) -> GroupPresentation:
    kept = sorted(generators)
    new_id: Dict[int, int] = {old: i + 1 for i, old in enumerate(kept)}
    renamed = tuple(
        tuple(new_id[abs(x)] if x > 0 else -new_id[abs(x)] for x in r) for r in relators
    )
    names = tuple(p.generator_names[g - 1] for g in kept)
    return GroupPresentation(generators=len(kept), relators=renamed, names=names)
