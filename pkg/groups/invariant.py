"""
The I^n invariant: abelianizations of all subgroups of index at most n.
"""

import logging
from typing import Dict, List

from groups.low_index import low_index_subgroups
from groups.presentation import AbelianGroup, GroupPresentation, Invariant, format_invariant
from groups.rewriting import subgroup_presentation
from groups.smith import abelianization

logger = logging.getLogger(__name__)


def subgroup_abelianizations(p: GroupPresentation, n: int) -> Dict[int, List[AbelianGroup]]:
    """Abelianization of every conjugacy class of subgroups, grouped by index."""
    by_index: Dict[int, List[AbelianGroup]] = {}
    for table in low_index_subgroups(p, n):
        group = abelianization(subgroup_presentation(p, table))
        by_index.setdefault(table.index, []).append(group)
    return by_index


def invariant_In(p: GroupPresentation, n: int) -> Invariant:
    """Set of isomorphism classes of H1 over subgroups of index <= n."""
    if n < 1:
        raise ValueError("n must be at least 1")
    invariant = frozenset(
        group for groups in subgroup_abelianizations(p, n).values() for group in groups
    )
    logger.debug(f"I^{n} = {format_invariant(invariant)}")
    return invariant
