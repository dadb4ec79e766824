import itertools
from collections import Counter

import pytest

from groups.invariant import invariant_In, subgroup_abelianizations
from groups.low_index import CosetTable, low_index_subgroups
from groups.presentation import AbelianGroup, GroupPresentation
from groups.rewriting import schreier_generators, subgroup_presentation, validate_table
from groups.smith import abelianization
from groups.tietze import tietze_simplify
from pipeline.errors import GroupError

Z = AbelianGroup(rank=1)

INFINITE_CYCLIC = GroupPresentation(generators=1, names=("a",))
FREE_2 = GroupPresentation(generators=2, names=("a", "b"))
Z2 = GroupPresentation(generators=2, relators=((1, 2, -1, -2),), names=("a", "b"))
TREFOIL = GroupPresentation(generators=2, relators=((1, 1, -2, -2, -2),), names=("x", "y"))
# Two-bridge form a w = w b with w = b a^-1 b^-1 a.
FIGURE_EIGHT = GroupPresentation(
    generators=2, relators=((1, 2, -1, -2, 1, -2, -1, 2, 1, -2),), names=("a", "b")
)


def _fixes_all(perms, relator, k):
    for point in range(k):
        current = point
        for letter in relator:
            perm = perms[abs(letter) - 1]
            current = perm[current] if letter > 0 else perm.index(current)
        if current != point:
            return False
    return True


def _transitive(perms, k):
    reached, frontier = {0}, [0]
    while frontier:
        c = frontier.pop()
        for perm in perms:
            for image in (perm[c], perm.index(c)):
                if image not in reached:
                    reached.add(image)
                    frontier.append(image)
    return len(reached) == k


def brute_force_classes(p, k):
    """Transitive actions on k points up to relabeling, by exhaustive search."""
    symmetric = list(itertools.permutations(range(k)))
    classes = set()
    for perms in itertools.product(symmetric, repeat=p.generators):
        if not _transitive(perms, k):
            continue
        if not all(_fixes_all(perms, r, k) for r in p.relators):
            continue
        images = []
        for sigma in symmetric:
            conjugated = []
            for perm in perms:
                q = [0] * k
                for i in range(k):
                    q[sigma[i]] = sigma[perm[i]]
                conjugated.append(tuple(q))
            images.append(tuple(conjugated))
        classes.add(min(images))
    return len(classes)


@pytest.mark.parametrize(
    "p, n, expected",
    [(INFINITE_CYCLIC, 3, 3), (TREFOIL, 2, 2), (GroupPresentation(generators=1, relators=((1, 1),)), 2, 2)],
)
def test_subgroup_counts(p, n, expected):
    tables = low_index_subgroups(p, n)
    assert len(tables) == expected
    for t in tables:
        validate_table(p, t)


@pytest.mark.parametrize("p", [TREFOIL, FIGURE_EIGHT, Z2, FREE_2])
def test_counts_match_exhaustive_search(p):
    by_index = Counter(t.index for t in low_index_subgroups(p, 4))
    for k in range(1, 5):
        assert by_index[k] == brute_force_classes(p, k)


def test_trivial_and_degenerate_inputs():
    assert low_index_subgroups(GroupPresentation(generators=0), 3) == [CosetTable(index=1)]
    with pytest.raises(ValueError):
        low_index_subgroups(TREFOIL, 0)
    with pytest.raises(ValueError):
        invariant_In(TREFOIL, 0)


def test_table_rows_round_trip():
    t = CosetTable(index=3, perms=((1, 2, 0), (0, 2, 1)))
    assert t.act(0, 1) == 1
    assert t.act(1, -1) == 0
    assert CosetTable.from_rows(t.rows(), 2) == t
    with pytest.raises(ValueError):
        CosetTable(index=2, perms=((0,),))


def test_validate_table_rejects_bad_actions():
    with pytest.raises(GroupError):
        validate_table(INFINITE_CYCLIC, CosetTable(index=1, perms=((0,), (0,))))
    with pytest.raises(GroupError):
        validate_table(INFINITE_CYCLIC, CosetTable(index=2, perms=((0, 1),)))
    with pytest.raises(GroupError):
        validate_table(
            GroupPresentation(generators=1, relators=((1, 1),)),
            CosetTable(index=3, perms=((1, 2, 0),)),
        )
    with pytest.raises(GroupError):
        validate_table(INFINITE_CYCLIC, CosetTable(index=2, perms=((0, 0),)))


def test_free_group_subgroups_have_schreier_rank():
    for t in low_index_subgroups(FREE_2, 3):
        sub = subgroup_presentation(FREE_2, t)
        assert sub.generators == t.index + 1
        assert not sub.relators
        assert len(schreier_generators(t)) == t.index + 1


def test_index_one_subgroup_is_the_group():
    (t,) = [t for t in low_index_subgroups(TREFOIL, 2) if t.index == 1]
    assert abelianization(subgroup_presentation(TREFOIL, t)) == Z


def test_trefoil_index_two_subgroup():
    (t,) = [t for t in low_index_subgroups(TREFOIL, 2) if t.index == 2]
    sub = subgroup_presentation(TREFOIL, t)
    assert sub.names[0].startswith(("x_", "y_"))
    assert abelianization(sub) == AbelianGroup(rank=1, torsion=(3,))


def test_invariants_of_small_knots():
    assert invariant_In(INFINITE_CYCLIC, 3) == frozenset({Z})
    assert invariant_In(TREFOIL, 2) == frozenset({Z, AbelianGroup(rank=1, torsion=(3,))})
    assert invariant_In(FIGURE_EIGHT, 2) == frozenset({Z, AbelianGroup(rank=1, torsion=(5,))})
    assert invariant_In(TREFOIL, 1) == frozenset({Z})


def test_invariant_grows_with_index():
    small = invariant_In(FIGURE_EIGHT, 2)
    large = invariant_In(FIGURE_EIGHT, 3)
    assert small <= large
    assert set(subgroup_abelianizations(FIGURE_EIGHT, 3)) <= {1, 2, 3}


def test_invariant_separates_trefoil_from_figure_eight():
    assert invariant_In(TREFOIL, 2) != invariant_In(FIGURE_EIGHT, 2)


def _relabel(p, images):
    """Send generator i to the signed generator images[i - 1]."""
    relators = tuple(
        tuple(images[abs(x) - 1] if x > 0 else -images[abs(x) - 1] for x in r)
        for r in p.relators
    )
    return GroupPresentation(generators=p.generators, relators=relators)


def _with_redundant_generator(p, definition):
    """Add a generator t together with the relator t^-1 * definition."""
    t = p.generators + 1
    return GroupPresentation(
        generators=t, relators=p.relators + ((-t,) + tuple(definition),)
    )


@pytest.mark.parametrize("p", [TREFOIL, FIGURE_EIGHT], ids=["trefoil", "figure-eight"])
def test_invariant_survives_relabeling_and_tietze_moves(p):
    expected = {n: invariant_In(p, n) for n in (1, 2, 3)}
    variants = [
        _relabel(p, (2, 1)),
        _relabel(p, (-1, 2)),
        _relabel(p, (-2, -1)),
        _with_redundant_generator(p, (1, 2, -1)),
        tietze_simplify(_with_redundant_generator(_relabel(p, (2, -1)), (2, 2, 1))),
    ]
    for variant in variants:
        for n, value in expected.items():
            assert invariant_In(variant, n) == value
