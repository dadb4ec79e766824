import pytest

from groups.invariant import invariant_In
from groups.presentation import AbelianGroup
from groups.smith import abelianization
from knots.embedding import embed_complement
from knots.grid import load_knot_table, parse_entry, parse_grid
from pipeline.classify import classify, knot_presentation
from pipeline.fund_group import fund_group_run
from pipeline.models import PipelineSettings
from pipeline.report import ReportGenerator, classifying_indexes_by_crossing, crossing_number

Z = AbelianGroup(rank=1)
TREFOIL = parse_grid("[[2,5],[1,3],[2,4],[3,5],[1,4]]")
FIGURE_EIGHT = parse_entry("braid 1,-2,1,-2")


def test_unknot_group_is_free_on_one_generator():
    p = knot_presentation(parse_grid("[[1,2],[2,1]]"))
    assert p.generators == 1
    assert p.relators == ()
    assert invariant_In(p, 3) == frozenset({Z})


def test_unknot_raw_presentation_already_has_cyclic_homology():
    complement = embed_complement(parse_grid("[[1,2],[2,1]]")).complement
    run = fund_group_run(complement)
    assert abelianization(run.raw) == Z
    assert run.stats.shaved_cubes < run.stats.cubes


def test_trefoil():
    p = knot_presentation(TREFOIL)
    assert abelianization(p) == Z
    assert invariant_In(p, 2) == frozenset({Z, AbelianGroup(rank=1, torsion=(3,))})


def test_figure_eight():
    p = knot_presentation(FIGURE_EIGHT)
    assert abelianization(p) == Z
    assert invariant_In(p, 2) == frozenset({Z, AbelianGroup(rank=1, torsion=(5,))})


def test_invariant_ignores_mirror_and_transpose():
    expected = invariant_In(knot_presentation(TREFOIL), 2)
    assert invariant_In(knot_presentation(TREFOIL.mirror()), 2) == expected
    assert invariant_In(knot_presentation(TREFOIL.transpose()), 2) == expected


def test_orderings_agree_on_homology():
    for ordering in ("revlex", "random"):
        p = knot_presentation(FIGURE_EIGHT, PipelineSettings(ordering=ordering, seed=9))
        assert abelianization(p) == Z


def test_two_knots_separate_at_index_two():
    record = classify({"3_1": TREFOIL, "4_1": FIGURE_EIGHT}, n_start=2, n_max=3)
    assert record.complete
    assert record.classifying_index == 2


@pytest.mark.slow
def test_knots_up_to_seven_crossings(knot_table_path):
    knots = load_knot_table(knot_table_path)
    record = classify(knots, n_start=2, n_max=7)
    assert record.complete
    assert record.classifying_index == 3
    assert classifying_indexes_by_crossing(record, knots) == {3: 2, 4: 2, 5: 3, 6: 3, 7: 3}


@pytest.mark.slow
def test_worker_count_does_not_change_the_reports(knot_table_path, tmp_path):
    knots = load_knot_table(knot_table_path)
    family = {name: d for name, d in knots.items() if crossing_number(name) <= 6}
    outputs = []
    for jobs in (1, 8):
        record = classify(family, n_max=7, jobs=jobs)
        csv_path, summary_path = ReportGenerator(tmp_path / f"jobs{jobs}").generate(
            record, family
        )
        outputs.append((csv_path.read_bytes(), summary_path.read_bytes()))
    assert outputs[0] == outputs[1]
