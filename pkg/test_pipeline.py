import csv

import orjson
import pytest

from cubical.lattice import CubicalComplex
from groups.presentation import AbelianGroup
from groups.smith import abelianization
from knots.grid import parse_entry, parse_grid
from pipeline.cache import InvariantCache
from pipeline.classify import Classifier, replay
from pipeline.errors import ClassificationIncomplete, ComplexError, DisconnectedComplexError
from pipeline.fund_group import best_fund_group, fund_group, fund_group_run
from pipeline.models import InvariantResult, PipelineSettings
from pipeline.report import (
    ReportGenerator,
    classifying_indexes_by_crossing,
    computation_distribution,
    crossing_number,
)
from pipeline.writer import ResultsWriter, iter_results, read_recent

Z = AbelianGroup(rank=1)
Z2 = AbelianGroup(rank=1, torsion=(2,))
Z3 = AbelianGroup(rank=1, torsion=(3,))

DIAGRAMS = {
    "3_1": parse_grid("[[2,5],[1,3],[2,4],[3,5],[1,4]]"),
    "4_1": parse_entry("braid 1,-2,1,-2"),
    "5_1": parse_entry("braid 1,1,1,1,1"),
}

# 3_1 and 4_1 collide at n = 2 and separate at n = 3; 5_1 is unique at once.
FAKE_INVARIANTS = {
    ("3_1", 2): {Z},
    ("4_1", 2): {Z},
    ("5_1", 2): {Z, Z3},
    ("3_1", 3): {Z, Z2},
    ("4_1", 3): {Z},
}


def fake_invariant(knot, text, n):
    invariant = FAKE_INVARIANTS.get((knot, n), {Z})
    return InvariantResult(knot=knot, n=n, invariant=frozenset(invariant), generators=2, relators=1)


def exploding_invariant(knot, text, n):
    raise AssertionError(f"{knot} n={n} should have come from the cache")


# --- fundamental groups ---


def test_block_is_simply_connected():
    p = fund_group(CubicalComplex.box((0, 0, 0), (1, 1, 1)))
    assert p.generators == 0 and p.relators == ()


def test_ring_group_is_infinite_cyclic(ring):
    for ordering in ("lex", "revlex", "random"):
        assert abelianization(fund_group(ring, ordering, seed=4)) == Z


def test_hollow_shell_is_simply_connected():
    shell = CubicalComplex.box((0, 0, 0), (2, 2, 2)).difference([(1, 1, 1)])
    assert abelianization(fund_group(shell)) == AbelianGroup(rank=0)


def test_input_checks():
    with pytest.raises(DisconnectedComplexError) as excinfo:
        fund_group(CubicalComplex([(0, 0, 0), (3, 0, 0)]))
    assert excinfo.value.components == 2
    with pytest.raises(ComplexError):
        fund_group(CubicalComplex())


def test_run_statistics(ring):
    run = fund_group_run(ring)
    assert run.stats.cubes == len(ring)
    assert run.stats.shaved_cubes <= run.stats.cubes
    assert run.stats.critical_cells[0] == 1
    assert run.stats.generators_after == run.presentation.generators
    assert run.stats.to_jsonable()["ordering"] == "lex"


def test_retry_orderings_when_presentation_is_large(ring):
    assert len(best_fund_group(ring)) == 1
    runs = best_fund_group(ring, PipelineSettings(max_generators=0))
    assert {r.stats.ordering for r in runs} == {"lex", "revlex", "random"}
    keys = [r.presentation.size_key() for r in runs]
    assert keys == sorted(keys)


# --- classification bookkeeping ---


def test_collisions_move_up_one_level():
    record = Classifier(DIAGRAMS, n_start=2, n_max=4, invariant_fn=fake_invariant).run()
    assert record.complete
    assert record.classifying_index == 3
    assert record.index_of("5_1") == 2
    assert record.final["3_1"] == (3, frozenset({Z, Z2}))
    assert record.unique[(3, frozenset({Z}))] == "4_1"
    assert record.computed_at == {"3_1": [2, 3], "4_1": [2, 3], "5_1": [2]}
    assert [row[0] for row in record.rows()] == ["3_1", "4_1", "5_1"]


def test_identical_knots_overflow_at_n_max():
    knots = {"x": DIAGRAMS["3_1"], "y": DIAGRAMS["4_1"]}
    record = Classifier(knots, n_start=2, n_max=3, invariant_fn=fake_invariant).run()
    assert record.unresolved == [["x", "y"]]
    assert not record.final
    assert record.classifying_index is None
    assert record.computed_at == {"x": [2, 3], "y": [2, 3]}

    with pytest.raises(ClassificationIncomplete) as excinfo:
        Classifier(knots, n_start=2, n_max=2, invariant_fn=fake_invariant).run(strict=True)
    assert excinfo.value.unresolved == [["x", "y"]]


def test_outcome_is_independent_of_input_order():
    forward = Classifier(DIAGRAMS, invariant_fn=fake_invariant).run()
    backward = Classifier(
        dict(reversed(list(DIAGRAMS.items()))), invariant_fn=fake_invariant
    ).run()
    assert forward.final == backward.final
    assert forward.unique == backward.unique


def test_worker_pool_gives_the_same_record(tmp_path):
    with ResultsWriter(tmp_path / "serial.jsonl") as writer:
        serial = Classifier(DIAGRAMS, invariant_fn=fake_invariant, writer=writer).run()
    with ResultsWriter(tmp_path / "pooled.jsonl") as writer:
        pooled = Classifier(DIAGRAMS, jobs=2, invariant_fn=fake_invariant, writer=writer).run()
    assert serial.final == pooled.final
    assert serial.computed_at == pooled.computed_at
    assert (tmp_path / "serial.jsonl").read_bytes() == (tmp_path / "pooled.jsonl").read_bytes()


def test_bad_levels_rejected():
    with pytest.raises(ValueError):
        Classifier(DIAGRAMS, n_start=3, n_max=2)
    with pytest.raises(ValueError):
        Classifier(DIAGRAMS, n_start=0, n_max=2)


def test_replay_on_subfamilies():
    record = Classifier(DIAGRAMS, invariant_fn=fake_invariant).run()
    alone = replay(record, {"3_1": DIAGRAMS["3_1"]})
    assert alone.classifying_index == 2
    assert replay(record, DIAGRAMS).final == record.final


# --- cache ---


def test_cache_hits_and_misses(tmp_path):
    cache = InvariantCache(tmp_path / "cache", pipeline_version="1")
    text = DIAGRAMS["3_1"].to_text()
    assert cache.lookup("3_1", text, 2) is None

    cache.store(text, fake_invariant("3_1", text, 2))
    hit = cache.lookup("3_1", text, 2)
    assert hit is not None and hit.invariant == frozenset({Z})
    # Whitespace does not change the key.
    assert cache.lookup("3_1", text.replace(",", ", "), 2) is not None

    assert cache.lookup("3_1", text, 3) is None
    assert cache.lookup("3_1", DIAGRAMS["4_1"].to_text(), 2) is None
    bumped = InvariantCache(tmp_path / "cache", pipeline_version="2")
    assert bumped.lookup("3_1", text, 2) is None
    assert (cache.hits, cache.misses) == (2, 3)


def test_corrupt_cache_entry_is_a_miss(tmp_path):
    cache = InvariantCache(tmp_path)
    text = DIAGRAMS["3_1"].to_text()
    path = cache.store(text, fake_invariant("3_1", text, 2))
    path.write_bytes(b"{not json")
    assert cache.lookup("3_1", text, 2) is None


def test_classifier_reads_through_the_cache(tmp_path):
    cache = InvariantCache(tmp_path / "cache")
    first = Classifier(DIAGRAMS, cache=cache, invariant_fn=fake_invariant).run()
    assert cache.misses == 5

    second = Classifier(DIAGRAMS, cache=cache, invariant_fn=exploding_invariant).run()
    assert second.final == first.final
    assert cache.hits == 5


# --- results file ---


def test_results_writer_and_reader(tmp_path):
    path = tmp_path / "out" / "results.jsonl"
    with ResultsWriter(path) as writer:
        for n in range(2, 6):
            writer.write_line({"knot": "3_1", "n": n})
        assert writer.lines_written == 4
    with open(path, "ab") as f:
        f.write(b"garbage\n")

    assert [r["n"] for r in iter_results(path)] == [2, 3, 4, 5]
    assert [r["n"] for r in read_recent(path, limit=2)] == [4, 5]
    assert read_recent(tmp_path / "missing.jsonl") == []

    with ResultsWriter(path, truncate=True) as writer:
        writer.write_line({"knot": "4_1", "n": 2})
    assert list(iter_results(path)) == [{"knot": "4_1", "n": 2}]


# --- reports ---


def test_crossing_numbers():
    assert crossing_number("7_4") == 7
    assert crossing_number("10a_12") == 10
    assert crossing_number("unknot") is None


def test_reports(tmp_path):
    record = Classifier(DIAGRAMS, invariant_fn=fake_invariant).run()
    assert classifying_indexes_by_crossing(record, DIAGRAMS) == {3: 2, 4: 3, 5: 3}
    assert computation_distribution(record) == {3: {2: 1, 3: 1}, 4: {2: 1, 3: 1}, 5: {2: 1}}

    reporter = ReportGenerator(tmp_path / "results")
    csv_path, summary_path = reporter.generate(record, DIAGRAMS)
    with csv_path.open(newline="") as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["knot", "classifying_index", "invariant"]
    assert rows[1:] == [
        ["3_1", "3", "{Z, Z + Z/2}"],
        ["4_1", "3", "{Z}"],
        ["5_1", "2", "{Z, Z + Z/3}"],
    ]

    summary = summary_path.read_text()
    assert summary.startswith("# Classification summary")
    assert "Classifying index: 3" in summary
    assert "| 4 | 3 |" in summary
    assert "| 5 | 1 (100%) | 0 (0%) |" in summary

    data = orjson.loads(reporter.write_record_json(record).read_bytes())
    assert data["classifying_index"] == 3
    assert data["final"]["5_1"]["n"] == 2


def test_reports_list_unresolved_groups(tmp_path):
    knots = {"x": DIAGRAMS["3_1"], "y": DIAGRAMS["4_1"]}
    record = Classifier(knots, n_max=3, invariant_fn=fake_invariant).run()
    reporter = ReportGenerator(tmp_path)
    csv_path, summary_path = reporter.generate(record, knots, n_max=3)
    assert csv_path.read_text().splitlines()[1:] == ["x,,unresolved", "y,,unresolved"]
    summary = summary_path.read_text()
    assert "Classifying index: unresolved" in summary
    assert "- x, y" in summary
