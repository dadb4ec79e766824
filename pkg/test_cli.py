import orjson
import pytest

from main import EXIT_INPUT_ERROR, EXIT_OK, EXIT_UNRESOLVED, main


@pytest.fixture
def unknot_file(tmp_path):
    path = tmp_path / "unknot.txt"
    path.write_text("# the 2x2 grid\n[[1,2],[2,1]]\n")
    return path


def run(config_dir, *args):
    return main(["--config", str(config_dir), *args])


def test_embed_and_fundgroup(config_dir, unknot_file, tmp_path, capsys):
    dump = tmp_path / "complement.txt"
    assert run(config_dir, "embed", str(unknot_file), "--out", str(dump)) == EXIT_OK
    assert "knot cubes: 16" in capsys.readouterr().out
    assert dump.read_text().startswith("# cubeknot complex v1")

    assert run(config_dir, "fundgroup", str(dump)) == EXIT_OK
    assert "H1 = Z" in capsys.readouterr().out

    assert run(config_dir, "fundgroup", str(unknot_file), "--format", "json") == EXIT_OK
    payload = orjson.loads(capsys.readouterr().out)
    assert payload["abelianization"] == "Z"
    assert payload["runs"][0]["ordering"] == "lex"


def test_invariant_of_table_entry(config_dir, tmp_path, capsys):
    entry = tmp_path / "entry.txt"
    entry.write_text("unknot: braid 1\n")
    assert run(config_dir, "invariant", str(entry), "--n", "2") == EXIT_OK
    assert capsys.readouterr().out.strip() == "I^2 = {Z}"


def test_input_errors_exit_with_3(config_dir, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("[[1,1],[2,2]]\n")
    assert run(config_dir, "invariant", str(bad), "--n", "2") == EXIT_INPUT_ERROR
    assert run(config_dir, "embed", str(tmp_path / "missing.txt")) == EXIT_INPUT_ERROR

    empty = tmp_path / "empty.txt"
    empty.write_text("# nothing here\n")
    assert run(config_dir, "fundgroup", str(empty)) == EXIT_INPUT_ERROR


def test_missing_configuration_exits_with_3(tmp_path, unknot_file):
    with pytest.raises(SystemExit) as excinfo:
        main(["--config", str(tmp_path / "nowhere"), "embed", str(unknot_file)])
    assert excinfo.value.code == EXIT_INPUT_ERROR


def test_classify_reports_unresolved_unknots(config_dir, tmp_path, capsys):
    table = tmp_path / "unknots.txt"
    table.write_text("u1: [[1,2],[2,1]]\nu2: braid 1\n")
    code = run(config_dir, "classify", str(table), "--n-max", "2", "--no-cache")
    assert code == EXIT_UNRESOLVED
    assert "Unresolved: u1, u2" in capsys.readouterr().out

    results = config_dir / "results"
    assert (results / "classification.csv").read_text().splitlines() == [
        "knot,classifying_index,invariant",
        "u1,,unresolved",
        "u2,,unresolved",
    ]
    assert "Classifying index: unresolved" in (results / "summary.md").read_text()
    lines = (results / "results.jsonl").read_bytes().splitlines()
    assert [orjson.loads(line)["knot"] for line in lines] == ["u1", "u2"]


def test_classify_strict_still_writes_reports(config_dir, tmp_path):
    table = tmp_path / "unknots.txt"
    table.write_text("u1: [[1,2],[2,1]]\nu2: [[2,1],[1,2]]\n")
    cache = tmp_path / "cache"
    code = run(config_dir, "classify", str(table), "--n-max", "2", "--strict", "--cache", str(cache))
    assert code == EXIT_UNRESOLVED
    assert any(cache.iterdir())
    assert (config_dir / "results" / "summary.md").exists()


def test_lookup_table_build(config_dir, tmp_path, capsys):
    out = tmp_path / "tables" / "partial.bin"
    code = run(config_dir, "lookup-table", "build", str(out), "--jobs", "1", "--limit", "64")
    assert code == EXIT_OK
    assert out.exists()
    assert "Redundancy table written" in capsys.readouterr().out
