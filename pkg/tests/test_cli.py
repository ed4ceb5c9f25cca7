import csv
import io
import json

import pytest

from kvdeform.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_graphs_json(capsys):
    code, out, _ = run(capsys, "graphs", "enumerate", "--kind", "wheel", "--n", "3", "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert len(report["records"]) == 6


def test_graphs_csv_and_pretty(capsys):
    code, out, _ = run(capsys, "graphs", "enumerate", "--kind", "lie", "--n", "2", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and [r["name"] for r in rows] == ["[x,[x,y]]", "[y,[x,y]]"]
    code, out, _ = run(capsys, "graphs", "enumerate", "--kind", "lie", "--n", "2", "--format", "pretty")
    assert code == 0 and "[x,[x,y]]" in out


def test_rationals_printed_exactly(capsys):
    code, out, _ = run(capsys, "kv", "d", "--n", "4")
    d = [r["d_n"] for r in json.loads(out)["records"]]
    assert code == 0 and d == ["1/4", "1/24", "-1/48", "-1/180", "1/2880"]


def test_kv_solve_check_passes(capsys):
    code, out, _ = run(capsys, "kv", "solve", "--order", "3", "--check")
    assert code == 0 and json.loads(out)["check"] is True


def test_transcribed_convention_is_input_error(capsys):
    code, _, err = run(capsys, "kv", "solve", "--order", "3", "--convention", "paper_transcribed")
    assert code == 3 and "degree 2" in err


def test_weight_check_exit_codes(capsys, tmp_path):
    cache = str(tmp_path)
    base = ("weight", "--graph", "gamma1", "--samples", "20000", "--cache-dir", cache, "--check")
    code, _, _ = run(capsys, *base, "--expect", "1/2")
    assert code == 0
    code, _, _ = run(capsys, *base, "--expect", "0.3")
    assert code == 1


def test_inline_graph_json(capsys):
    code, out, _ = run(capsys, "weight", "--graph", '{"n": 1, "edges": [["G1", "G2"]]}', "--samples", "10000")
    assert code == 0 and json.loads(out)["records"][0]["samples"] == 10000


def test_usage_errors(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "weight")[0] == 2
    assert run(capsys, "weight", "--graph", "gamma1", "--samples", "0")[0] == 2


@pytest.mark.parametrize("argv", [("kv", "trace", "--algebra", "nonesuch"),
                                  ("weight", "--graph", '{"n": 1, "edges": [["G1", "G1"]]}'),
                                  ("weight", "--graph", "gamma1", "--xi", "nowhere")])
def test_input_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 3


def test_cached_reports_are_byte_identical(capsys, tmp_path):
    argv = ("weight", "--graph", "ladder2", "--samples", "30000", "--cache-dir", str(tmp_path))
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    assert any(tmp_path.iterdir())


def test_kv_checks(capsys):
    for argv in (("kv", "trace", "--algebra", "aff1", "--order", "3"), ("kv", "eqdiff", "--order", "3"),
                 ("kv", "jcheck", "--algebra", "sl2"), ("kv", "transport", "--algebra", "aff1")):
        code, out, _ = run(capsys, *argv, "--check")
        assert code == 0, argv


def test_star_commutator_runs(capsys, tmp_path):
    code, out, _ = run(capsys, "star", "commutator", "--algebra", "sl2", "--order", "1", "--samples", "20000",
                       "--cache-dir", str(tmp_path))
    assert code == 0 and json.loads(out)["records"]


def test_version(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0 and out.startswith("kvdeform ")
