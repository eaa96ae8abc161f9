import json

import pytest
from click.testing import CliRunner

from conftest import FIXTURES
from icequiver.cli import main
from icequiver.io import decode_document

TRIANGLE = str(FIXTURES / "triangle.json")
FIVE = str(FIXTURES / "five.json")
LOOP = str(FIXTURES / "loop.json")


@pytest.fixture
def runner():
    return CliRunner()


def run(runner, *args):
    return runner.invoke(main, list(args))


def test_validate_ok(runner):
    result = run(runner, "validate", TRIANGLE)
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert payload["ok"] is True
    assert payload["violations"] == []
    assert {v: status["kind"] for v, status in payload["mutability"].items()} == {
        "1": "FrozenSink",
        "2": "UnfrozenMutable",
        "3": "FrozenSource",
    }
    assert all(status["mutable"] for status in payload["mutability"].values())


def test_validate_reports_loops(runner):
    result = run(runner, "validate", LOOP)
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert payload["loops"] == {"1": ["l"]}
    assert payload["mutability"]["1"] == {
        "kind": "NotMutable", "reason": "loop incident", "mutable": False}


def test_mutate_output_is_a_valid_document(runner):
    result = run(runner, "mutate", TRIANGLE, "-v", "2")
    assert result.exit_code == 0
    iqp = decode_document(json.loads(result.output))
    assert sorted(iqp.ice_quiver.frozen_arrows) == ["[ba]"]


def test_mutate_canonical_is_byte_deterministic(runner):
    first = run(runner, "mutate", FIVE, "-v", "3", "--canonical")
    second = run(runner, "mutate", FIVE, "-v", "3", "--canonical")
    assert first.exit_code == second.exit_code == 0
    assert first.output == second.output
    names = {a["id"] for a in json.loads(first.output)["arrows"]}
    assert all(name.startswith("a") for name in names)


def test_mutate_sequence_composes(runner):
    seq = run(runner, "mutate", FIVE, "-v", "3", "-v", "2", "--canonical")
    one = run(runner, "mutate", FIVE, "-v", "5", "--canonical")
    assert seq.exit_code == one.exit_code == 0
    left = json.loads(seq.output)
    right = json.loads(one.output)
    # same shape after canonical relabelling even though the potentials differ
    assert left["vertices"] == right["vertices"]
    assert [(a["source"], a["target"], a["frozen"]) for a in left["arrows"]] == [
        (a["source"], a["target"], a["frozen"]) for a in right["arrows"]
    ]


def test_mutate_unknown_vertex_is_malformed(runner):
    result = run(runner, "mutate", TRIANGLE, "-v", "9")
    assert result.exit_code == 2
    assert result.stderr.startswith("error: malformed:")
    assert "unknown vertex" in result.stderr
    assert result.stderr.count("\n") == 1


def test_mutate_blocked_vertex_is_unsupported(runner):
    result = run(runner, "mutate", LOOP, "-v", "1")
    assert result.exit_code == 3
    assert result.stderr.startswith("error: unsupported:")


def test_malformed_file_is_reported(runner, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    result = run(runner, "mutate", str(bad), "-v", "1")
    assert result.exit_code == 2
    assert result.stderr.startswith("error: malformed:")
    missing = run(runner, "validate", str(tmp_path / "absent.json"))
    assert missing.exit_code == 2


def test_premutate_then_reduce_round_trips(runner, tmp_path):
    pre = run(runner, "premutate", TRIANGLE, "-v", "2")
    assert pre.exit_code == 0
    staged = tmp_path / "pre.json"
    staged.write_text(pre.output)
    red = run(runner, "reduce", str(staged))
    assert red.exit_code == 0
    direct = run(runner, "mutate", TRIANGLE, "-v", "2")
    assert json.loads(red.output) == json.loads(direct.output)


def test_ginzburg_text_and_json(runner):
    text = run(runner, "ginzburg", TRIANGLE, "--text")
    assert text.exit_code == 0
    assert "a∨: 2 -> 1  degree -1  d = cb" in text.output
    data = run(runner, "ginzburg", TRIANGLE, "-N", "6")
    assert data.exit_code == 0
    payload = json.loads(data.output)
    assert payload["truncation"] == 6
    assert {g["id"] for g in payload["generators"]} >= {"a∨", "b∨", "t_2"}


def test_pi2_output(runner):
    result = run(runner, "pi2", TRIANGLE)
    assert result.exit_code == 0
    payload = json.loads(result.output)
    ids = {g["id"] for g in payload["generators"]}
    assert ids == {"c", "c~", "r_1", "r_3"}


def test_check_d2(runner):
    result = run(runner, "check", TRIANGLE, "d2")
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert payload["ok"] is True


def test_check_h0(runner):
    result = run(runner, "check", FIVE, "h0", "-N", "8")
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert payload["ok"] is True
    assert payload["jacobian_dims"] == [5, 8, 8, 9, 8, 8, 9, 8, 8]


def test_check_boundary(runner):
    result = run(runner, "check", TRIANGLE, "boundary")
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert payload["dims"][:3] == [2, 1, 1]
    assert payload["total"] == 4
    assert payload["stabilized"] is True


def test_check_pj(runner):
    good = run(runner, "check", TRIANGLE, "pj", "-N", "8")
    assert good.exit_code == 0
    payload = json.loads(good.output)
    assert payload["ok"] is True
    assert payload["exact_at_truncation"] is True
    looped = run(runner, "check", LOOP, "pj", "-N", "8")
    assert looped.exit_code == 0
    assert json.loads(looped.output)["exact_at_truncation"] is False


def test_check_involution(runner):
    result = run(runner, "check", FIVE, "involution", "-v", "5")
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert payload["ok"] is True
    missing = run(runner, "check", FIVE, "involution")
    assert missing.exit_code != 0


def test_check_involution_fails_cleanly_on_blocked_vertex(runner):
    result = run(runner, "check", LOOP, "involution", "-v", "1")
    assert result.exit_code == 3


def test_dot_is_deterministic(runner):
    a = run(runner, "dot", FIVE)
    b = run(runner, "dot", FIVE)
    assert a.exit_code == 0
    assert a.output == b.output
    assert a.output.strip().startswith("digraph")


def test_iso_exit_codes(runner):
    same = run(runner, "iso", TRIANGLE, TRIANGLE)
    assert same.exit_code == 0
    payload = json.loads(same.output)
    assert payload["isomorphic"] is True
    assert payload["vertex_map"]
    different = run(runner, "iso", TRIANGLE, FIVE)
    assert different.exit_code == 1
    assert json.loads(different.output)["isomorphic"] is False


def test_corpus_is_deterministic(runner):
    a = run(runner, "corpus", "--seed", "11", "--count", "3")
    b = run(runner, "corpus", "--seed", "11", "--count", "3")
    assert a.exit_code == 0
    assert a.output == b.output
    lines = a.output.strip().splitlines()
    assert len(lines) == 3
    entry = json.loads(lines[0])
    assert set(entry) == {"vertex", "iqp"}
    decode_document(entry["iqp"])


def test_report_writes_files(runner, tmp_path):
    out = tmp_path / "report"
    result = run(runner, "report", TRIANGLE, "--out", str(out))
    assert result.exit_code == 0
    written = result.output.strip().splitlines()
    assert len(written) == 3
    csv_path = out / "dimensions.csv"
    assert csv_path.exists()
    header = csv_path.read_text().splitlines()[0]
    assert header.startswith("degree,")
    for png in ("dimensions.png", "homology.png"):
        blob = (out / png).read_bytes()
        assert blob[:8] == b"\x89PNG\r\n\x1a\n"
