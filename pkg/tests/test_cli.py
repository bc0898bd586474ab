import json

import pytest

from hallq.cli import main
from hallq.quiver_rep import (
    AlgebraContext,
    IndecLabel,
    all_labels,
    label_dims,
    parse_label,
    rep_of_multiset,
    rep_to_json,
)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_hall_number_example(capsys):
    code, out, _ = run(capsys, "hall-number", "--n", "2", "--p", "3", "W1,1", "U2,1", "U1,1")
    assert code == 0
    assert out == "3\n"


def test_hall_number_dims_mismatch_prints_zero(capsys):
    code, out, _ = run(capsys, "hall-number", "--n", "2", "--p", "2", "V1", "V1", "U1,2")
    assert code == 0
    assert out == "0\n"


def test_indec_list_counts(capsys):
    code, out, _ = run(capsys, "indec-list", "--n", "2")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "label\tdims"
    assert len(lines) == 8
    code, out, _ = run(capsys, "indec-list", "--n", "3")
    assert len(out.strip().split("\n")) == 16


def test_indec_list_dims_recompute(capsys):
    _, out, _ = run(capsys, "indec-list", "--n", "3")
    for line in out.strip().split("\n")[1:]:
        name, dims = line.split("\t")
        label = parse_label(name)
        assert tuple(int(d) for d in dims.split(",")) == label_dims(label, 3)


def test_indec_list_json_parity(capsys):
    _, tsv_out, _ = run(capsys, "indec-list", "--n", "2")
    _, json_out, _ = run(capsys, "indec-list", "--n", "2", "--format", "json")
    rows = json.loads(json_out)
    lines = tsv_out.strip().split("\n")[1:]
    assert len(rows) == len(lines)
    for row, line in zip(rows, lines):
        name, dims = line.split("\t")
        assert row["label"] == name
        assert row["dims"] == [int(d) for d in dims.split(",")]


def test_hall_poly_command(capsys):
    code, out, _ = run(capsys, "hall-poly", "--n", "2", "W1,1", "U2,1", "U1,1")
    assert code == 0
    assert out == "T\n"
    code, out, _ = run(
        capsys, "hall-poly", "--n", "2", "--primes", "2,3,5,7", "V1", "V2", "U2,1"
    )
    assert code == 0
    assert out == "1\n"


def test_verify_prop_exit_and_report(capsys, tmp_path):
    target = tmp_path / "report.tsv"
    code, out, err = run(capsys, "verify-prop", "--n", "2", "--out", str(target))
    assert code == 0
    assert out == ""
    assert "0 mismatch" in err
    lines = target.read_text().strip().split("\n")
    assert lines[0] == "triple\texpected\tinterpolated\tverdict"
    assert len(lines) == 17


def test_verify_prop_format_parity(capsys):
    _, tsv_out, _ = run(capsys, "verify-prop", "--n", "2")
    _, json_out, _ = run(capsys, "verify-prop", "--n", "2", "--format", "json")
    rows = json.loads(json_out)
    assert len(tsv_out.strip().split("\n")) == len(rows) + 1


def test_verify_identities_exit_codes(capsys):
    code, _, err = run(capsys, "verify-identities", "--n", "2", "--p", "2")
    assert code == 0
    assert "0 fail" in err
    code, _, err = run(capsys, "verify-identities", "--n", "3", "--p", "2")
    assert code == 1
    assert "1 fail" in err


def test_lie_verify_small(capsys):
    code, out, _ = run(capsys, "lie-verify", "--n", "2")
    assert code == 0
    assert "antisymmetry\tpass" in out
    assert "jacobi\tpass" in out


def test_lie_table_formats(capsys):
    code, out, _ = run(capsys, "lie-table", "--n", "2")
    assert code == 0
    assert "x\ty\tbracket" in out
    code, json_out, _ = run(capsys, "lie-table", "--n", "2", "--format", "json")
    assert code == 0
    payload = json.loads(json_out)
    assert len(payload["entries"]) == 21
    code, latex_out, _ = run(capsys, "lie-table", "--n", "2", "--latex")
    assert code == 0
    assert latex_out.startswith("\\begin{tabular}")


def test_decompose_file(capsys, tmp_path):
    ctx = AlgebraContext(2, 3)
    rep = rep_of_multiset((IndecLabel("V", 1), IndecLabel("W", 1, 1)), ctx)
    path = tmp_path / "rep.json"
    path.write_text(json.dumps(rep_to_json(rep)))
    code, out, _ = run(capsys, "decompose", str(path))
    assert code == 0
    assert out == "W1,1 + V1\n"


def test_decompose_rejects_bad_loop(capsys, tmp_path):
    ctx = AlgebraContext(2, 2)
    rep = rep_of_multiset((IndecLabel("U", 1, 1),), ctx)
    data = rep_to_json(rep)
    data["loop"] = [[1, 0], [0, 1]]  # squares to the identity
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    code, _, err = run(capsys, "decompose", str(path))
    assert code == 2
    assert "loop" in err


def test_decompose_missing_and_malformed(capsys, tmp_path):
    code, _, _ = run(capsys, "decompose", str(tmp_path / "nope.json"))
    assert code == 2
    path = tmp_path / "mangled.json"
    path.write_text("{not json")
    code, _, _ = run(capsys, "decompose", str(path))
    assert code == 2


def test_hall_number_from_file(capsys, tmp_path):
    ctx = AlgebraContext(2, 3)
    rep = rep_of_multiset((IndecLabel("U", 1, 1),), ctx)
    path = tmp_path / "m.json"
    path.write_text(json.dumps(rep_to_json(rep)))
    code, out, _ = run(
        capsys, "hall-number", "--n", "2", "--p", "3", "W1,1", "U2,1",
        "--m-file", str(path),
    )
    assert code == 0
    assert out == "3\n"


def test_hall_number_file_wrong_n(capsys, tmp_path):
    ctx = AlgebraContext(3, 2)
    rep = rep_of_multiset((IndecLabel("V", 1),), ctx)
    path = tmp_path / "m.json"
    path.write_text(json.dumps(rep_to_json(rep)))
    code, _, err = run(
        capsys, "hall-number", "--n", "2", "--p", "2", "V1", "V2",
        "--m-file", str(path),
    )
    assert code == 2
    assert "n=3" in err


def test_usage_errors(capsys):
    assert run(capsys, "hall-number", "--n", "2", "--p", "4", "V1", "V2", "U2,1")[0] == 2
    assert run(capsys, "hall-number", "--n", "2", "--p", "3", "Q1", "V2", "U2,1")[0] == 2
    assert run(capsys, "hall-number", "--n", "1", "--p", "3", "V1", "V1", "V1")[0] == 2
    assert run(capsys, "hall-number", "--n", "2", "--p", "3", "V1", "V2")[0] == 2
    assert run(capsys, "verify-prop", "--n", "2", "--primes", "2,2,3")[0] == 2
    assert run(capsys, "verify-prop", "--n", "2", "--primes", "2,x")[0] == 2
    assert run(capsys, "no-such-command")[0] == 2
    assert run(capsys, "lie-verify", "--n", "2", "--parallelism", "0")[0] == 2


def test_help_exits_clean(capsys):
    assert run(capsys, "--help")[0] == 0


def test_ceiling_env(capsys, monkeypatch):
    monkeypatch.setenv("HALLQ_DIM_CEILING", "3")
    code, _, err = run(capsys, "hall-number", "--n", "2", "--p", "2", "W1,1", "U2,1", "U1,1")
    assert code == 2
    assert "ceiling" in err.lower()
    # explicit flag wins over the environment
    code, out, _ = run(
        capsys, "hall-number", "--n", "2", "--p", "2", "W1,1", "U2,1", "U1,1",
        "--dim-ceiling", "12",
    )
    assert code == 0
    assert out == "2\n"
    monkeypatch.setenv("HALLQ_DIM_CEILING", "banana")
    assert run(capsys, "hall-number", "--n", "2", "--p", "2", "V1", "V2", "U2,1")[0] == 2


def test_label_roundtrip_through_wire_syntax():
    for n in range(2, 7):
        for label in all_labels(n):
            assert parse_label(str(label)) == label
