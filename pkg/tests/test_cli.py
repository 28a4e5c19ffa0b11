import json

import pytest

from involutory.cli import run


def _report(tmp_path, name, *args):
    out = tmp_path / name
    code = run([*args, "-o", str(out)])
    return code, out.read_bytes()


@pytest.mark.parametrize("args", [
    ["coeffs", "--k-max", "10", "--n-max", "10"],
    ["check-lemma1", "--max", "6", "--k-max", "10"],
    ["rho", "--algebra", "sl2", "--N", "5", "--m-max", "4"],
    ["surjectivity", "--algebra", "sl2", "--N", "5"],
    ["weyl-dim-table"],
])
def test_reports_are_byte_identical(tmp_path, args):
    c1, r1 = _report(tmp_path, "a.json", *args)
    c2, r2 = _report(tmp_path, "b.json", *args)
    assert c1 == c2 == 0
    assert r1 == r2
    rep = json.loads(r1)
    assert rep["subcommand"] == args[0] and rep["timing"] is None
    assert all(set(c) >= {"id", "paper_tag", "status", "details"} for c in rep["checks"])


def test_timing_is_opt_in(tmp_path):
    _, r = _report(tmp_path, "t.json", "weyl-dim-table", "--timing")
    assert json.loads(r)["timing"]["wall_seconds"] >= 0


def test_exit_codes(tmp_path, capsys):
    assert run(["coeffs", "--prime", "7"]) == 2
    assert run(["hilbert-demo", "--eps", "0"]) == 2
    assert run(["no-such-command"]) == 2
    assert run(["rho", "--algebra", "g2"]) == 2
    assert run(["hilbert-demo", "--eps", "0.3", "--max-n", "100000", "-o", str(tmp_path / "h.json")]) == 1


def test_induce_sl2(tmp_path):
    code, r = _report(tmp_path, "i.json", "induce", "--algebra", "sl2", "--rep0", "2", "--N", "3",
                      "--quotient-seed", "none", "--casimir", "--exact")
    assert code == 0
    assert json.loads(r)["checks"][0]["status"] == "pass"
    code, r = _report(tmp_path, "j.json", "induce", "--algebra", "sl2", "--rep0", "char:2", "--N", "1",
                      "--quotient-seed", "none", "--casimir")
    assert code == 1


def test_gim_check_literal_fails(tmp_path):
    assert run(["gim-check", "-o", str(tmp_path / "g.json")]) == 0
    assert run(["gim-check", "--literal-short-roots", "-o", str(tmp_path / "l.json")]) == 1
