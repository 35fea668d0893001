import io as stdio
import json
import random
import subprocess
import sys

import pytest

from algdiag import io
from algdiag.cli import JobSpec, main, run
from algdiag.errors import MalformedInput
from algdiag.ff import Field
from algdiag.poly import MultiPoly
from algdiag.series import hensel_solve
from conftest import F4, pascal_branch, random_branch
from oracles import pascal_coeff

PASCAL_E = {
    "n": 2,
    "terms": [
        {"e": [0, 0, 1], "c": 1},
        {"e": [1, 0, 1], "c": -1},
        {"e": [0, 1, 1], "c": -1},
        {"e": [0, 0, 0], "c": -1},
    ],
}


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(path)


def branch_file(tmp_path, p=2, name="branch.json"):
    return write(tmp_path, name, {"field": {"p": p, "e": 1}, "E": PASCAL_E, "y0": [1]})


def cli(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_integer_coefficients_reduced_on_load(tmp_path):
    path = write(tmp_path, "p.json", {"field": {"p": 3, "e": 1}, **PASCAL_E})
    A = io.load_poly(path)
    assert A == pascal_branch(3).E
    assert A.coeff((1, 0, 1)) == 2


def test_unknown_keys_rejected(tmp_path):
    doc = {"field": {"p": 3, "e": 1}, "E": PASCAL_E, "y0": 1, "colour": "red"}
    with pytest.raises(MalformedInput, match="unknown keys"):
        io.load_branch(write(tmp_path, "b.json", doc))
    doc = {"field": {"p": 3, "e": 1, "modullus": [1]}, "E": PASCAL_E, "y0": 1}
    with pytest.raises(MalformedInput):
        io.load_branch(write(tmp_path, "b2.json", doc))


def test_json_syntax_error_reports_line(tmp_path):
    with pytest.raises(MalformedInput, match="line 2"):
        io.load_json(write(tmp_path, "bad.json", '{"a": 1,\n "b": }'))


def test_round_trips():
    rng = random.Random(8)
    for F in (Field(3), F4):
        b = random_branch(rng, F, 2, 2, 2)
        assert io.branch_from_dict(json.loads(io.dumps(io.branch_to_dict(b)))) == b
        f = hensel_solve(b, 8)
        assert io.series_from_dict(json.loads(io.dumps(io.series_to_dict(f)))) == f
        text = io.dumps(io.poly_file_to_dict(b.E))
        assert io.poly_from_dict({k: v for k, v in json.loads(text).items() if k != "field"}, F) == b.E


def test_bound_subcommand(tmp_path, capsys):
    path = write(tmp_path, "pascal.json", {"field": {"p": 3, "e": 1}, **PASCAL_E})
    code, out = cli(capsys, "bound", "--poly", path)
    assert code == 0
    assert json.loads(out) == {"N_closed": 6, "N_box": 4, "N_diag": 4, "N_effective": 4}


def test_coeff_subcommand(tmp_path, capsys):
    path = branch_file(tmp_path)
    assert cli(capsys, "coeff", "--branch", path, "--index", "3,5") == (0, "0\n")
    i, j = 10**60 + 5, 7 * 10**59
    code, out = cli(capsys, "coeff", "--branch", path, "--index", f"{i},{j}")
    assert code == 0 and int(out) == pascal_coeff(i, j, 2)


def test_coeff_over_extension_field_prints_vector(tmp_path, capsys):
    doc = {"field": {"p": 2, "e": 2, "modulus": [1, 1, 1]}, "E": PASCAL_E, "y0": [1, 0]}
    code, out = cli(capsys, "coeff", "--branch", write(tmp_path, "b4.json", doc), "--index", "1,1")
    assert code == 0 and json.loads(out) == [0, 0]


def test_singular_branch_hint(tmp_path, capsys):
    doc = {"field": {"p": 3, "e": 1}, "E": {"n": 1, "terms": [{"e": [0, 2], "c": 1}, {"e": [1, 0], "c": 1}]}, "y0": 0}
    code, out = cli(capsys, "solve", "--branch", write(tmp_path, "s.json", doc), "--prec", "4")
    err = json.loads(out)
    assert code == 1 and err["error"] == "SingularBranch" and "import_series" in err["detail"]


def test_malformed_input_exit_code(tmp_path, capsys):
    code, out = cli(capsys, "bound", "--poly", write(tmp_path, "x.json", "[1, 2"))
    assert code == 2 and json.loads(out)["error"] == "MalformedInput"
    code, out = cli(capsys, "bound", "--poly", str(tmp_path / "missing.json"))
    assert code == 2
    code, out = cli(capsys, "solve", "--branch", branch_file(tmp_path), "--prec", "0")
    assert code == 2


def test_annihilate_and_verify(tmp_path, capsys):
    branch = branch_file(tmp_path, p=3)
    code, out = cli(capsys, "annihilator", "--branch", branch, "--order", "150")
    assert code == 0
    cert = json.loads(out)
    assert cert["N"] <= cert["bound"]["N_effective"] and cert["verified_order"] == 300
    cert_path = write(tmp_path, "c.json", out)
    code, out = cli(capsys, "diagonal", "--branch", branch, "--prec", "300")
    series_path = write(tmp_path, "g.json", out)
    assert json.loads(out)["prec"] == 150
    code, out = cli(capsys, "verify", "--cert", cert_path, "--series", series_path, "--order", "100")
    assert code == 0 and json.loads(out)["verified"] is True
    # corrupt the constant coefficient of c_0
    cert["coeffs"][0][0] = [(cert["coeffs"][0][0][0] + 1) % 3]
    bad = write(tmp_path, "bad.json", cert)
    code, out = cli(capsys, "verify", "--cert", bad, "--series", series_path, "--order", "100")
    assert code == 1 and json.loads(out)["error"] == "NotAnnihilated"


def test_annihilator_from_series(tmp_path, capsys):
    terms = [{"e": [k], "c": [1]} for k in range(200)]
    path = write(tmp_path, "geo.json", {"field": {"p": 5, "e": 1}, "n": 1, "prec": 200, "terms": terms})
    code, out = cli(capsys, "annihilator", "--series", path, "--nmax", "2", "--degrees", "4,8")
    assert code == 0 and json.loads(out)["N"] == 1
    code, out = cli(capsys, "annihilator", "--series", path)
    assert code == 2


def test_automaton_and_partial_diagonal(tmp_path, capsys):
    path = branch_file(tmp_path)
    code, out = cli(capsys, "automaton", "--branch", path)
    assert code == 0 and len(json.loads(out)["states"]) <= 16
    code, dot = cli(capsys, "automaton", "--branch", path, "--format", "dot")
    assert dot.startswith("digraph")
    code, out = cli(capsys, "diagonal", "--branch", path, "--prec", "10", "--partial", "1")
    assert code == 0 and json.loads(out)["n"] == 2
    code, out = cli(capsys, "diagonal", "--branch", path, "--prec", "10", "--partial", "2")
    assert code == 1 and json.loads(out)["error"] == "BadAxisCount"


def test_output_is_deterministic_across_threads(tmp_path, capsys):
    path = branch_file(tmp_path, p=3)
    outs = set()
    for threads in ("1", "4"):
        for _ in range(2):
            outs.add(cli(capsys, "solve", "--branch", path, "--prec", "12", "--threads", threads)[1])
    assert len(outs) == 1


def test_out_flag_and_run(tmp_path):
    target = tmp_path / "auto.json"
    job = JobSpec("automaton", {"branch": branch_file(tmp_path)}, {"max_states": 50, "threads": 1}, "json", str(target))
    buf = stdio.StringIO()
    assert run(job, buf) == 0 and buf.getvalue() == ""
    assert json.loads(target.read_text())["p"] == 2
    assert run(JobSpec("frobnicate"), buf) == 2


def test_module_entry_point(tmp_path):
    res = subprocess.run(
        [sys.executable, "-m", "algdiag", "coeff", "--branch", branch_file(tmp_path), "--index", "2,5"],
        capture_output=True, text=True,
    )
    assert res.returncode == 0 and res.stdout == "1\n"
