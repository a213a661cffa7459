import json
import os
import subprocess
import sys

import pytest

from reesdmod.cli import InputError, main, parse_input, parse_range, render_json


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def ex1_path(inputs_dir):
    return os.path.join(inputs_dir, "ex1.txt")


def write(tmp_path, text, name="in.txt"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_bfunction_transcript_ex1(capsys, ex1_path):
    code, out, _ = run(capsys, "bfunction", ex1_path, "--p", "3..5")
    assert code == 0
    assert out == "(s)\n(s)\n(s)(s + 1)\n"


def test_validate_gens_input(capsys, inputs_dir):
    code, out, _ = run(capsys, "validate", os.path.join(inputs_dir, "ex1_gens.txt"))
    assert code == 0
    assert "ok   hilbert_burch" in out and "FAIL" not in out


def test_parse_error_has_position(capsys, tmp_path):
    path = write(tmp_path, "vars: x y z\nmatrix:\n  x, 0, 0\n  y, x +, 0\n")
    code, _, err = run(capsys, "bfunction", path)
    assert code == 2 and "line 4" in err and "position" in err


def test_missing_blocks():
    with pytest.raises(InputError):
        parse_input("vars: x y z\n")
    with pytest.raises(InputError):
        parse_input("matrix:\n x\n")
    with pytest.raises(InputError):
        parse_input("vars: x y z\ntvars: a b\nmatrix:\n x, y, z\n")


def test_whitespace_separated_rows():
    inp = parse_input("vars: x y z\nmatrix:\n x 0 0\n y x 0\n z y x^2\n 0 z z^2\n")
    assert inp.phi.nrows == 4 and inp.nus == [1, 1, 2]


def test_validation_failure_exit_code(capsys, tmp_path):
    path = write(tmp_path, "vars: x y z\nmatrix:\n x, 0, 0\n y, x, 0\n 0, y, x\n 0, 0, y\n")
    code, out, err = run(capsys, "bfunction", path)
    assert code == 2 and "FAIL fitting_I1" in out and "validation failed" in err


def test_force_continues_past_validation(capsys, tmp_path):
    path = write(tmp_path, "vars: x y z\nmatrix:\n x, 0, 0\n y, x, 0\n 0, y, x\n 0, 0, y\n")
    code, out, _ = run(capsys, "bfunction", path, "--force", "--p", "3")
    assert code in (0, 3) and "FAIL fitting_I1" in out


def test_small_root_range_exit_code(capsys, ex1_path):
    code, out, _ = run(capsys, "bfunction", ex1_path, "--p", "5", "--root-range=0..0")
    assert code == 3 and "error (p = 5, range)" in out


def test_timeout_exit_code(capsys, inputs_dir):
    code, out, _ = run(capsys, "bfunction", os.path.join(inputs_dir, "ex2.txt"), "--p", "11",
                       "--timeout", "0.2")
    assert code == 4 and "timeout" in out


def test_bad_range_flag(capsys, ex1_path):
    code, _, err = run(capsys, "bfunction", ex1_path, "--p", "5..3")
    assert code == 2 and "bad range" in err


def test_parse_range():
    assert parse_range("3..5") == [3, 4, 5]
    assert parse_range("5,3,3") == [3, 5]
    assert parse_range("-2..0") == [-2, -1, 0]
    with pytest.raises(ValueError):
        parse_range("")


def test_json_report_round_trip(capsys, ex1_path):
    code, out, _ = run(capsys, "report", ex1_path, "--format", "json", "--p", "3..5")
    assert code == 0
    rep = json.loads(out)
    assert render_json(json.loads(render_json(rep))) == out.rstrip("\n")
    assert [e["roots"] for e in rep["bfunctions"]] == [[0], [0], [0, -1]]
    assert rep["fiber"] == {"p0": 5, "reltype": 5, "reg": 4, "e": 5, "r": 4,
                            "equation": rep["fiber"]["equation"]}
    assert rep["heuristic_generators"]["degrees"] == [[3, 1], [5, 0]]
    assert all(r["consistent"] for r in rep["oracle"])
    for key in ("validation", "bfunctions", "ksupport", "fiber", "heuristic_generators", "timings"):
        assert key in rep


def test_ksupport_with_dims(capsys, ex1_path):
    code, out, _ = run(capsys, "ksupport", ex1_path, "--p", "3..5", "--oracle", "hilbert")
    assert code == 0
    assert "(3, 1)  dim 1" in out and "(5, 0)  dim 1" in out and "(5, 1)  dim 10" in out


def test_fiber_command(capsys, ex1_path):
    code, out, _ = run(capsys, "fiber", ex1_path)
    assert code == 0 and "p0 = 5, reltype = 5, reg = 4, e = 5, r = 4" in out


def test_output_independent_of_jobs(capsys, ex1_path):
    outs = []
    for jobs in ("1", "3"):
        code, out, _ = run(capsys, "report", ex1_path, "--p", "3..6", "--jobs", jobs)
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]
    reps = []
    for jobs in ("1", "2"):
        _, out, _ = run(capsys, "report", ex1_path, "--format", "json", "--p", "3..6", "--jobs", jobs)
        rep = json.loads(out)
        rep.pop("timings")
        reps.append(rep)
    assert reps[0] == reps[1]


def test_module_entry_point(ex1_path):
    res = subprocess.run([sys.executable, "-m", "reesdmod", "bfunction", ex1_path, "--p", "3..4"],
                         capture_output=True, text=True, timeout=120)
    assert res.returncode == 0 and res.stdout == "(s)\n(s)\n"
