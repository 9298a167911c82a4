import io
import json
import math
import subprocess
import sys

import pytest

from punctured_bergman.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run(*argv)
    return code, json.loads(text)


def test_density_p2_u1():
    code, env = run_json("density", "--p", "2", "--u", "1")
    assert code == 0
    assert env["command"] == "density"
    row = env["rows"][0]
    # (1/2pi) (x / sinh x)^2 at x = 1/2
    assert row["value"] == pytest.approx((0.5 / math.sinh(0.5)) ** 2 / (2 * math.pi), rel=1e-14)
    assert row["value"] == pytest.approx(0.14652975, abs=1e-8)
    assert set(row) == {"value", "log_value", "method_used", "terms_used", "tail_bound"}
    assert env["exit_code"] == 0 and env["checks"] == []


def test_density_near_boundary_uses_partial_fractions():
    code, env = run_json("density", "--p", "7", "--abs-z", "0.99999")
    row = env["rows"][0]
    assert code == 0
    assert row["value"] == pytest.approx(6 / (2 * math.pi), rel=1e-6)
    assert row["method_used"] == "partial-fraction"


def test_density_methods_agree():
    vals = [run_json("density", "--p", "10", "--u", "3.5", "--method", m)[1]["rows"][0]["value"]
            for m in ("auto", "series", "partial-fraction")]
    assert max(vals) / min(vals) - 1 <= 1e-12


@pytest.mark.parametrize(
    "argv",
    [
        ("density", "--p", "2", "--u", "0"),
        ("density", "--p", "1", "--u", "1"),
        ("density", "--p", "3", "--abs-z", "1.5"),
        ("density", "--p", "3"),
        ("density", "--p", "3", "--u", "1", "--rel-tol", "2"),
        ("grid", "--p-list", "3", "--x-min", "0.5", "--x-max", "0.2", "--points", "5"),
        ("grid", "--p-list", "a,b", "--x-min", "0.1", "--x-max", "0.2", "--points", "5"),
        ("orbifold", "--p", "3", "--order", "3", "--abs-z", "0", "--angles", "1.0,2.0"),
        ("verify", "--suite", "nope"),
    ],
)
def test_usage_errors_exit_two(argv):
    try:
        code, _ = run(*argv)
    except SystemExit as exc:  # argparse rejects before main returns
        code = exc.code
    assert code == 2


def test_grid_row_count_and_values():
    code, text = run(
        "grid", "--p-list", "32,128,512", "--x-min", "0.05", "--x-max", "0.99", "--points", "400", "--scaled"
    )
    assert code == 0
    lines = text.strip().splitlines()
    assert lines[0] == "x,p,value"
    assert len(lines) == 1 + 1200


def test_grid_bump_heights_at_512():
    x1, x2 = math.exp(-1), math.exp(-0.5)
    code, text = run("grid", "--p-list", "512", "--x-min", repr(x1), "--x-max", repr(x2), "--points", "2", "--scaled")
    rows = [line.split(",") for line in text.strip().splitlines()[1:]]
    v1, v2 = float(rows[0][2]), float(rows[1][2])
    assert v1 == pytest.approx(1.0, abs=0.01)
    assert v2 == pytest.approx(0.5, abs=0.01)


def test_grid_is_deterministic():
    argv = ("grid", "--p-list", "5,40", "--x-min", "0.1", "--x-max", "0.9", "--points", "50")
    assert run(*argv)[1] == run(*argv)[1]


def test_sup_command():
    code, env = run_json("sup", "--p", "400")
    row = env["rows"][0]
    assert code == 0
    assert 320 <= row["argmax_u"] <= 480
    assert abs(row["scaled_sup"] - 1) < 0.05


def test_offdiag_diagonal_matches_density():
    _, d = run_json("density", "--p", "6", "--u", "2.0")
    _, o = run_json("offdiag", "--p", "6", "--ux", "2.0", "--uy", "2.0")
    assert o["rows"][0]["value"] == pytest.approx(d["rows"][0]["value"], rel=1e-12)
    assert o["rows"][0]["phase"] == pytest.approx(0.0, abs=1e-12)


def test_orbifold_command():
    code, env = run_json("orbifold", "--p", "3", "--order", "3", "--abs-z", "0")
    assert code == 0
    assert env["rows"][0]["value"] == pytest.approx(9 / math.pi, rel=1e-12)


def test_verify_fast_orbifold_passes():
    code, env = run_json("verify", "--suite", "orbifold", "--fast")
    assert code == 0
    assert env["checks"] and all(c["pass"] for c in env["checks"])
    assert set(env["checks"][0]) == {"name", "pass", "measured", "threshold"}


def test_numeric_failure_exit_three():
    # the series cannot certify a truncation this far under double precision
    code, _ = run("density", "--p", "3", "--u", "1e-300", "--method", "series", "--rel-tol", "1e-16")
    assert code == 3


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "punctured_bergman", "density", "--p", "2", "--u", "1"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["rows"][0]["value"] == pytest.approx(0.14652975, abs=1e-8)
