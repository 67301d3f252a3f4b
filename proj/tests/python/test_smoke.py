import json
import math
import os
import subprocess

import pytest

CLI = os.environ.get("HH_CLI")
SCHEMA = os.environ.get(
    "HH_SCHEMA",
    os.path.join(os.path.dirname(__file__), "..", "..", "schema", "report.schema.json"),
)

needs_cli = pytest.mark.skipif(not CLI, reason="HH_CLI not set")

RHO_HALF_PI = repr(math.pi / 2)

COMMANDS = [
    ["eval", "--fn", "phi", "--r", "3.14159265358979"],
    ["eval", "--fn", "v", "--r", repr(2 * math.pi)],
    ["invert-phi", "--a", "0"],
    ["invert-phi", "--a", "inf"],
    ["dist", "--xi", "1", "0", "0", "1", "--z", "0.5"],
    ["to-polar", "--xi", "0.2", "-1", "--z", "0.3"],
    ["from-polar", "--t", "1", "--varpi", "0.6", "0.8", "--r", "2"],
    ["geodesic", "--pz", "1", "--steps", "4", "--tmax", "3"],
    ["check", "frame", "--n", "1", "--samples", "50"],
    ["check", "jacobian", "--n", "2", "--samples", "10"],
    ["check", "identities", "--n", "1"],
    ["check", "divergence", "--n", "2"],
    ["check", "annulus", "--n", "1"],
    ["check", "santalo"],
    ["cone-bounds", "--n", "1", "--alpha", "4"],
    ["koranyi-bound", "--n", "2"],
    ["radial", "--kmax", "256"],
    ["sharpness", "--n", "1", "--rho", RHO_HALF_PI, "--steps", "3"],
    ["sl", "--n", "1", "--rho", RHO_HALF_PI, "--grid", "128", "--weighted"],
    ["euclid", "--d", "3", "--a", "0.7853981633974483", "--gamma", "1"],
    ["--format", "json", "curves", "--fn", "w", "--grid", "32"],
]


def run(args):
    return subprocess.run([CLI, *args], capture_output=True, text=True, check=False)


@needs_cli
@pytest.mark.parametrize("args", COMMANDS, ids=lambda a: " ".join(a[:2]))
def test_reports_validate_against_schema(args):
    jsonschema = pytest.importorskip("jsonschema")
    with open(SCHEMA) as fh:
        schema = json.load(fh)
    proc = run(args)
    assert proc.returncode == 0, proc.stderr
    jsonschema.validate(json.loads(proc.stdout), schema)


@needs_cli
def test_cone_bounds_santalo():
    out = json.loads(run(["cone-bounds", "--n", "1", "--alpha", "4"]).stdout)
    assert abs(out["outputs"]["santalo"] - math.pi**3 / 8) < 1e-12


@needs_cli
def test_curves_csv():
    proc = run(["curves", "--fn", "v", "--grid", "40"])
    lines = proc.stdout.strip().splitlines()
    assert lines[0] == "r,value"
    assert len(lines) == 41
    r, v = map(float, lines[1].split(","))
    assert -2 * math.pi < r < 0


@needs_cli
def test_exit_codes():
    assert run(["nope"]).returncode == 2
    assert run(["eval", "--fn", "w", "--r", "0"]).returncode == 2
    assert run(["--tol", "1e-300", "--max-evals", "100", "koranyi-bound"]).returncode == 3


@needs_cli
def test_byte_identical_across_thread_counts():
    args = [CLI, "radial", "--kmax", "4096"]
    outs = {
        subprocess.run(args, capture_output=True, text=True, env={**os.environ, "HH_THREADS": t}).stdout
        for t in ("1", "3", "8")
    }
    assert len(outs) == 1


def test_module_bindings():
    hh = pytest.importorskip("hhardy")
    assert abs(hh.phi(math.pi) - 8 / math.pi) < 1e-15
    assert abs(hh.invert_phi(8 / math.pi) - math.pi) < 1e-10
    w = hh.eval_weights(0.0, 2)
    assert w["mu"] == pytest.approx(1 / 12, rel=1e-15)
    assert w["rw"] == pytest.approx(6, rel=1e-15)
    xi, z = hh.from_polar(2.0, [0.6, 0.8], 1.3)
    t, varpi, r = hh.to_polar(xi, z)
    assert abs(t - 2.0) < 1e-12 and abs(r - 1.3) < 1e-12
    assert hh.koranyi_upper_bound(1) < 1.0
    assert hh.sl_perp_estimate(1, math.pi / 2, 256, True) >= 0.25
    assert hh.cone_bounds(1, 4.0)["santalo"] == pytest.approx(math.pi**3 / 8, rel=1e-14)
    with pytest.raises(ValueError):
        hh.phi(0.0)
    with pytest.raises(hh.DomainError):
        hh.invert_phi(-1.0)
    code, out, _ = hh.run_cli(["koranyi-bound", "--n", "1"])
    assert code == 0 and json.loads(out)["command"] == "koranyi-bound"
