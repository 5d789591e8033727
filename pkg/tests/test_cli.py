import json
import math
import os
from pathlib import Path

import numpy as np
import pytest

from mildrep import ConvergenceError, InvariantViolation
from mildrep.cli import main

GOLDEN = Path(__file__).parent / "golden"


def run(tmp_path, *argv, name="out"):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    return code, out.read_text() if out.exists() else ""


def strip_timestamp(text):
    return "\n".join(line for line in text.splitlines()
                     if "timestamp" not in line)


def csv_rows(text):
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    header = lines[0].split(",")
    return [dict(zip(header, ln.split(","))) for ln in lines[1:]]


# --- potential ---------------------------------------------------------------

def test_potential_rescaled_row_at_one(tmp_path):
    code, text = run(tmp_path, "potential", "--kind", "rescaled", "--alpha", "4",
                     "--beta", "2", "--rmax", "2", "--steps", "5")
    assert code == 0
    rows = {row["r"]: row for row in csv_rows(text)}
    assert float(rows["1"]["w"]) == -1.0


def test_potential_loglimit_row_at_one(tmp_path):
    code, text = run(tmp_path, "potential", "--kind", "loglimit", "--alpha", "3",
                     "--rmax", "2", "--steps", "5")
    assert code == 0
    rows = {row["r"]: row for row in csv_rows(text)}
    assert float(rows["1"]["w"]) == -1.0


def test_potential_zero_length_grid_exits_2(tmp_path):
    code, _ = run(tmp_path, "potential", "--kind", "powerlaw", "--alpha", "4",
                  "--beta", "2", "--rmax", "2", "--steps", "0")
    assert code == 2


def test_potential_invalid_kernel_exits_2(tmp_path):
    code, _ = run(tmp_path, "potential", "--kind", "powerlaw", "--alpha", "2",
                  "--beta", "3", "--rmax", "2", "--steps", "4")
    assert code == 2
    code, _ = run(tmp_path, "potential", "--kind", "powerlaw", "--alpha", "3",
                  "--beta", "1.5", "--rmax", "2", "--steps", "4")
    assert code == 2


# --- thresholds ----------------------------------------------------------------

def test_thresholds_centrifugal_squeeze(tmp_path):
    code, text = run(tmp_path, "thresholds", "--n", "2", "--beta", "2")
    assert code == 0
    row, = csv_rows(text)
    assert float(row["underline_alpha"]) == pytest.approx(4.0, abs=1e-9)
    assert float(row["alpha_star"]) == pytest.approx(4.0, abs=1e-9)
    assert float(row["alpha_plus_lo"]) <= 4.0 <= float(row["alpha_plus_hi"])


def test_thresholds_one_dimensional(tmp_path):
    code, text = run(tmp_path, "thresholds", "--n", "1", "--beta", "2")
    assert code == 0
    row, = csv_rows(text)
    for key in ("underline_alpha", "alpha_star"):
        assert float(row[key]) == pytest.approx(3.0, abs=1e-9)


def test_thresholds_diagonal_branch(tmp_path):
    code, text = run(tmp_path, "thresholds", "--n", "2", "--beta", "3.5")
    assert code == 0
    row, = csv_rows(text)
    assert float(row["underline_alpha"]) == 3.5
    assert float(row["alpha_star"]) == 3.5


def test_thresholds_json_mirrors_csv(tmp_path):
    _, text = run(tmp_path, "thresholds", "--n", "2", "--beta", "2")
    _, jtext = run(tmp_path, "thresholds", "--n", "2", "--beta", "2",
                   "--format", "json", name="out.json")
    row, = csv_rows(text)
    jrow, = json.loads(jtext)["reports"]
    for key in row:
        assert float(row[key]) == jrow[key]


def test_thresholds_header_is_spec_exact(tmp_path):
    _, text = run(tmp_path, "thresholds", "--n", "2", "--beta", "3.5")
    header = [ln for ln in text.splitlines() if not ln.startswith("#")][0]
    assert header == "n,beta,underline_alpha,alpha_plus_lo,alpha_plus_hi,alpha_star"


# --- flow -------------------------------------------------------------------------

def test_flow_simplex_regime_json(tmp_path):
    code, text = run(tmp_path, "flow", "--n", "2", "--alpha", "5", "--beta", "3",
                     "--particles", "30", "--restarts", "20", "--seed", "2",
                     name="flow.json")
    assert code == 0
    doc = json.loads(text)
    assert doc["result"]["classification"]["kind"] == "UnitSimplex"
    assert doc["config"]["seed"] == 2


def test_flow_corner_radius(tmp_path):
    code, text = run(tmp_path, "flow", "--n", "3", "--alpha", "4", "--beta", "2",
                     "--particles", "30", "--restarts", "6", "--seed", "2",
                     name="flow.json")
    assert code == 0
    doc = json.loads(text)
    label = doc["result"]["classification"]
    assert label["kind"] == "SphereMoment"
    assert label["radius"] == pytest.approx(math.sqrt(3.0 / 8), abs=1e-3)
    radii = np.linalg.norm(np.asarray(doc["result"]["points"]), axis=1)
    np.testing.assert_allclose(radii, math.sqrt(3.0 / 8), atol=1e-3)


def test_flow_trace_file(tmp_path):
    trace = tmp_path / "trace.csv"
    code, _ = run(tmp_path, "flow", "--n", "2", "--alpha", "5", "--beta", "3",
                  "--particles", "12", "--restarts", "2", "--seed", "1",
                  "--trace", str(trace), name="flow.json")
    assert code == 0
    rows = csv_rows(trace.read_text())
    energies = [float(r["energy"]) for r in rows]
    assert rows[0]["step"] == "0"
    assert all(b <= a for a, b in zip(energies, energies[1:]))


# --- fgrid ------------------------------------------------------------------------

def test_fgrid_values(tmp_path):
    code, text = run(tmp_path, "fgrid", "--n-list", "2", "--tmin", "2",
                     "--tmax", "4", "--steps", "3")
    assert code == 0
    rows = {(r["n"], r["t"]): r for r in csv_rows(text)}
    assert abs(float(rows[("2", "2")]["f_n"])) <= 1e-15
    assert float(rows[("2", "3")]["f_n"]) == pytest.approx(0.0251664, abs=1e-6)
    assert "# monotone_in_n_on_[2,4]: true" in text


def test_fgrid_rejects_bad_grid(tmp_path):
    code, _ = run(tmp_path, "fgrid", "--n-list", "2", "--tmin", "-1",
                  "--tmax", "4", "--steps", "3")
    assert code == 2


# --- exit codes ---------------------------------------------------------------------

def test_exit_code_3_on_invariant_violation(tmp_path, monkeypatch):
    import mildrep.cli as cli

    def boom(*a, **k):
        raise InvariantViolation("forced")

    monkeypatch.setattr(cli.th, "phase_sweep", boom)
    code = main(["thresholds", "--n", "2", "--beta", "2",
                 "--out", str(tmp_path / "x")])
    assert code == 3


def test_exit_code_4_on_flow_failure(tmp_path, monkeypatch):
    import mildrep.cli as cli

    def boom(*a, **k):
        raise ConvergenceError("forced")

    monkeypatch.setattr(cli, "multistart", boom)
    code = main(["flow", "--n", "2", "--alpha", "5", "--beta", "3",
                 "--out", str(tmp_path / "x")])
    assert code == 4


# --- determinism and golden files ----------------------------------------------------

@pytest.mark.parametrize("argv", [
    ("potential", "--kind", "powerlaw", "--alpha", "3.5", "--beta", "2.5",
     "--rmax", "2", "--steps", "7"),
    ("thresholds", "--n", "2", "--beta", "2.5", "--seed", "3"),
    ("fgrid", "--n-list", "1,2,5", "--tmin", "1", "--tmax", "5", "--steps", "9"),
    ("flow", "--n", "2", "--alpha", "5", "--beta", "3", "--particles", "12",
     "--restarts", "3", "--seed", "9", "--format", "json"),
])
def test_repeat_runs_byte_identical(tmp_path, argv):
    _, first = run(tmp_path, *argv, name="a")
    _, second = run(tmp_path, *argv, name="b")
    assert strip_timestamp(first) == strip_timestamp(second)
    assert first


@pytest.mark.parametrize("name,argv", [
    ("potential_rescaled_4_2.csv",
     ("potential", "--kind", "rescaled", "--alpha", "4", "--beta", "2",
      "--rmax", "2", "--steps", "9")),
    ("fgrid_small.csv",
     ("fgrid", "--n-list", "1,2,3,10", "--tmin", "0.5", "--tmax", "6",
      "--steps", "12")),
    ("potential_loglimit_3.json",
     ("potential", "--kind", "loglimit", "--alpha", "3", "--rmax", "2",
      "--steps", "5", "--format", "json")),
])
def test_golden_outputs(tmp_path, name, argv):
    _, text = run(tmp_path, *argv, name=name)
    want = (GOLDEN / name).read_text()
    assert strip_timestamp(text) == strip_timestamp(want)


def test_plot_writes_figure(tmp_path):
    png = tmp_path / "fig.png"
    code = main(["potential", "--kind", "powerlaw", "--alpha", "4", "--beta", "2",
                 "--rmax", "2", "--steps", "20", "--out", str(tmp_path / "t.csv"),
                 "--plot", str(png)])
    assert code == 0
    assert png.exists() and png.stat().st_size > 0
