"""End-to-end CLI checks: exit codes, file formats, determinism, and the
committed golden outputs."""

import csv
import json
import math
import os
import subprocess

import pytest

CLI = os.environ["TURNPLATE_CLI"]
SPECS = os.environ["TURNPLATE_SPECS"]
GOLDEN = os.environ["TURNPLATE_GOLDEN"]


def run(*args, check=True):
    result = subprocess.run([CLI, *args], capture_output=True, text=True)
    if check and result.returncode != 0:
        raise AssertionError(f"exit {result.returncode}: {result.stderr}")
    return result


def spec(name):
    return os.path.join(SPECS, name)


def test_spectrum_triangle():
    out = json.loads(run("spectrum", "--spec", spec("triangle.json")).stdout)
    values = out["eigenvalues"]
    s3 = math.sqrt(3)
    assert abs(values[0] + s3) < 1e-10
    assert abs(values[1]) < 1e-10
    assert abs(values[2] - s3) < 1e-10
    assert out["symmetry"] == {"n": 3, "p": 1}
    assert abs(out["char_poly"]["deviation"]) < 1e-10


def test_spectrum_phase0_csv():
    out = run("spectrum", "--spec", spec("triangle_phase0.json"), "--format", "csv").stdout
    rows = list(csv.DictReader(out.splitlines()))
    values = sorted(float(r["eigenvalue"]) for r in rows)
    assert abs(values[0] + 1) < 1e-10 and abs(values[1] + 1) < 1e-10 and abs(values[2] - 2) < 1e-10


def test_grouped_spectrum_has_three_separated_groups():
    out = json.loads(run("spectrum", "--spec", spec("ring9_grouped.json")).stdout)
    assert len(out["eigenvalues"]) == 9
    assert len(out["block_offsets"]) == 3
    # every label appears three times
    for l in (-1, 0, 1):
        assert out["labels"].count(l) == 3


def test_strong_ring_spectrum_groups():
    out = json.loads(run("spectrum", "--spec", spec("ring9_strong.json")).stdout)
    values = sorted(out["eigenvalues"])
    groups = [values[0:3], values[3:6], values[6:9]]
    spreads = [g[-1] - g[0] for g in groups]
    gaps = [groups[1][0] - groups[0][-1], groups[2][0] - groups[1][-1]]
    assert min(gaps) > 10 * max(spreads)


def test_blocks_union():
    out = json.loads(run("blocks", "--spec", spec("ring9_grouped.json")).stdout)
    assert out["symmetry"] == {"n": 3, "p": 3}
    assert out["union_max_deviation"] < 1e-9
    assert out["max_offblock_norm"] < 1e-12


def test_fit_triangle():
    out = json.loads(run("fit", "--spec", spec("triangle.json")).stdout)
    fit = out["fit"]
    assert fit is not None
    assert abs(fit["epsilon"] - 3 * math.sqrt(3)) < 1e-10
    assert abs(fit["tau"] - 1.2092) < 1e-4


def test_fit_pentagon_is_null():
    out = json.loads(run("fit", "--spec", spec("pentagon.json")).stdout)
    assert out["fit"] is None


def test_effective_then_fit(tmp_path):
    eff_spec = tmp_path / "effective.json"
    out = json.loads(
        run("effective", "--spec", spec("ring9_strong.json"), "--spec-out", str(eff_spec)).stdout
    )
    assert out["manifold_sites"] == [1, 4, 7]
    assert abs(out["g"] - 0.01) < 1e-5
    fit = json.loads(run("fit", "--spec", str(eff_spec)).stdout)["fit"]
    assert fit is not None
    assert abs(fit["tau"] - 120.92) < 0.1


def test_evolve_csv_and_golden(tmp_path):
    out_csv = tmp_path / "trace.csv"
    run("evolve", "--spec", spec("triangle.json"), "--tmax", "4.0", "--steps", "400",
        "--out", str(out_csv))
    with open(out_csv) as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == 401
    # compare numerically against the committed golden trace
    with open(os.path.join(GOLDEN, "triangle_trace.csv")) as f:
        golden_rows = list(csv.DictReader(f))
    assert len(golden_rows) == len(rows)
    for ours, theirs in zip(rows, golden_rows):
        for key in ("t", "p1", "p2", "p3"):
            assert abs(float(ours[key]) - float(theirs[key])) < 1e-9


def test_evolve_peaks():
    result = run("evolve", "--spec", spec("triangle.json"), "--tmax", "4.0", "--steps", "2000",
                 "--out", os.devnull, "--threshold", "0.99")
    peaks = json.loads(result.stdout)["peaks"]
    assert abs(peaks["site2"] - 1.2092) < 1e-3
    assert abs(peaks["site3"] - 2.4184) < 1e-3


def test_evolve_svg(tmp_path):
    out_svg = tmp_path / "trace.svg"
    run("evolve", "--spec", spec("triangle.json"), "--tmax", "4.0", "--steps", "200",
        "--format", "svg", "--out", str(out_svg))
    text = out_svg.read_text()
    assert text.startswith("<svg")
    assert "polyline" in text
    assert "href" not in text


def test_determinism(tmp_path):
    a = run("report", "--spec", spec("ring9_grouped.json")).stdout
    b = run("report", "--spec", spec("ring9_grouped.json")).stdout
    assert a == b
    c = run("evolve", "--spec", spec("triangle.json"), "--tmax", "4.0", "--steps", "100").stdout
    d = run("evolve", "--spec", spec("triangle.json"), "--tmax", "4.0", "--steps", "100").stdout
    assert c == d


def test_fock_golden(tmp_path):
    out_csv = tmp_path / "fock.csv"
    result = run("fock", "--spec", spec("ring9_crow.json"), "--tol", "1e-4", "--steps", "400",
                 "--out", str(out_csv))
    meta = json.loads(result.stdout)["turnplate"]
    with open(os.path.join(GOLDEN, "crow9_meta.json")) as f:
        golden = json.load(f)
    assert meta["first_hop_site"] == golden["first_hop_site"]
    assert abs(meta["tau"] - golden["tau"]) < 1e-6
    assert abs(meta["theta"] - golden["theta"]) < 1e-6
    assert (tmp_path / "fock_raw.csv").exists()
    with open(out_csv) as f:
        header = f.readline().strip()
    assert header == "t," + ",".join(f"f{i}" for i in range(1, 10))


def test_fock_vacuum_stationary(tmp_path):
    out_csv = tmp_path / "vac.csv"
    run("fock", "--spec", spec("triangle.json"), "--input", "1", "--tmax", "5", "--steps", "50",
        "--out", str(out_csv))
    with open(out_csv) as f:
        rows = list(csv.DictReader(f))
    for row in rows:
        # vacuum overlap of the vacuum input stays 1 everywhere
        assert abs(float(row["f1"]) - 1.0) < 1e-10


def test_fock_density_dump(tmp_path):
    dens = tmp_path / "rho.json"
    run("fock", "--spec", spec("triangle.json"), "--tol", "1e-6", "--steps", "20",
        "--out", os.devnull, "--density-out", str(dens), "--density-site", "3")
    rho = json.loads(dens.read_text())
    assert rho["dim"] == 3
    assert len(rho["matrix"]) == 9
    # at tau the full input state sits at the first-hop site: rho is pure flat
    diag = [rho["matrix"][0], rho["matrix"][4], rho["matrix"][8]]
    for re, im in diag:
        assert abs(re - 1 / 3) < 1e-8 and abs(im) < 1e-12


def test_bad_spec_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n_sites": 4, "uniform": {"mag": 1.0, "total_phase": 0.0}}')
    assert run("spectrum", "--spec", str(bad), check=False).returncode == 2
    missing = run("spectrum", "--spec", str(tmp_path / "none.json"), check=False)
    assert missing.returncode == 2
    bad_steps = run("evolve", "--spec", spec("triangle.json"), "--steps", "1", check=False)
    assert bad_steps.returncode == 2
    bad_tol = run("fit", "--spec", spec("triangle.json"), "--tol", "0", check=False)
    assert bad_tol.returncode == 2


def test_report_strong_ring():
    out = json.loads(run("report", "--spec", spec("ring9_strong.json"), "--steps", "4000").stdout)
    assert out["fit"] is None  # the exact strong-coupling spectrum has no global fit
    assert out["leakage"] is not None
    assert out["leakage"] < 1e-2


def test_report_triangle():
    out = json.loads(run("report", "--spec", spec("triangle.json")).stdout)
    assert abs(out["predicted_tau"] - 1.2092) < 1e-4
    assert out["measured_transfer"]["target_site"] == 2
    assert abs(out["measured_transfer"]["time"] - 1.2092) < 1e-3
    fids = out["turnplate"]["step_fidelities"]
    assert all(f > 1 - 1e-8 for f in fids)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
