import json

import numpy as np
import pytest

from lmg.cli import main


def write_cfg(path, cfg):
    path.write_text(json.dumps(cfg))
    return str(path)


EVOLVE_CFG = {
    "command": "evolve",
    "model": {"source": "lmg", "xi": 1.0, "lam": 5.0, "mu": 0.0, "J": 1.0},
    "schedule": {"alpha": 0.6, "T1": 10.0, "T2": 7.5},
    "evolution": {"norm_dt": 0.1},
}


def read_csv(path):
    header = []
    with open(path) as fh:
        lines = fh.read().split("\n")
    comments = [l for l in lines if l.startswith("#")]
    body = [l for l in lines if l and not l.startswith("#")]
    return comments, body[0].split(","), [l.split(",") for l in body[1:]]


def test_evolve_runs_and_reports(tmp_path):
    cfg = write_cfg(tmp_path / "c.json", EVOLVE_CFG)
    assert main(["evolve", "--config", cfg, "--out", str(tmp_path / "o")]) == 0
    report = json.loads((tmp_path / "o" / "report.json").read_text())
    assert report["results"]["case"] == "iii"
    assert 0.0 <= report["results"]["final_target_population"] <= 1.0
    comments, cols, rows = read_csv(tmp_path / "o" / "trajectory.csv")
    assert any(report["report_hash"] in c for c in comments)
    assert cols[0] == "t"
    assert "fidelity" in cols
    # populations sum to ~1 on every row
    pop_cols = [i for i, c in enumerate(cols) if c.startswith("pop_")]
    for r in rows:
        assert abs(sum(float(r[i]) for i in pop_cols) - 1.0) < 1e-9


def test_determinism_bit_identical(tmp_path):
    cfg = write_cfg(tmp_path / "c.json", EVOLVE_CFG)
    assert main(["evolve", "--config", cfg, "--out", str(tmp_path / "a")]) == 0
    assert main(["evolve", "--config", cfg, "--out", str(tmp_path / "b")]) == 0
    for name in ("trajectory.csv", "report.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_override_changes_run(tmp_path):
    cfg = write_cfg(tmp_path / "c.json", EVOLVE_CFG)
    out = str(tmp_path / "o")
    assert main(["evolve", "--config", cfg, "--out", out,
                 "--override", "schedule.T1=12.0"]) == 0
    report = json.loads((tmp_path / "o" / "report.json").read_text())
    assert report["config"]["schedule"]["T1"] == 12.0


def test_config_errors(tmp_path):
    missing = str(tmp_path / "nope.json")
    assert main(["evolve", "--config", missing]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["evolve", "--config", str(bad)]) == 2
    unknown = write_cfg(tmp_path / "u.json", {**EVOLVE_CFG, "extra": 1})
    assert main(["evolve", "--config", unknown]) == 2
    mismatch = write_cfg(tmp_path / "m.json", EVOLVE_CFG)
    assert main(["spectrum", "--config", mismatch]) == 2
    noslash = write_cfg(tmp_path / "n.json", EVOLVE_CFG)
    assert main(["evolve", "--config", noslash, "--override", "oops"]) == 2


def test_numerical_validity_exit_code(tmp_path):
    cfg = write_cfg(tmp_path / "c.json", {
        "command": "gap-bound",
        "model": {"source": "lmg", "xi": 1.0, "lam": 5.0, "mu": 0.0, "J": 2.5},
        "bounds": {"N_values": [5]},
    })
    assert main(["gap-bound", "--config", cfg, "--out", str(tmp_path / "o")]) == 3


def test_spectrum_table(tmp_path):
    cfg = write_cfg(tmp_path / "c.json", {
        "command": "spectrum",
        "model": {"source": "lmg", "xi": 1.0, "lam": 1.0, "mu": 0.0, "J": 2.0},
        "grid": {"points": 101},
    })
    out = str(tmp_path / "o")
    assert main(["spectrum", "--config", cfg, "--out", out]) == 0
    comments, cols, rows = read_csv(tmp_path / "o" / "spectrum.csv")
    assert cols == ["chi_ratio", "E_0", "E_1", "E_2", "E_3", "E_4"]
    assert len(rows) == 101
    # ratio = 1 row matches the closed anharmonic form xi chi^2 (lam m - m^2 + J(J+1))
    last = [float(x) for x in rows[-1]]
    assert last[0] == 1.0
    m = np.arange(-2.0, 3.0)
    expected = np.sort(1.0 * (1.0 * m - m**2 + 6.0))
    np.testing.assert_allclose(sorted(last[1:]), expected, atol=1e-10)
    # levels continuous in the ratio
    vals = np.array([[float(x) for x in r[1:]] for r in rows])
    assert np.abs(np.diff(vals, axis=0)).max() < 0.3


def test_susy_check(tmp_path):
    cfg = write_cfg(tmp_path / "c.json", {
        "command": "susy-check",
        "model": {"source": "lmg", "xi": 1.0, "lam": 1.0, "mu": 0.0, "J": 2.0},
        "susy": {"chi1": 0.5, "chi2": 1.0, "mu_values": [0.0, 1.0]},
    })
    assert main(["susy-check", "--config", cfg, "--out", str(tmp_path / "o")]) == 0
    report = json.loads((tmp_path / "o" / "susy.json").read_text())
    for row in report["results"]["checks"]:
        assert row["residual"] < 1e-10
        assert row["fidelity"] > 1 - 1e-10
        assert abs(row["energy_predicted"] - row["energy_exact"]) < 1e-9


def test_gap_bound_config(tmp_path):
    cfg = write_cfg(tmp_path / "c.json", {
        "command": "gap-bound",
        "model": {"source": "lmg", "xi": 1.0, "lam": 5.0, "mu": 0.0, "J": 5.0},
        "bounds": {"N_values": [8, 10], "chi_ratio": 0.75},
    })
    assert main(["gap-bound", "--config", cfg, "--out", str(tmp_path / "o")]) == 0
    _, cols, rows = read_csv(tmp_path / "o" / "gap_bounds.csv")
    k_valid = cols.index("valid")
    k_bound = cols.index("iterated_bound")
    k_exact = cols.index("exact_ratio")
    for r in rows:
        if r[k_valid] == "1":
            assert float(r[k_bound]) <= float(r[k_exact]) + 1e-12


def test_scan_command(tmp_path):
    cfg = write_cfg(tmp_path / "c.json", {
        "command": "scan",
        "model": {"source": "lmg", "xi": 1.0, "lam": 5.0, "mu": 0.0, "J": 1.0},
        "scan": {"schedules": [
            {"alpha": 0.6, "T1": 5.0, "T2": 4.0},
            {"alpha": 0.6, "T1": 10.0, "T2": 8.0},
        ]},
        "evolution": {"norm_dt": 0.1},
    })
    assert main(["scan", "--config", cfg, "--out", str(tmp_path / "o")]) == 0
    _, cols, rows = read_csv(tmp_path / "o" / "scan.csv")
    assert cols == ["alpha", "T", "chi1max_sqrtT", "chi2max_sqrtT", "efficiency"]
    assert len(rows) == 2
    # longer schedule transfers at least as well here
    assert float(rows[1][4]) >= float(rows[0][4])


def test_iontrap_compare_command(tmp_path):
    cfg = write_cfg(tmp_path / "c.json", {
        "command": "iontrap-compare",
        "model": {"source": "iontrap", "nu": 1.0, "eta": 0.05, "delta": 1.2,
                  "N": 2, "n_max": 4},
        "schedule": {"alpha": 0.2, "T1": 150.0, "T2": 100.0},
        "evolution": {"norm_dt": 0.1},
        "compare": {"norm_dt_effective": 0.1},
    })
    assert main(["iontrap-compare", "--config", cfg, "--out", str(tmp_path / "o")]) == 0
    report = json.loads((tmp_path / "o" / "report.json").read_text())
    assert report["results"]["rms"] < 0.05


def test_iontrap_cutoff_overflow_exit_code(tmp_path):
    cfg = write_cfg(tmp_path / "c.json", {
        "command": "iontrap-compare",
        "model": {"source": "iontrap", "nu": 1.0, "eta": 0.1, "delta": 0.96,
                  "N": 2, "n_max": 2},
        "schedule": {"alpha": 0.6, "T1": 20.0, "T2": 15.0},
        "evolution": {"norm_dt": 0.1, "window_factor": 3.0},
        "compare": {"norm_dt_effective": 0.1},
    })
    assert main(["iontrap-compare", "--config", cfg, "--out", str(tmp_path / "o")]) == 4


def test_shipped_configs_load():
    from importlib import resources
    names = ["fig3a.json", "fig3b.json", "case_ii_N3.json",
             "case_iv_N4_m1.json", "gap_scan.json"]
    for name in names:
        text = resources.files("lmg").joinpath("configs", name).read_text()
        cfg = json.loads(text)
        assert "command" in cfg and "model" in cfg
