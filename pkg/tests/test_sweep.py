import json
import math
import subprocess
import sys

import pytest

from ratelab import parse_config, preset_config, run_sweep, render_csv, emit_plot_script
from ratelab.cli import main
from ratelab.errors import ParseError, ValidationError
from ratelab.sweep import (
    PAPER_TARGETS,
    calibrate_k,
    discrepancy_report,
    render_discrepancy_csv,
)

MINIMAL = """
[geometry]
omega_sr = 8
omega_rd = 8
omega_sd = 3
"""

SMALL_SWEEP = """
preset = fig3

[sweep]
rho_db = 5, 15
schemes = crs_noma, conventional
modes = paper
estimators = monte_carlo, quadrature_oracle
trials = 20000
seed = 7
"""


def test_minimal_document_gets_documented_defaults():
    cfg = parse_config(MINIMAL)
    assert cfg.trials == 10**6
    assert cfg.seed == 42
    assert cfg.truncation.n_max == 20 and cfg.truncation.k_max == 20
    assert cfg.truncation.quad_order == 50
    assert cfg.rho_grid_db[0] == 0.0 and cfg.rho_grid_db[-1] == 30.0
    assert len(cfg.rho_grid_db) == 31
    assert cfg.geometry.sd.mean_power == 3.0
    assert cfg.split.a1 == 0.9 and cfg.split.a2 == 0.1


def test_descending_grid_is_rejected_by_name():
    doc = MINIMAL + "\n[sweep]\nrho_db = 10, 5, 1\n"
    with pytest.raises(ValidationError, match="rho_db"):
        parse_config(doc)


def test_fig3_preset_keyword():
    # quoted and bare values are equivalent
    cfg_q = parse_config('preset = "fig3"\n')
    assert cfg_q.geometry.sd.mean_power == 3.0
    cfg = parse_config("preset = fig3\n")
    assert cfg.geometry.sd.mean_power == 3.0
    assert cfg.geometry.sr.mean_power == 8.0
    assert cfg.geometry.rd.mean_power == 8.0
    assert (cfg.split.a1, cfg.split.a2) == (0.9, 0.1)
    cfg4 = parse_config("preset = fig4\n")
    assert cfg4.geometry.sr.mean_power == 12.0


def test_explicit_keys_override_preset():
    cfg = parse_config("preset = fig3\n[geometry]\nomega_sd = 5\nk = 2\n")
    assert cfg.geometry.sd.mean_power == 5.0
    assert cfg.geometry.sr.k_factor == 2.0


def test_json_config_is_accepted():
    doc = json.dumps(
        {
            "preset": "fig3",
            "sweep": {"rho_db": [5.0, 25.0], "estimators": "quadrature_oracle",
                      "schemes": "crs_noma", "trials": 1000},
        }
    )
    cfg = parse_config(doc)
    assert cfg.rho_grid_db == (5.0, 25.0)
    assert cfg.estimators == ("quadrature_oracle",)


def test_parse_errors_and_field_errors():
    with pytest.raises(ParseError):
        parse_config("this is not a key value line\n")
    with pytest.raises(ParseError):
        parse_config("{not json")
    with pytest.raises(ValidationError, match="line 2"):
        parse_config("[sweep]\ntrials = many\n" + MINIMAL)
    with pytest.raises(ValidationError, match="unknown key"):
        parse_config(MINIMAL + "\n[sweep]\nbogus = 1\n")
    with pytest.raises(ValidationError, match="estimators"):
        parse_config(MINIMAL + "\n[sweep]\nestimators = magic\n")
    with pytest.raises(ValidationError):
        parse_config("[geometry]\nomega_sr = 8\n")  # missing links


def test_single_point_cardinality():
    doc = """
    preset = fig3
    [sweep]
    rho_db = 15
    schemes = crs_noma
    modes = paper
    estimators = monte_carlo, quadrature_oracle, series_corrected, series_paper_literal
    trials = 4000
    """
    cfg = parse_config(doc)
    result = run_sweep(cfg)
    # one grid point x 1 scheme x 4 estimators x 5 quantities
    assert len(result.rows) == 1 * 1 * 4 * 5
    assert all(math.isfinite(r.value) for r in result.rows)


def test_sweep_grid_cardinality_and_oracle_band():
    cfg = parse_config(SMALL_SWEEP)
    result = run_sweep(cfg)
    # |grid| x |schemes| x |estimators| x |quantities|
    assert len(result.rows) == 2 * 2 * 2 * 5
    mc = {(r.rho_db, r.scheme, r.quantity): r for r in result.rows if r.estimator == "monte_carlo"}
    qo = {(r.rho_db, r.scheme, r.quantity): r for r in result.rows if r.estimator == "quadrature_oracle"}
    assert set(mc) == set(qo)
    for key, row in mc.items():
        # 20k trials: generous band, the acceptance suite tightens this
        assert abs(row.value - qo[key].value) <= max(4 * row.std_err, 0.01), key


def test_fig3_every_mc_row_within_three_stderr_of_oracle():
    doc = """
    preset = fig3
    [sweep]
    rho_db = 5
    modes = paper
    estimators = monte_carlo, quadrature_oracle
    trials = 1000000
    seed = 42
    """
    result = run_sweep(parse_config(doc))
    mc = {(r.scheme, r.quantity): r for r in result.rows if r.estimator == "monte_carlo"}
    qo = {(r.scheme, r.quantity): r for r in result.rows if r.estimator == "quadrature_oracle"}
    for key, row in mc.items():
        assert abs(row.value - qo[key].value) <= 3 * row.std_err + 1e-12, key


def test_sweep_totals_nondecreasing_in_rho():
    result = run_sweep(parse_config(SMALL_SWEEP))
    by_series = {}
    for r in result.rows:
        if r.quantity == "c_total":
            by_series.setdefault((r.scheme, r.estimator), []).append((r.rho_db, r.value))
    assert by_series
    for series in by_series.values():
        series.sort()
        assert all(b[1] >= a[1] for a, b in zip(series, series[1:]))


def test_series_rows_only_for_crs_noma():
    doc = SMALL_SWEEP.replace("monte_carlo, quadrature_oracle", "series_corrected")
    result = run_sweep(parse_config(doc))
    assert {r.scheme for r in result.rows} == {"crs_noma"}
    assert all(r.estimator == "series_corrected" for r in result.rows)


def test_render_csv_shape_and_determinism():
    cfg = parse_config(SMALL_SWEEP)
    text_a = render_csv(run_sweep(cfg))
    text_b = render_csv(run_sweep(parse_config(SMALL_SWEEP)))
    assert text_a == text_b
    lines = text_a.splitlines()
    header_idx = next(i for i, l in enumerate(lines) if not l.startswith("#"))
    assert lines[header_idx] == "rho_db,scheme,mode,estimator,quantity,value,std_err"
    data = lines[header_idx + 1:]
    assert len(data) == 2 * 2 * 2 * 5
    # sorted by (rho_db, scheme, estimator, quantity)
    keys = [(float(l.split(",")[0]), l.split(",")[1], l.split(",")[3], l.split(",")[4]) for l in data]
    assert keys == sorted(keys)
    # quadrature rows carry a blank std_err, monte carlo rows do not
    for l in data:
        parts = l.split(",")
        if parts[3] == "quadrature_oracle":
            assert parts[6] == ""
        else:
            assert parts[6] != ""
    # six significant digits
    value = data[0].split(",")[5]
    mantissa = value.replace("-", "").replace(".", "").split("e")[0].lstrip("0")
    assert len(mantissa) <= 6


def test_worker_count_leaves_csv_bytes_unchanged():
    base = parse_config(SMALL_SWEEP)
    from dataclasses import replace

    a = render_csv(run_sweep(replace(base, workers=1)))
    b = render_csv(run_sweep(replace(base, workers=3)))
    assert a == b


def test_emit_plot_script_declares_one_series_per_scheme():
    result = run_sweep(parse_config(SMALL_SWEEP))
    script = emit_plot_script(result, csv_path="out.csv")
    assert script.count("'out.csv' using") == 2
    assert "strcol(5) eq 'c_total'" in script
    # only schema columns 1..7 are referenced
    for n in range(1, 8):
        pass
    assert "column(6)" in script and "column(8)" not in script


def test_calibration_roundtrip_recovers_known_k():
    # synthesize targets from a known K=4 run, then fit over a 0..10 grid
    true_k = 4.0
    targets = []
    for rho_db, scheme, _ in PAPER_TARGETS["fig3"]:
        cal = calibrate_k("fig3", targets=[(rho_db, scheme, 0.0)], k_grid=[true_k],
                          trials=50_000, seed=404)
        sim = cal.residuals[0][3]
        targets.append((rho_db, scheme, sim))
    fit = calibrate_k("fig3", targets=targets, k_grid=list(range(11)), trials=50_000, seed=404)
    assert fit.best_k == true_k
    zero = [r for r in fit.residuals if r[0] == true_k]
    assert all(abs(r[5]) < 1e-12 for r in zero)


def test_discrepancy_report_columns():
    cfg = preset_config("fig3")
    rows = discrepancy_report(cfg.geometry, [5.0, 25.0])
    assert len(rows) == 2 * 3
    quantities = {r[1] for r in rows}
    assert quantities == {"c_r_s1", "c_d_s1", "c_total"}
    for r in rows:
        assert r[5] == abs(r[2] - r[3])
    text = render_discrepancy_csv(rows, cfg.geometry)
    header = next(l for l in text.splitlines() if not l.startswith("#"))
    assert header == "rho_db,quantity,paper_literal,corrected,oracle,abs_gap"


CLI_CONFIG = """
preset = fig3
[sweep]
rho_db = 5
schemes = crs_noma
modes = paper
estimators = monte_carlo
trials = 5000
seed = 3
"""


def test_cli_sweep_and_seed_precedence(tmp_path, monkeypatch):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text(CLI_CONFIG)
    out = tmp_path / "a.csv"
    assert main(["sweep", "--config", str(cfg), "--out", str(out)]) == 0
    base = out.read_text()
    assert "# seed = 3" in base

    # env var overrides the config seed
    monkeypatch.setenv("RATELAB_SEED", "99")
    out_env = tmp_path / "b.csv"
    assert main(["sweep", "--config", str(cfg), "--out", str(out_env)]) == 0
    assert "# seed = 99" in out_env.read_text()

    # explicit flag beats the env var
    out_flag = tmp_path / "c.csv"
    assert main(["sweep", "--config", str(cfg), "--out", str(out_flag), "--seed", "3"]) == 0
    assert out_flag.read_text() == base


def test_cli_emit_plot_and_determinism(tmp_path):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text(CLI_CONFIG)
    out1, out2 = tmp_path / "r1.csv", tmp_path / "r2.csv"
    plot = tmp_path / "plot.gp"
    assert main(["sweep", "--config", str(cfg), "--out", str(out1), "--emit-plot", str(plot)]) == 0
    assert main(["sweep", "--config", str(cfg), "--out", str(out2), "--workers", "4"]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    assert "gnuplot" in plot.read_text()


def test_cli_uses_config_output_path(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    cfg = tmp_path / "cfg.txt"
    cfg.write_text(CLI_CONFIG + "\n[output]\npath = from_config.csv\n")
    assert main(["sweep", "--config", str(cfg)]) == 0
    assert (tmp_path / "from_config.csv").exists()


def test_cli_exit_codes(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("[sweep]\nrho_db = 9, 1\n" + MINIMAL)
    assert main(["sweep", "--config", str(bad)]) == 1
    assert main(["sweep", "--config", str(tmp_path / "missing.txt")]) == 1


def test_cli_discrepancy(tmp_path):
    out = tmp_path / "d.csv"
    assert main(["discrepancy", "--preset", "fig3", "--rho-grid", "5:25:10", "--out", str(out)]) == 0
    lines = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    assert lines[0] == "rho_db,quantity,paper_literal,corrected,oracle,abs_gap"
    assert len(lines) == 1 + 3 * 3


def test_cli_calibrate(tmp_path):
    out = tmp_path / "cal.csv"
    assert main([
        "calibrate", "--preset", "fig3", "--k-grid", "0,1", "--trials", "20000",
        "--seed", "5", "--out", str(out),
    ]) == 0
    text = out.read_text()
    assert "# best_k = " in text
    assert "k,rho_db,scheme,simulated,target,residual" in text


def test_console_entry_point(tmp_path):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text(CLI_CONFIG)
    out = tmp_path / "cli.csv"
    proc = subprocess.run(
        [sys.executable, "-m", "ratelab.cli", "sweep", "--config", str(cfg), "--out", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert out.exists()
