"""Command-line interface: exit codes, CSV outputs, manifests, reproducibility."""
import csv
import json
import math

import pytest

from rotabouss.cli import dispatch

SIGMA = "2"
RO = "1"
ALPHA1 = "2.2360679774997896"
ALPHA2 = "3"
PARAMS = ["--sigma", SIGMA, "--ro", RO, "--alpha1", ALPHA1, "--alpha2", ALPHA2]
WITH_R = PARAMS + ["--rayleigh", "700"]

R_C1 = 658.042658053463
R_C2 = 3153.4350996794865
GROWTH_AT_700 = 0.6236676429300163


def _read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def _read_manifest(csv_path):
    root = str(csv_path)[: -len(".csv")]
    with open(root + ".manifest.json", encoding="utf-8") as fh:
        return json.load(fh)


def test_spectrum_single_mode(tmp_path, capsys):
    out = str(tmp_path / "spec.csv")
    code = dispatch(["spectrum"] + WITH_R
                    + ["--j", "1", "--k", "0", "--l", "1", "--out", out])
    assert code == 0
    rows = _read_csv(out)
    assert len(rows) == 6                      # three branches, two copies each
    assert {r["class"] for r in rows} == {"Lambda1"}
    assert sorted({r["branch"] for r in rows}) == ["1", "2", "3"]
    leading = max(float(r["re_beta"]) for r in rows)
    assert leading == pytest.approx(GROWTH_AT_700, rel=1e-12)
    man = _read_manifest(out)
    for key in ("subcommand", "params", "settings", "resolved_argv",
                "version", "outputs", "duration_seconds"):
        assert key in man
    assert man["subcommand"] == "spectrum"
    assert man["params"]["rayleigh"] == 700.0
    assert man["outputs"] == [out]


def test_spectrum_lattice_and_symmetric_space(tmp_path):
    out_full = str(tmp_path / "full.csv")
    out_sym = str(tmp_path / "sym.csv")
    base = ["spectrum"] + WITH_R + ["--jmax", "1", "--kmax", "1",
                                    "--lmax", "1"]
    assert dispatch(base + ["--space", "full", "--out", out_full]) == 0
    assert dispatch(base + ["--space", "sym", "--out", out_sym]) == 0
    full = _read_csv(out_full)
    sym = _read_csv(out_sym)
    assert len(full) > len(sym) > 0
    assert {r["class"] for r in full} == {"Lambda1", "Lambda2", "Lambda3"}


def test_spectrum_partial_single_mode_is_usage_error(tmp_path, capsys):
    out = str(tmp_path / "x.csv")
    code = dispatch(["spectrum"] + WITH_R + ["--j", "1", "--out", out])
    assert code == 2
    assert "single mode" in capsys.readouterr().err


def test_critical_steady(tmp_path):
    out = str(tmp_path / "crit.csv")
    code = dispatch(["critical"] + PARAMS + ["--mode", "steady", "--out", out])
    assert code == 0
    rows = _read_csv(out)
    assert len(rows) == 1
    row = rows[0]
    assert row["onset"] == "steady"
    assert float(row["r_crit"]) == pytest.approx(R_C1, rel=1e-12)
    assert (row["j"], row["k"], row["l"]) == ("1", "0", "1")
    assert row["unique"] == "true"
    assert row["hopf_freq"] == ""


def test_critical_both_without_oscillatory_onset(tmp_path, capsys):
    out = str(tmp_path / "crit.csv")
    code = dispatch(["critical"] + PARAMS + ["--mode", "both", "--out", out])
    assert code == 0
    assert "no oscillatory onset" in capsys.readouterr().out
    assert len(_read_csv(out)) == 1


def test_critical_explicit_hopf_fails_at_large_sigma(tmp_path, capsys):
    out = str(tmp_path / "crit.csv")
    code = dispatch(["critical"] + PARAMS + ["--mode", "hopf", "--out", out])
    assert code == 1
    assert "SigmaOutOfRange" in capsys.readouterr().err


def test_critical_hopf_values(tmp_path):
    out = str(tmp_path / "hopf.csv")
    code = dispatch(["critical", "--sigma", "0.5", "--ro", "0.04",
                     "--alpha1", "1", "--alpha2", "4.5",
                     "--mode", "hopf", "--out", out])
    assert code == 0
    row = _read_csv(out)[0]
    assert row["onset"] == "hopf"
    assert float(row["r_crit"]) == pytest.approx(R_C2, rel=1e-12)
    assert float(row["hopf_freq"]) == pytest.approx(4.46673120551, rel=1e-9)
    assert row["hopf_admissible"] == "true"


def test_critical_scan_brackets_onset(tmp_path, capsys):
    out = str(tmp_path / "scan.csv")
    code = dispatch(["critical"] + PARAMS
                    + ["--scan", "600:700:6", "--out", out])
    assert code == 0
    text = capsys.readouterr().out
    assert "changes sign" in text and "640" in text and "660" in text
    rows = _read_csv(out)
    assert len(rows) == 6
    rates = [float(r["re_beta_max"]) for r in rows]
    assert rates == sorted(rates)
    assert rates[0] < 0.0 < rates[-1]


def test_asymptotics(tmp_path, capsys):
    out = str(tmp_path / "asym.csv")
    code = dispatch(["asymptotics", "--sigma", SIGMA, "--alpha1", ALPHA1,
                     "--alpha2", ALPHA2,
                     "--ro-list", "1e-2,3e-3,1e-3,3e-4,1e-4", "--out", out])
    assert code == 0
    text = capsys.readouterr().out
    assert "slope" in text
    rows = _read_csv(out)
    assert len(rows) == 5
    assert float(rows[0]["r_continuous"]) == pytest.approx(2564.4058213262606,
                                                           rel=1e-12)
    assert float(rows[0]["r_lattice"]) >= float(rows[0]["r_continuous"])
    assert [c for c in rows[0]] == ["ro", "b", "x_star", "r_continuous",
                                    "r_lattice"]


def test_reduce_single_rayleigh(tmp_path, capsys):
    out = str(tmp_path / "reduce.csv")
    r_run = 1.05 * R_C1
    code = dispatch(["reduce"] + PARAMS + ["--r", repr(r_run), "--out", out])
    assert code == 0
    text = capsys.readouterr().out
    assert "onset" in text and "delta" in text
    row = _read_csv(out)[0]
    assert float(row["beta"]) == pytest.approx(0.490511164227, rel=1e-10)
    assert float(row["delta"]) == pytest.approx(-0.0833441617643971,
                                                rel=1e-12)
    assert float(row["radius_pred"]) == pytest.approx(2.42597799226, rel=1e-9)


def test_reduce_scan_zeroes_radius_below_onset(tmp_path):
    out = str(tmp_path / "rscan.csv")
    code = dispatch(["reduce"] + PARAMS
                    + ["--r-scan", "600:700:5", "--out", out])
    assert code == 0
    rows = _read_csv(out)
    assert len(rows) == 5
    for row in rows:
        below = float(row["R"]) < R_C1
        radius = float(row["radius_pred"])
        assert (radius == 0.0) if below else (radius > 0.0)


def test_reduce_needs_exactly_one_rayleigh_spec(tmp_path, capsys):
    out = str(tmp_path / "r.csv")
    assert dispatch(["reduce"] + PARAMS + ["--out", out]) == 2
    assert dispatch(["reduce"] + PARAMS + ["--r", "700",
                     "--r-scan", "600:700:3", "--out", out]) == 2


def test_simulate_short_run_and_bit_exact_replay(tmp_path, capsys):
    out = str(tmp_path / "sim.csv")
    code = dispatch(["simulate"] + PARAMS
                    + ["--r", "700", "--nx", "16", "--nz", "8",
                       "--dt", "1e-3", "--t-end", "0.2", "--scheme", "imex2",
                       "--diag-every", "0.05", "--out", out])
    assert code == 0
    assert "outcome" in capsys.readouterr().out
    rows = _read_csv(out)
    assert len(rows) == 5                       # t = 0.0 .. 0.2 step 0.05
    assert float(rows[0]["t"]) == 0.0
    assert float(rows[-1]["t"]) == pytest.approx(0.2)
    assert float(rows[-1]["growth_rate"]) == pytest.approx(GROWTH_AT_700,
                                                           rel=1e-3)
    assert float(rows[-1]["div_max"]) <= 1e-12

    with open(out, "rb") as fh:
        first = fh.read()
    man = _read_manifest(out)
    assert man["settings"]["dealias"] is True
    assert dispatch(man["resolved_argv"]) == 0
    with open(out, "rb") as fh:
        assert fh.read() == first


def test_simulate_requires_rayleigh(tmp_path, capsys):
    out = str(tmp_path / "sim.csv")
    code = dispatch(["simulate"] + PARAMS + ["--out", out])
    assert code == 2
    assert "missing parameter" in capsys.readouterr().err


def test_config_file_with_override(tmp_path):
    cfg = tmp_path / "params.json"
    cfg.write_text(json.dumps({"sigma": 2.0, "ro": 1.0, "rayleigh": 700.0,
                               "alpha1": math.sqrt(5.0), "alpha2": 3.0}),
                   encoding="utf-8")
    out = str(tmp_path / "spec.csv")
    code = dispatch(["spectrum", "--config", str(cfg), "--rayleigh", "800",
                     "--j", "1", "--k", "0", "--l", "1", "--out", out])
    assert code == 0
    man = _read_manifest(out)
    assert man["params"]["rayleigh"] == 800.0
    # the manifest argv embeds resolved values, not the config file
    assert "--config" not in man["resolved_argv"]
    leading = max(float(r["re_beta"]) for r in _read_csv(out))
    assert leading > GROWTH_AT_700             # more supercritical at R = 800


def test_bad_config_is_usage_error(tmp_path, capsys):
    out = str(tmp_path / "x.csv")
    missing = str(tmp_path / "nope.json")
    assert dispatch(["spectrum", "--config", missing, "--j", "1", "--k", "0",
                     "--l", "1", "--out", out]) == 2
    arr = tmp_path / "arr.json"
    arr.write_text("[1, 2]", encoding="utf-8")
    assert dispatch(["spectrum", "--config", str(arr), "--j", "1", "--k", "0",
                     "--l", "1", "--out", out]) == 2


def test_threads_flag_is_deterministic(tmp_path, monkeypatch):
    out1 = str(tmp_path / "t1.csv")
    out2 = str(tmp_path / "t2.csv")
    argv = ["critical"] + PARAMS + ["--mode", "both"]
    assert dispatch(argv + ["--threads", "1", "--out", out1]) == 0
    assert dispatch(argv + ["--threads", "4", "--out", out2]) == 0
    with open(out1, "rb") as a, open(out2, "rb") as b:
        assert a.read() == b.read()

    monkeypatch.setenv("ROTABOUSS_THREADS", "0")
    assert dispatch(argv + ["--out", out1]) == 2


def test_verify_quick_names_failing_check(capsys):
    code = dispatch(["verify", "--quick"])
    captured = capsys.readouterr()
    assert code == 1
    assert "check 5" in captured.err
    assert "PASS" in captured.out and "FAIL" in captured.out


def test_usage_errors():
    assert dispatch(["nonsense"]) == 2
    assert dispatch(["critical", "--bogus-flag"]) == 2
    assert dispatch(["critical"] + PARAMS) == 2            # missing --out
    assert dispatch(["critical"] + PARAMS
                    + ["--scan", "5:1:3", "--out", "x.csv"]) == 2
    assert dispatch(["critical"] + PARAMS
                    + ["--scan", "1:2", "--out", "x.csv"]) == 2


def test_missing_params_message(tmp_path, capsys):
    out = str(tmp_path / "x.csv")
    code = dispatch(["spectrum", "--sigma", "2", "--j", "1", "--k", "0",
                     "--l", "1", "--out", out])
    assert code == 2
    assert "missing parameter" in capsys.readouterr().err


def test_version_flag(capsys):
    assert dispatch(["--version"]) == 0
    assert "rotabouss" in capsys.readouterr().out
