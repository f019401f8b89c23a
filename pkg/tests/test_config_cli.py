import json
import math
import textwrap

import pytest

from abkit.cli import main, run_sweep
from abkit.config import load_config, parse_config, parse_quantity
from abkit.errors import ConfigError, InvalidInputError
from abkit.report import rows_from_json
from abkit.units import CGS, MKS


def write(tmp_path, text, name="run.ini"):
    path = tmp_path / name
    path.write_text(textwrap.dedent(text))
    return str(path)


def rows_by_name(path):
    with open(path) as fh:
        return {r.quantity: r for r in rows_from_json(fh.read())}


def test_parse_quantity():
    assert parse_quantity("2.5 cm", "length", MKS) == (pytest.approx(0.025), "cm")
    assert parse_quantity("2.5", "length", CGS) == (2.5, "")
    assert parse_quantity("1e-6 C/m2", "surface_charge", MKS)[0] == pytest.approx(1e-6)
    for bad, quantity in (("3 kg", "length"), ("abc", "length"), ("1 parsec", "length"), ("2 cm", "dimensionless")):
        with pytest.raises(InvalidInputError):
            parse_quantity(bad, quantity, CGS)


def test_config_defaults_and_units():
    cfg = parse_config("[run]\nexperiment = magnetic\n[parameters]\nL = 2 m\n")
    assert cfg.parameters["L"] == pytest.approx(200.0)
    assert cfg.parameters["a"] == 1.0
    assert cfg.output_format == "csv" and cfg.quadrature_tol is None
    assert cfg.threshold("attribution") == 1e-12


@pytest.mark.parametrize("text, line, column", [
    ("[run]\nexperiment = magnetic\n[parameters]\nwidth = 3 cm\n", 4, 1),
    ("[run]\nexperiment = magnetic\n[parameters]\n  a = 3 parsec\n", 4, None),
    ("[run]\nexperiment = magnetic\n[params]\n", 3, 1),
    ("[run]\nexperiment = magnetic\ncolour = red\n", 3, 1),
    ("[run]\nexperiment = magnetic\n[parameters]\na = 1 cm\n  R = 2 cm\n", 5, 1),
    ("[run]\nexperiment = magnetic\n[parameters]\na = 1 cm\na = 2 cm\n", 5, None),
    ("a = 1\n", 1, 1),
    ("[run]\nexperiment = teleport\n", 2, 14),
    ("[run]\nexperiment = electric\n[tolerances]\nquadrature = -1\n", 4, 14),
])
def test_config_errors_carry_position(text, line, column):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert info.value.line == line
    if column is not None:
        assert info.value.column == column
    assert f"line {line}" in str(info.value)


def test_bad_unit_column():
    text = "[run]\nexperiment = magnetic\n[parameters]\nR = 10 parsec\n"
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert (info.value.line, info.value.column) == (4, 5)


def test_sweep_spec_validation():
    base = "[run]\nexperiment = sweep\n[sweep]\nparameter = L_over_R\nstart = 10\nstop = 1000\nscale = log\n"
    cfg = parse_config(base + "count = 3\n")
    assert cfg.sweep.values() == pytest.approx([10.0, 100.0, 1000.0])
    with pytest.raises(ConfigError):
        parse_config(base + "count = 0\n")
    with pytest.raises(ConfigError):
        parse_config(base.replace("start = 10", "start = -1") + "count = 3\n")
    with pytest.raises(ConfigError):
        parse_config("[run]\nexperiment = magnetic\n[sweep]\nparameter = a\n")
    with pytest.raises(ConfigError):
        parse_config("[run]\nexperiment = sweep\n[sweep]\nparameter = colour\nstart = 1\nstop = 2\ncount = 2\n")


def test_magnetic_defaults(tmp_path, capsys):
    cfg = write(tmp_path, "[run]\nexperiment = magnetic\n")
    out = tmp_path / "mag.json"
    assert main(["magnetic", "--config", cfg, "--out", str(out), "--format", "json"]) == 0
    rows = rows_by_name(out)
    assert rows["ab_phase"].value == pytest.approx(math.pi, rel=1e-12)
    assert rows["visibility"].value >= 1 - 1e-8
    assert rows["total_shift_extrapolated"].value == pytest.approx(math.pi, rel=1e-6)
    assert rows["quarter_ratio"].value == pytest.approx(1.0, abs=0.02)


def test_single_row_csv_schema(tmp_path, capsys):
    cfg = write(tmp_path, "[run]\nexperiment = electric\nscenario = split\n[parameters]\nfraction = 0.37\n")
    assert main(["electric", "--config", cfg]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "quantity,value,units,error_estimate"
    assert len(lines) == 6


def test_electric_fixed_scenario(tmp_path):
    cfg = write(tmp_path, """\
        [run]
        experiment = electric
        [parameters]
        sigma_s = 2
        area = 50
        D = 0.3
        M = 1e6
        e = 0.01
        T = 1.7
        hbar = 1
        epsilon0 = 1
        """)
    out = tmp_path / "e.json"
    assert main(["electric", "--config", cfg, "--scenario", "fixed", "--out", str(out), "--format", "json"]) == 0
    rows = rows_by_name(out)
    total = -0.01 * 2 * 0.3 * 1.7
    assert rows["phase_shift"].value == pytest.approx(total, rel=1e-12)
    for plate in ("upper", "lower"):
        for branch in ("plus", "minus"):
            assert rows[f"plate_{plate}_{branch}"].value == pytest.approx(total / 4, rel=1e-12)


def test_electric_free_scenario(tmp_path):
    cfg = write(tmp_path, "[run]\nexperiment = electric\nscenario = free\n[parameters]\nv0 = 1 mm/s\n".replace("1 mm/s", "0.001 m/s"))
    out = tmp_path / "free.json"
    assert main(["electric", "--config", cfg, "--out", str(out), "--format", "json"]) == 0
    rows = rows_by_name(out)
    assert rows["T_plus"].value < rows["T_minus"].value
    assert rows["phase_shift"].value > 0


def test_visibility_experiment(tmp_path, capsys):
    cfg = write(tmp_path, "[run]\nexperiment = visibility\n")
    assert main(["visibility", "--config", cfg, "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    values = {r["quantity"]: r["value"] for r in payload["rows"]}
    assert values["n_a"] == 1000.0
    assert values["visibility"] >= 1 - 1e-7


SWEEP = """\
    [run]
    experiment = sweep
    [sweep]
    base = magnetic
    parameter = L_over_R
    start = 10
    stop = 1000
    count = 7
    scale = log
    quantity = quarter_ratio
    """


def test_sweep_rows_converge(tmp_path):
    cfg = load_config(write(tmp_path, SWEEP))
    rows = run_sweep(cfg, workers=1)
    assert len(rows) == 7
    xs = [r.extra["L_over_R"] for r in rows]
    assert xs == sorted(xs)
    gaps = [abs(r.value - 1.0) for r in rows]
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-5


def test_sweep_parallel_matches_serial_and_draws_svg(tmp_path):
    path = write(tmp_path, SWEEP)
    serial, parallel = tmp_path / "s.csv", tmp_path / "p.csv"
    svg = tmp_path / "sweep.svg"
    assert main(["sweep", "--config", path, "--out", str(serial), "--workers", "1"]) == 0
    assert main(["sweep", "--config", path, "--out", str(parallel), "--workers", "3", "--svg", str(svg)]) == 0
    assert serial.read_bytes() == parallel.read_bytes()
    assert "<svg" in svg.read_text()


def test_runs_are_byte_identical(tmp_path):
    cfg = write(tmp_path, "[run]\nexperiment = magnetic\n[parameters]\nL_over_R = 30\n")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["magnetic", "--config", cfg, "--out", str(a)]) == 0
    assert main(["magnetic", "--config", cfg, "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_empty_sweep_exits_2_without_output(tmp_path, capsys):
    cfg = write(tmp_path, SWEEP.replace("count = 7", "count = 0"))
    out = tmp_path / "none.csv"
    assert main(["sweep", "--config", cfg, "--out", str(out)]) == 2
    assert not out.exists()
    assert "line 8" in capsys.readouterr().err


def test_config_error_exit_code(tmp_path, capsys):
    cfg = write(tmp_path, "[run]\nexperiment = magnetic\n[parameters]\nR = 10 parsec\n")
    assert main(["magnetic", "--config", cfg]) == 2
    assert "line 4, column 5" in capsys.readouterr().err
    assert main(["magnetic", "--config", str(tmp_path / "absent.ini")]) == 2


def test_experiment_mismatch_rejected(tmp_path):
    cfg = write(tmp_path, "[run]\nexperiment = electric\n")
    assert main(["magnetic", "--config", cfg]) == 2


def test_unwritable_output_exit_4(tmp_path):
    cfg = write(tmp_path, "[run]\nexperiment = visibility\n")
    assert main(["visibility", "--config", cfg, "--out", str(tmp_path / "no" / "such" / "dir.csv")]) == 4


def test_numeric_failure_exit_3(tmp_path, capsys):
    cfg = write(tmp_path, "[run]\nexperiment = electric\n[parameters]\nM = 1e-30 kg\nT = 1 s\n")
    assert main(["electric", "--config", cfg]) == 3
    assert "RegimeError" in capsys.readouterr().err


@pytest.mark.slow
def test_verify_passes_and_reports(tmp_path, capsys):
    cfg = write(tmp_path, "[run]\nexperiment = verify\n")
    out = tmp_path / "v.csv"
    assert main(["verify", "--config", cfg, "--out", str(out)]) == 0
    err = capsys.readouterr().err
    for name in ("reduction_identity", "gauge_independence", "reciprocity", "attribution", "oracle_overlap", "oracle_phase"):
        assert f"PASS {name}" in err
    assert out.read_text().count("pass") == 6


@pytest.mark.slow
def test_verify_failure_exit_3(tmp_path, capsys):
    cfg = write(tmp_path, "[run]\nexperiment = verify\n[tolerances]\nattribution = 1e-300\n")
    assert main(["verify", "--config", cfg]) == 3
    err = capsys.readouterr().err
    assert "FAIL attribution" in err and "verification failed: attribution" in err
