"""Command-line front end.

    abkit <magnetic|electric|visibility|verify|sweep> --config PATH
          [--out PATH] [--format csv|json] [--svg PATH] [--scenario fixed|split|free]

Exit status: 0 success, 2 configuration error, 3 numeric or verification
failure, 4 output path not writable.
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

from . import __version__
from .capacitor import (
    CapacitorSpec,
    attribution_split,
    branch_phases_electron,
    fixed_plate_phase_shift,
    free_plate_scenario,
    plate_attributed_phase,
    ramp_correction,
)
from .config import EXPERIMENTS, SCENARIOS, load_config
from .errors import AbkitError, ConfigError, InvalidInputError
from .interference import Gauge
from .report import Row, emit, line_chart, render
from .solenoid import (
    SolenoidSpec,
    ab_phase_from_count,
    ab_phase_reference,
    b_field,
    ring_share_profile,
    solenoid_phase,
    visibility_budget,
)
from .units import CGS
from .verify import run_suite

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_OUTPUT = 0, 2, 3, 4


def _solenoid_spec(p):
    L = p["L_over_R"] * p["R"] if p.get("L_over_R") is not None else p["L"]
    N_e = p.get("N_e")
    if N_e is None:
        N_e = p["target_phase"] / ab_phase_from_count(1.0, CGS.e_charge, CGS.hbar, CGS.c, p["v0"], p["a"], L)
    try:
        return SolenoidSpec.from_electron_count(p["a"], p["R"], L, p["v0"], p["u"], N_e,
                                                n_a=int(p["n_a"]), n_L=int(p["n_L"]))
    except InvalidInputError as exc:
        raise ConfigError(str(exc)) from None


def run_magnetic(params, cfg):
    spec = _solenoid_spec(params)
    gauge = Gauge(cfg.gauge)
    tol = cfg.quadrature_tol
    ab = ab_phase_reference(spec)
    rows = [
        Row("L", spec.L, "cm"),
        Row("N_e", spec.N_e, ""),
        Row("B0", b_field(spec), "G"),
        Row("ab_phase", ab, "rad"),
    ]
    parts = {}
    for traverse in ("A", "B"):
        for sign, label in ((1, "positive"), (-1, "negative")):
            r = solenoid_phase(spec, traverse, gauge, cfg.mode, sign, tol=tol)
            parts[(traverse, sign)] = r
            rows.append(Row(f"phase_{traverse}_{label}", r.value, "rad", r.error_estimate))
    shift = sum(parts[("A", s)].value - parts[("B", s)].value for s in (1, -1))
    shift_err = sum(r.error_estimate for r in parts.values())
    rows.append(Row("total_shift", shift, "rad", shift_err))
    rows.append(Row("quarter_ratio", parts[("A", 1)].value / (0.25 * ab), "", parts[("A", 1)].error_estimate / (0.25 * ab)))
    if cfg.mode == "continuum":
        ext = [solenoid_phase(spec, t, gauge, "continuum", None, extrapolate=True, tol=tol) for t in ("A", "B")]
        rows.append(Row("total_shift_extrapolated", ext[0].value - ext[1].value, "rad",
                        ext[0].error_estimate + ext[1].error_estimate))
    budget = visibility_budget(ab, {"a": spec.a, "R": spec.R, "L": spec.L, "v0": spec.v0, "u": spec.u})
    rows.append(Row("position_exponent", budget.position_exponent, ""))
    rows.append(Row("momentum_exponent", budget.momentum_exponent, ""))
    rows.append(Row("visibility", budget.visibility, ""))
    return rows


def run_visibility(params, cfg):
    geometry = {k: params[k] for k in ("a", "R", "L", "v0", "u")}
    try:
        b = visibility_budget(params["target_phase"], geometry, margin=params["margin"])
    except InvalidInputError as exc:
        raise ConfigError(str(exc)) from None
    fp = b.first_principles
    return [
        Row("N_e", b.N_e, ""),
        Row("bound", b.bound, ""),
        Row("n_a", float(b.n_a) if b.n_a is not None else math.nan, ""),
        Row("sigma", b.sigma, "cm"),
        Row("n_L", b.n_L, ""),
        Row("n_e", b.n_e, ""),
        Row("piece_mass", b.piece_mass, "g"),
        Row("wavelength", b.wavelength, "cm"),
        Row("wavelengths_per_packet", b.wavelengths_per_packet, ""),
        Row("n_p", b.n_p, ""),
        Row("T", b.T, "s"),
        Row("displacement", b.displacement, "cm"),
        Row("delta_v", b.delta_v, "cm/s"),
        Row("position_exponent", b.position_exponent, ""),
        Row("momentum_exponent", b.momentum_exponent, ""),
        Row("visibility", b.visibility, ""),
        Row("per_piece_position_exponent", fp.get("position_exponent", 0.0), ""),
        Row("per_piece_momentum_exponent", fp.get("momentum_exponent", 0.0), ""),
    ]


def _capacitor_spec(p):
    try:
        return CapacitorSpec(sigma_s=p["sigma_s"], area=p["area"], D=p["D"], M=p["M"], e=p["e"], T=p["T"],
                             v0=p["v0"], hbar=p["hbar"], epsilon0=p["epsilon0"])
    except InvalidInputError as exc:
        raise ConfigError(str(exc)) from None


def run_electric(params, cfg):
    spec = _capacitor_spec(params)
    tol = cfg.quadrature_tol
    rows = []
    if cfg.scenario == "fixed":
        rows.append(Row("phase_shift", fixed_plate_phase_shift(spec), "rad"))
        for label, value in branch_phases_electron(spec, tol).items():
            rows.append(Row(f"electron_branch_{'plus' if label == '+' else 'minus'}", value, "rad"))
        ledger = plate_attributed_phase(spec, tol)
        for (plate, label), value in ledger.contributions.items():
            rows.append(Row(f"plate_{plate}_{'plus' if label == '+' else 'minus'}", value, "rad"))
        rows.append(Row("plate_total", ledger.total, "rad"))
        rows.append(Row("displacement_ratio", ledger.displacement_ratio, ""))
        if params["ramp_time"] > 0:
            rows.append(Row("ramp_correction", ramp_correction(spec, params["ramp_time"]), "rad"))
    elif cfg.scenario == "split":
        s = attribution_split(spec, params["fraction"], tol)
        rows += [
            Row("electron_fraction", s.electron_fraction, ""),
            Row("electron_phase", s.electron, "rad"),
            Row("upper_plate_phase", s.upper_plate, "rad"),
            Row("lower_plate_phase", s.lower_plate, "rad"),
            Row("total", s.total, "rad"),
        ]
    else:
        try:
            r = free_plate_scenario(spec, True, tol)
        except InvalidInputError as exc:
            raise ConfigError(str(exc)) from None
        approx = free_plate_scenario(spec, False, tol)
        rows += [
            Row("T_plus", r.T_plus, "s"),
            Row("T_minus", r.T_minus, "s"),
            Row("D_plus", r.D_plus, "m"),
            Row("D_minus", r.D_minus, "m"),
            Row("phase_shift", r.phase_shift, "rad", abs(r.phase_shift - r.details["numeric_phase_shift"])),
            Row("electron_field_term", r.electron_field_term, "rad"),
            Row("self_energy_term", r.self_energy_term, "rad"),
            Row("phase_shift_leading_order", approx.phase_shift, "rad"),
            Row("work_integral", r.work_integral, "rad", abs(r.work_integral - r.potential_integral)),
            Row("potential_integral", r.potential_integral, "rad"),
        ]
    return rows


def run_verify(params, cfg, report=None):
    thresholds = {name: cfg.threshold(name) for name in
                  ("reduction_identity", "gauge_independence", "reciprocity", "attribution", "oracle_overlap", "oracle_phase")}
    results = run_suite(thresholds, cfg.seed, cfg.quadrature_tol)
    rows = []
    for r in results:
        print(r.line(), file=report or sys.stderr)
        rows.append(Row(r.name, r.measured, "", r.threshold, {"status": "pass" if r.passed else "fail"}))
    return rows, [r.name for r in results if not r.passed]


RUNNERS = {"magnetic": run_magnetic, "electric": run_electric, "visibility": run_visibility}


def _sweep_point(args):
    base, params, cfg, name, value = args
    params = dict(params)
    params[name] = value
    return value, RUNNERS[base](params, cfg)


def run_sweep(cfg, workers=None):
    sw = cfg.sweep
    values = sw.values()
    jobs = [(sw.base, cfg.parameters, cfg, sw.parameter, v) for v in values]
    if len(jobs) > 1 and workers != 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_point, jobs))
    else:
        results = [_sweep_point(j) for j in jobs]
    results.sort(key=lambda item: item[0])
    rows = []
    for value, point_rows in results:
        for r in point_rows:
            if sw.quantity and r.quantity != sw.quantity:
                continue
            rows.append(replace(r, extra={**r.extra, sw.parameter: value}))
    if sw.quantity and not rows:
        raise ConfigError(f"sweep quantity {sw.quantity!r} is not produced by {sw.base}")
    return rows


def _figure(cfg, rows, path):
    if cfg.experiment == "sweep":
        q = cfg.sweep.quantity or rows[0].quantity
        pts = [(r.extra[cfg.sweep.parameter], r.value) for r in rows if r.quantity == q]
        line_chart(path, [p[0] for p in pts], [p[1] for p in pts], cfg.sweep.parameter, q, logx=cfg.sweep.scale == "log")
    elif cfg.experiment == "magnetic":
        spec = _solenoid_spec(cfg.parameters)
        z, share = ring_share_profile(spec, 201, cfg.quadrature_tol)
        line_chart(path, z, share, "ring height z (cm)", "share of phase per ring")
    else:
        raise ConfigError(f"no figure is defined for {cfg.experiment!r}")


def build_parser():
    p = argparse.ArgumentParser(prog="abkit", description="Phase-shift calculations for charged sources and an orbiting electron.")
    p.add_argument("--version", action="version", version=f"abkit {__version__}")
    p.add_argument("experiment", choices=EXPERIMENTS)
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--svg")
    p.add_argument("--scenario", choices=SCENARIOS)
    p.add_argument("--workers", type=int, help="processes for sweeps (default: CPU count)")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    err = sys.stderr
    try:
        cfg = load_config(args.config, args.experiment,
                          {"output_format": args.format, "output_path": args.out, "scenario": args.scenario})
    except ConfigError as exc:
        print(f"abkit: config error: {exc}", file=err)
        return EXIT_CONFIG

    stage = cfg.experiment
    try:
        failed = []
        if cfg.experiment == "sweep":
            rows = run_sweep(cfg, args.workers)
        elif cfg.experiment == "verify":
            rows, failed = run_verify(cfg.parameters, cfg)
        else:
            rows = RUNNERS[cfg.experiment](cfg.parameters, cfg)
        text = render(rows, cfg.output_format)
    except ConfigError as exc:
        print(f"abkit: config error: {exc}", file=err)
        return EXIT_CONFIG
    except AbkitError as exc:
        print(f"abkit: {stage} failed: {type(exc).__name__}: {exc}", file=err)
        return EXIT_NUMERIC

    try:
        if cfg.output_path:
            emit(rows, cfg.output_format, cfg.output_path)
        else:
            sys.stdout.write(text)
        if args.svg:
            stage = "figure"
            _figure(cfg, rows, args.svg)
    except ConfigError as exc:
        print(f"abkit: config error: {exc}", file=err)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"abkit: cannot write output: {exc}", file=err)
        return EXIT_OUTPUT

    if failed:
        print(f"abkit: verification failed: {', '.join(failed)}", file=err)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
