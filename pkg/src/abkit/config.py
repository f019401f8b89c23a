"""Run configuration: INI-style file with strict keys and unit-tagged values.

Grammar (parsed with :mod:`configparser`, ``#`` and ``;`` start comments)::

    [run]          experiment, scenario, gauge, mode, seed
    [parameters]   name = <number> [unit]
    [output]       format = csv|json, path
    [tolerances]   quadrature, ode, overlap and per-check verify thresholds
    [sweep]        base, parameter, start, stop, count, scale = linear|log, quantity

Every key is checked against the tables below before anything is computed;
errors carry the 1-based line and column of the offending text.
"""

from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass, field

from .errors import ConfigError, InvalidInputError
from .units import CGS, MKS, UNIT_SUFFIXES, to_system

EXPERIMENTS = ("magnetic", "electric", "visibility", "verify", "sweep")
SCENARIOS = ("fixed", "split", "free")

# parameter name -> (quantity, default value in the experiment's unit system or None)
MAGNETIC_PARAMS = {
    "a": ("length", 1.0),
    "R": ("length", 10.0),
    "L": ("length", 100.0),
    "L_over_R": ("dimensionless", None),
    "v0": ("velocity", 1.0),
    "u": ("velocity", 100.0),
    "N_e": ("dimensionless", None),
    "target_phase": ("dimensionless", math.pi),
    "n_a": ("dimensionless", 64),
    "n_L": ("dimensionless", 64),
}
VISIBILITY_PARAMS = {
    "a": ("length", 1.0),
    "R": ("length", 10.0),
    "L": ("length", 100.0),
    "v0": ("velocity", 1.0),
    "u": ("velocity", 100.0),
    "target_phase": ("dimensionless", math.pi),
    "margin": ("dimensionless", 1e-3),
}
ELECTRIC_PARAMS = {
    "sigma_s": ("surface_charge", 1e-6),
    "area": ("area", 1e-2),
    "D": ("length", 1e-3),
    "M": ("mass", 1.0),
    "e": ("charge", MKS.e_charge),
    "T": ("time", 1e-9),
    "v0": ("velocity", 1e-3),
    "fraction": ("dimensionless", 0.5),
    "ramp_time": ("time", 0.0),
    "hbar": ("dimensionless", MKS.hbar),
    "epsilon0": ("dimensionless", 8.8541878128e-12),
}
PARAMETER_TABLES = {
    "magnetic": (MAGNETIC_PARAMS, CGS),
    "visibility": (VISIBILITY_PARAMS, CGS),
    "electric": (ELECTRIC_PARAMS, MKS),
    "verify": ({}, CGS),
}
SECTION_KEYS = {
    "run": {"experiment", "scenario", "gauge", "mode", "seed"},
    "parameters": None,
    "output": {"format", "path"},
    "tolerances": {"quadrature", "ode", "overlap", "reduction_identity", "gauge_independence", "reciprocity",
                   "attribution", "oracle_overlap", "oracle_phase"},
    "sweep": {"base", "parameter", "start", "stop", "count", "scale", "quantity"},
}
VERIFY_DEFAULTS = {
    "reduction_identity": 1e-9,
    "gauge_independence": 5e-3,
    "reciprocity": 1e-8,
    "attribution": 1e-12,
    "oracle_overlap": 1e-3,
    "oracle_phase": 1e-3,
}
_VALUE = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(\S*)\s*$")


@dataclass
class SweepSpec:
    base: str
    parameter: str
    start: float
    stop: float
    count: int
    scale: str = "linear"
    quantity: str | None = None

    def values(self):
        if self.count < 1:
            raise ConfigError("sweep range is empty (count < 1)")
        if self.count == 1:
            return [self.start]
        if self.scale == "log":
            lo, hi = math.log10(self.start), math.log10(self.stop)
            return [10 ** (lo + (hi - lo) * k / (self.count - 1)) for k in range(self.count)]
        return [self.start + (self.stop - self.start) * k / (self.count - 1) for k in range(self.count)]


@dataclass
class RunConfig:
    experiment: str
    parameters: dict
    units: dict = field(default_factory=dict)
    scenario: str = "fixed"
    gauge: str = "lorenz"
    mode: str = "continuum"
    seed: int = 0
    output_format: str = "csv"
    output_path: str | None = None
    tolerances: dict = field(default_factory=dict)
    sweep: SweepSpec | None = None

    @property
    def quadrature_tol(self):
        return self.tolerances.get("quadrature")

    def threshold(self, name):
        return self.tolerances.get(name, VERIFY_DEFAULTS[name])


def _locate(lines, section, key=None):
    """1-based (line, column) of a section header or of a key inside it."""
    current = None
    for n, raw in enumerate(lines, 1):
        stripped = raw.strip()
        if stripped.startswith("[") and stripped.endswith("]"):
            current = stripped[1:-1].strip()
            if key is None and current == section:
                return n, raw.index("[") + 1
            continue
        if key is not None and current == section:
            m = re.match(r"\s*([^=:\s]+)\s*[=:]", raw)
            if m and m.group(1) == key:
                return n, m.start(1) + 1
    return None, None


def _value_column(lines, section, key):
    line, _ = _locate(lines, section, key)
    if line is None:
        return None, None
    raw = lines[line - 1]
    sep = re.search(r"[=:]", raw)
    col = sep.end() + 1 if sep else 1
    while col <= len(raw) and raw[col - 1] == " ":
        col += 1
    return line, col


def parse_quantity(text, quantity, system):
    """'1.5 cm' -> value in ``system``; bare numbers are taken in the system's own units."""
    m = _VALUE.match(text)
    if not m:
        raise InvalidInputError(f"expected '<number> [unit]', got {text!r}")
    value = float(m.group(1))
    unit = m.group(2)
    if not math.isfinite(value):
        raise InvalidInputError("value must be finite")
    if unit == "" or quantity == "dimensionless":
        if unit not in ("", "1", "rad"):
            raise InvalidInputError(f"{quantity} parameter takes no unit, got {unit!r}")
        return value, unit
    if unit not in UNIT_SUFFIXES:
        raise InvalidInputError(f"unknown unit {unit!r}")
    got, converted = to_system(value, unit, system)
    if got != quantity:
        raise InvalidInputError(f"unit {unit!r} is a {got}, expected a {quantity}")
    return converted, unit


def _number(text, kind=float):
    try:
        return kind(text)
    except ValueError:
        raise InvalidInputError(f"expected a number, got {text!r}") from None


def load_config(path, experiment=None, overrides=None):
    """Read and validate a config file; ``experiment`` (the subcommand) takes precedence."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}") from None
    return parse_config(text, experiment, overrides)


def parse_config(text, experiment=None, overrides=None):
    lines = text.splitlines()
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"), strict=True)
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.DuplicateOptionError as exc:
        line, col = _locate(lines, exc.section, exc.option)
        raise ConfigError(f"duplicate key {exc.option!r} in [{exc.section}]", exc.lineno or line, col) from None
    except configparser.DuplicateSectionError as exc:
        raise ConfigError(f"duplicate section [{exc.section}]", exc.lineno, 1) from None
    except configparser.MissingSectionHeaderError as exc:
        raise ConfigError("key outside any section", exc.lineno, 1) from None
    except configparser.ParsingError as exc:
        lineno = exc.errors[0][0] if exc.errors else None
        raise ConfigError("malformed line", lineno, 1) from None

    # strictness first: nothing is computed until every key is known
    for section in parser.sections():
        if section not in SECTION_KEYS:
            line, col = _locate(lines, section)
            raise ConfigError(f"unknown section [{section}]", line, col)
    run = dict(parser["run"]) if parser.has_section("run") else {}
    exp = experiment or run.get("experiment")
    if exp is None:
        raise ConfigError("no experiment given", *_locate(lines, "run"))
    if exp not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {exp!r}", *_value_column(lines, "run", "experiment"))
    if experiment and run.get("experiment") not in (None, experiment):
        raise ConfigError(f"config is for {run['experiment']!r}, not {experiment!r}", *_value_column(lines, "run", "experiment"))

    sweep = None
    table_name = exp
    if exp == "sweep":
        if not parser.has_section("sweep"):
            raise ConfigError("sweep needs a [sweep] section")
        table_name = parser["sweep"].get("base", "magnetic")
        if table_name not in ("magnetic", "electric", "visibility"):
            raise ConfigError(f"cannot sweep {table_name!r}", *_value_column(lines, "sweep", "base"))
    elif parser.has_section("sweep"):
        raise ConfigError("[sweep] is only valid for the sweep experiment", *_locate(lines, "sweep"))
    table, system = PARAMETER_TABLES[table_name]

    for section in parser.sections():
        allowed = set(table) if section == "parameters" else SECTION_KEYS[section]
        for key in parser[section]:
            if key not in allowed:
                raise ConfigError(f"unknown key {key!r} in [{section}]", *_locate(lines, section, key))
            if "\n" in parser[section][key]:
                line, _ = _locate(lines, section, key)
                raise ConfigError("indented continuation lines are not allowed", line + 1 if line else None, 1)

    def checked(section, key, fn):
        try:
            return fn(parser[section][key])
        except InvalidInputError as exc:
            raise ConfigError(f"[{section}] {key}: {exc}", *_value_column(lines, section, key)) from None

    params = {name: default for name, (_, default) in table.items()}
    units = {}
    if parser.has_section("parameters"):
        for key in parser["parameters"]:
            value, unit = checked("parameters", key, lambda s, k=key: parse_quantity(s, table[k][0], system))
            params[key] = value
            units[key] = unit

    def choice(section, key, options, default):
        if not parser.has_section(section) or key not in parser[section]:
            return default
        value = parser[section][key]
        if value not in options:
            raise ConfigError(f"[{section}] {key} must be one of {', '.join(options)}", *_value_column(lines, section, key))
        return value

    scenario = choice("run", "scenario", SCENARIOS, "fixed")
    gauge = choice("run", "gauge", ("lorenz", "coulomb"), "lorenz")
    mode = choice("run", "mode", ("continuum", "discrete"), "continuum")
    seed = checked("run", "seed", lambda s: _number(s, int)) if "seed" in run else 0
    fmt = choice("output", "format", ("csv", "json"), "csv")
    out_path = parser["output"].get("path") if parser.has_section("output") else None

    tolerances = {}
    if parser.has_section("tolerances"):
        for key in parser["tolerances"]:
            value = checked("tolerances", key, _number)
            if not value > 0:
                raise ConfigError(f"[tolerances] {key} must be positive", *_value_column(lines, "tolerances", key))
            tolerances[key] = value

    if exp == "sweep":
        sec = parser["sweep"]
        for required in ("parameter", "start", "stop", "count"):
            if required not in sec:
                raise ConfigError(f"[sweep] needs {required!r}", *_locate(lines, "sweep"))
        name = sec["parameter"]
        if name not in table:
            raise ConfigError(f"cannot sweep unknown parameter {name!r}", *_value_column(lines, "sweep", "parameter"))
        start, _ = checked("sweep", "start", lambda s: parse_quantity(s, table[name][0], system))
        stop, _ = checked("sweep", "stop", lambda s: parse_quantity(s, table[name][0], system))
        count = checked("sweep", "count", lambda s: _number(s, int))
        scale = choice("sweep", "scale", ("linear", "log"), "linear")
        if count < 1:
            raise ConfigError("sweep range is empty (count < 1)", *_value_column(lines, "sweep", "count"))
        if scale == "log" and not (start > 0 and stop > 0):
            raise ConfigError("log sweep needs positive start and stop", *_value_column(lines, "sweep", "start"))
        sweep = SweepSpec(table_name, name, start, stop, count, scale, sec.get("quantity"))

    if table_name == "magnetic" and params.get("L_over_R") is not None and units.get("L") is not None:
        raise ConfigError("give either L or L_over_R, not both", *_locate(lines, "parameters", "L_over_R"))

    cfg = RunConfig(exp, params, units, scenario, gauge, mode, seed, fmt, out_path, tolerances, sweep)
    for key, value in (overrides or {}).items():
        if value is not None:
            setattr(cfg, key, value)
    if cfg.scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario {cfg.scenario!r}")
    return cfg
