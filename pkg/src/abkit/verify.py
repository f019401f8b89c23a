"""Identity suite behind ``abkit verify``: each check returns a measured discrepancy and a threshold."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .capacitor import CapacitorSpec, attribution_split, fixed_plate_phase_shift
from .interference import Gauge
from .packet import check_reduction_identity, evolve_packet_timedep
from .propagator import packet_oracle_comparison
from .samples import random_timedep_spec
from .solenoid import SolenoidSpec, electron_in_solenoid_phase, solenoid_phase


@dataclass
class CheckResult:
    name: str
    measured: float
    threshold: float
    comparison: str = "<="

    @property
    def passed(self):
        if not math.isfinite(self.measured):
            return False
        if self.comparison == ">=":
            return self.measured >= self.threshold
        return self.measured <= self.threshold

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.measured!r} {self.comparison} {self.threshold!r}"


def _solenoid(L_over_R=100.0):
    return SolenoidSpec.from_electron_count(1.0, 10.0, 10.0 * L_over_R, 1.0, 100.0, 1.0e14 * L_over_R / 10.0)


def check_reduction(threshold, seed=0, count=5, tol=None):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(count):
        spec = random_timedep_spec(rng, charge_range=(1e-3, 1e-2))
        report = check_reduction_identity(spec, 1.0, float(rng.uniform(0.2, 0.5)), tol)
        worst = max(worst, report.rel_diff)
    return CheckResult("reduction_identity", worst, threshold)


def check_gauge(threshold, tol=None):
    spec = _solenoid()
    lor = solenoid_phase(spec, "A", Gauge.LORENZ, sign=None, tol=tol).value
    cou = solenoid_phase(spec, "A", Gauge.COULOMB, sign=None, tol=tol).value
    return CheckResult("gauge_independence", abs(cou - lor) / abs(lor), threshold)


def check_reciprocity(threshold, tol=None):
    spec = _solenoid()
    sources = solenoid_phase(spec, "A", Gauge.LORENZ, sign=None, tol=tol).value
    electron = electron_in_solenoid_phase(spec, "A", tol=tol)
    return CheckResult("reciprocity", abs(sources - electron) / abs(electron), threshold)


def check_attribution(threshold, tol=None):
    spec = CapacitorSpec(sigma_s=2.0, area=50.0, D=0.3, M=1e6, e=0.01, T=1.7)
    ref = fixed_plate_phase_shift(spec)
    worst = max(abs(attribution_split(spec, f, tol).total - ref) / abs(ref) for f in np.linspace(0.0, 1.0, 11))
    return CheckResult("attribution", worst, threshold)


def check_oracle(overlap_threshold, phase_threshold, seed=0, tol=None):
    rng = np.random.default_rng(seed)
    spec = random_timedep_spec(rng)
    T = float(rng.uniform(0.2, 0.5))
    packet = evolve_packet_timedep(spec, 1.0, T, tol)
    magnitude, phase = packet_oracle_comparison(spec, packet, T, n=2**13, steps=400)
    return [
        CheckResult("oracle_overlap", 1.0 - magnitude, overlap_threshold),
        CheckResult("oracle_phase", abs(phase), phase_threshold),
    ]


def run_suite(thresholds, seed=0, tol=None):
    """All checks in a fixed order.  ``thresholds`` maps check name to limit."""
    results = [
        check_reduction(thresholds["reduction_identity"], seed, tol=tol),
        check_gauge(thresholds["gauge_independence"], tol),
        check_reciprocity(thresholds["reciprocity"], tol),
        check_attribution(thresholds["attribution"], tol),
    ]
    results.extend(check_oracle(thresholds["oracle_overlap"], thresholds["oracle_phase"], seed, tol))
    return results

