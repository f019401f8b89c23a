"""Semiclassical Gaussian packets and their accumulated phase.

A packet keeps a fixed width and rides on a classical trajectory; its phase
is kept as a ledger of separately computed terms (local, kinetic, potential)
so interference code can difference like terms.  hbar = 1 throughout.

Two phase forms exist.  The *general* form integrates p_cl^2/2m and the
potential along the classical path.  The *time-only* form, valid when the
force has no x dependence, uses p_cl(T)^2 T/2m plus a q v0 W(T) correction
and the potential on the unperturbed straight line.  They agree to first
order in q; ``check_reduction_identity`` measures the gap and the exact
second-order remainder.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import TimeDepSolution
from .errors import InvalidInputError, RegimeError
from .quadrature import adaptive_quad, default_tol
from .units import DEFAULT_TOL_SPREAD, DEFAULT_TOL_WAVELENGTH, NATURAL, PacketRegime, check_regime


@dataclass(frozen=True)
class PhaseLedger:
    """Separately accumulated pieces of a packet's phase (radians, unwrapped).

    ``kinetic`` and ``potential`` are the general-form integrals; the
    ``timedep_*`` fields hold the time-only-force decomposition and are None
    for packets built from a general trajectory.
    """

    p_final: float
    x_final: float
    kinetic: float
    potential: float
    timedep_kinetic: float | None = None
    timedep_potential: float | None = None
    timedep_w_term: float | None = None
    quantum_potential_bound: float = 0.0
    dropped_quadratic: float = 0.0

    def local(self, x):
        return self.p_final * (np.asarray(x) - self.x_final)

    def total(self, x):
        """General-form phase at position x."""
        return self.local(x) + self.kinetic + self.potential

    def timedep_total(self, x):
        """Time-only-force form of the phase at position x."""
        if self.timedep_kinetic is None:
            raise InvalidInputError("ledger has no time-only decomposition")
        return self.local(x) + self.timedep_kinetic + self.timedep_potential + self.timedep_w_term

    def shifted(self, potential_shift):
        """Copy with an extra constant added to the potential terms."""
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        d["potential"] += potential_shift
        if d["timedep_potential"] is not None:
            d["timedep_potential"] += potential_shift
        return PhaseLedger(**d)


@dataclass(frozen=True)
class GaussianPacket:
    sigma: float
    x_center: float
    p_mean: float
    ledger: PhaseLedger
    normalized: bool = True
    form: str = "general"

    def __post_init__(self):
        if not self.sigma > 0:
            raise InvalidInputError("sigma must be positive")
        if self.form not in ("general", "timedep"):
            raise InvalidInputError(f"unknown phase form {self.form!r}")

    def phase(self, x):
        if self.form == "timedep":
            return self.ledger.timedep_total(x)
        return self.ledger.total(x)

    def amplitude(self, x):
        x = np.asarray(x, dtype=float)
        norm = (2.0 * math.pi * self.sigma**2) ** -0.25 if self.normalized else 1.0
        return norm * np.exp(-((x - self.x_center) ** 2) / (4.0 * self.sigma**2) + 1j * self.phase(x))

    def norm(self):
        """Analytic integral of |psi|^2."""
        if self.normalized:
            return 1.0
        return math.sqrt(2.0 * math.pi) * self.sigma


def _regime_or_raise(m, v0, sigma, T, tol_wavelength, tol_spread):
    if v0 == 0:
        raise RegimeError("packet at rest has no well-defined wavelength")
    report = check_regime(PacketRegime(sigma, m, abs(v0), T), tol_wavelength, tol_spread, NATURAL)
    if not report.passed:
        raise RegimeError("packet regime violated: " + "; ".join(report.failures()), report)
    return report


def evolve_packet_timedep(spec, sigma, T, tol=None, tol_wavelength=DEFAULT_TOL_WAVELENGTH,
                          tol_spread=DEFAULT_TOL_SPREAD, check=True):
    """Packet after time T under forces with no spatial dependence.

    The returned packet uses the time-only form for its phase; the ledger
    also carries the general-form integrals for comparison.
    """
    if check:
        _regime_or_raise(spec.m, spec.v0, sigma, T, tol_wavelength, tol_spread)
    tol = default_tol() if tol is None else tol
    sol = TimeDepSolution(spec, T, tol)
    q, m = spec.q, spec.m
    x_T = float(sol.position(T))
    p_T = float(sol.momentum(T))

    kinetic = adaptive_quad(lambda t: sol.momentum(t) ** 2 / (2 * m), 0.0, T, tol).value
    potential = -q * adaptive_quad(lambda t: spec.potential(sol.position(t), t), 0.0, T, tol, tol_abs=1e-300).value
    straight = -q * adaptive_quad(lambda t: spec.potential(spec.x0 + spec.v0 * t, t), 0.0, T, tol, tol_abs=1e-300).value
    w_term = q * spec.v0 * sol.W(T)
    dropped = q**2 / (2 * m * spec.c**2) * adaptive_quad(lambda t: spec.A(t) ** 2, 0.0, T, tol, tol_abs=1e-300).value

    ledger = PhaseLedger(
        p_final=p_T,
        x_final=x_T,
        kinetic=kinetic,
        potential=potential,
        timedep_kinetic=p_T**2 * T / (2 * m),
        timedep_potential=straight,
        timedep_w_term=w_term,
        quantum_potential_bound=T / (8 * m * sigma**2),
        dropped_quadratic=dropped,
    )
    return GaussianPacket(sigma, x_T, p_T, ledger, True, "timedep")


def general_ledger(traj, spec, T, sigma=None, tol=None):
    """Phase ledger for a packet following ``traj`` in ``spec``'s potentials."""
    if not traj.covers(0.0, T):
        raise InvalidInputError("trajectory does not span [0, T]")
    tol = default_tol() if tol is None else tol
    q, m, c = spec.q, spec.m, spec.c
    kinetic = adaptive_quad(lambda t: traj.momentum(t) ** 2 / (2 * m), 0.0, T, tol).value
    potential = -q * adaptive_quad(
        lambda t: spec.scalar_potential(traj.position(t), t), 0.0, T, tol, tol_abs=1e-300
    ).value
    dropped = q**2 / (2 * m * c**2) * adaptive_quad(
        lambda t: spec.A_value(traj.position(t), t) ** 2, 0.0, T, tol, tol_abs=1e-300
    ).value
    bound = T / (8 * m * sigma**2) if sigma else 0.0
    return PhaseLedger(
        p_final=float(traj.momentum(T)),
        x_final=float(traj.position(T)),
        kinetic=kinetic,
        potential=potential,
        quantum_potential_bound=bound,
        dropped_quadratic=dropped,
    )


def phase_general(traj, spec, x, T, tol=None):
    """Local + kinetic + potential phase at position x and time T."""
    return float(general_ledger(traj, spec, T, tol=tol).total(x))


def packet_from_trajectory(traj, spec, sigma, T, tol=None):
    ledger = general_ledger(traj, spec, T, sigma, tol)
    return GaussianPacket(sigma, ledger.x_final, ledger.p_final, ledger, True, "general")


@dataclass(frozen=True)
class IdentityReport:
    """Two routes to the same quantity and how far apart they landed."""

    lhs: float
    rhs: float
    details: dict = field(default_factory=dict)

    @property
    def abs_diff(self):
        return abs(self.lhs - self.rhs)

    @property
    def rel_diff(self):
        scale = max(abs(self.lhs), abs(self.rhs))
        return self.abs_diff / scale if scale else 0.0

    def holds(self, rtol, atol=0.0):
        return self.abs_diff <= max(rtol * max(abs(self.lhs), abs(self.rhs)), atol)


def check_reduction_identity(spec, sigma, T, tol=None, check=True):
    """Compare the general phase form with the time-only form at x = x_cl(T).

    ``lhs`` is the general form, ``rhs`` the time-only form.  The two differ
    only at second order in q; ``details['second_order_remainder']`` is that
    difference computed in closed form from U, W and the trajectory, so
    ``lhs - rhs - remainder`` should vanish to quadrature accuracy.
    """
    packet = evolve_packet_timedep(spec, sigma, T, tol, check=check)
    led = packet.ledger
    tol = default_tol() if tol is None else tol
    sol = TimeDepSolution(spec, T, tol)
    q, m = spec.q, spec.m
    U_T = sol.U(T)
    W_T = sol.W(T)
    int_U2 = adaptive_quad(lambda t: sol.U(t) ** 2, 0.0, T, tol, tol_abs=1e-300).value
    kinetic_remainder = q**2 / (2 * m) * (int_U2 - U_T**2 * T) + q * W_T * (spec.p0 / m - spec.v0)
    potential_remainder = led.potential - led.timedep_potential
    lhs = led.kinetic + led.potential
    rhs = led.timedep_kinetic + led.timedep_potential + led.timedep_w_term
    details = {
        "kinetic_quadrature": led.kinetic,
        "kinetic_rearranged": led.timedep_kinetic + led.timedep_w_term + kinetic_remainder,
        "second_order_remainder": kinetic_remainder + potential_remainder,
        "residual_after_remainder": lhs - rhs - (kinetic_remainder + potential_remainder),
        "W_T": W_T,
        "U_T": U_T,
    }
    return IdentityReport(lhs, rhs, details)
