"""Overlaps, interaction phases and two-outcome detection probabilities.

One "electron" interacts with any number of source particles; sources do
not interact with each other.  Every particle follows a prescribed 3D path
and the interaction is the instantaneous Coulomb term plus a velocity-velocity
term built from a gauge dyad.  Operators never appear: all quantities are
classical values, where Hermitian symmetrisation is the identity.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import InvalidInputError, SingularityError, UnsupportedConfigurationError
from .packet import IdentityReport
from .quadrature import adaptive_quad, default_tol


class Gauge(enum.Enum):
    LORENZ = "lorenz"
    COULOMB = "coulomb"


@dataclass(frozen=True)
class GaugeDyad:
    """Two-body velocity coupling tensor.

    Lorenz: 1/r times the identity.  Coulomb (Darwin): half of 1/r identity
    plus r r / r^3.
    """

    gauge: Gauge

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        dist = float(np.linalg.norm(r))
        if dist == 0.0:
            raise SingularityError("dyad evaluated at zero separation")
        eye = np.eye(3) / dist
        if self.gauge is Gauge.LORENZ:
            return eye
        return 0.5 * (eye + np.outer(r, r) / dist**3)

    def contract(self, r, w):
        """D(r) . w for stacks of separation vectors r and vectors w (..., 3)."""
        r = np.asarray(r, dtype=float)
        w = np.asarray(w, dtype=float)
        dist = np.linalg.norm(r, axis=-1)
        out = w / dist[..., None]
        if self.gauge is Gauge.COULOMB:
            rw = np.sum(r * w, axis=-1)
            out = 0.5 * (out + r * (rw / dist**3)[..., None])
        return out


@dataclass(frozen=True)
class CircularPath:
    """Uniform motion on a circle of given radius about the z axis."""

    radius: float
    angle0: float
    angular_speed: float
    z: float = 0.0

    def angle(self, t):
        return self.angle0 + self.angular_speed * np.asarray(t, dtype=float)

    def position(self, t):
        phi = self.angle(t)
        return np.stack([self.radius * np.cos(phi), self.radius * np.sin(phi), np.full_like(phi, self.z)], axis=-1)

    def velocity(self, t):
        phi = self.angle(t)
        s = self.radius * self.angular_speed
        return np.stack([-s * np.sin(phi), s * np.cos(phi), np.zeros_like(phi)], axis=-1)


@dataclass(frozen=True)
class LinePath:
    start: tuple
    velocity_vector: tuple

    def position(self, t):
        t = np.asarray(t, dtype=float)[..., None]
        return np.asarray(self.start, dtype=float) + t * np.asarray(self.velocity_vector, dtype=float)

    def velocity(self, t):
        t = np.asarray(t, dtype=float)
        return np.broadcast_to(np.asarray(self.velocity_vector, dtype=float), t.shape + (3,)).copy()


@dataclass(frozen=True)
class Particle:
    path: object
    charge: float
    mass: float = 1.0


@dataclass
class BranchConfiguration:
    """All particles' classical motion for one branch (A or B).

    ``electron`` interacts with every entry of ``sources``; ``weights``
    lets one source stand for several identical ones.
    """

    label: str
    electron: Particle
    sources: Sequence[Particle]
    c: float = 1.0
    weights: Sequence[float] | None = None

    def __post_init__(self):
        if self.label not in ("A", "B"):
            raise InvalidInputError("branch label must be 'A' or 'B'")
        if self.weights is not None and len(self.weights) != len(self.sources):
            raise InvalidInputError("one weight per source required")

    def weight_array(self):
        if self.weights is None:
            return np.ones(len(self.sources))
        return np.asarray(self.weights, dtype=float)

    def swapped(self, index=0):
        """Exchange the electron with source ``index`` (two-body symmetry checks)."""
        src = list(self.sources)
        new_electron = src[index]
        src[index] = self.electron
        return BranchConfiguration(self.label, new_electron, src, self.c, self.weights)


def _pair_terms(branch, dyad, t):
    """Per-source arrays (n_src, n_t) of the scalar and vector coupling pieces."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    xe = branch.electron.path.position(t)
    ve = branch.electron.path.velocity(t)
    coulomb = []
    current = []
    for src in branch.sources:
        r = src.path.position(t) - xe
        dist = np.linalg.norm(r, axis=-1)
        if np.any(dist == 0.0) or not np.all(np.isfinite(dist)):
            bad = float(t[np.argmin(dist)])
            raise SingularityError(f"electron and source coincide at t={bad!r}", time_reached=bad)
        coulomb.append(1.0 / dist)
        current.append((r, src.path.velocity(t)))
    return t, xe, ve, coulomb, current


def _integrand(branch, dyad, attribute):
    qe = branch.electron.charge
    c = branch.c
    w = branch.weight_array()

    def f(t):
        t, xe, ve, coulomb, current = _pair_terms(branch, dyad, t)
        total = np.zeros_like(t)
        for k, src in enumerate(branch.sources):
            qs = src.charge
            r, vs = current[k]
            if attribute == "electron":
                # electron moving in the sources' potentials
                A = qs / c * dyad.contract(-r, vs)
                term = qe / c * np.sum(ve * A, axis=-1) - qe * qs * coulomb[k]
            elif attribute == "sources":
                # source moving in the electron's potentials
                A = qe / c * dyad.contract(r, ve)
                term = qs / c * np.sum(vs * A, axis=-1) - qs * qe * coulomb[k]
            else:
                # minus the interaction energy with everything classical
                vDv = np.einsum("...i,...i->...", ve, dyad.contract(r, vs))
                term = -(qe * qs * coulomb[k] - qe * qs / c**2 * vDv)
            total = total + w[k] * term
        return total

    return f


def interaction_phase(branch, dyad, T, attribute="electron", tol=None, limit=4000):
    """Time integral of the classical interaction for one branch.

    ``attribute`` selects who carries it: 'electron' (the electron in the
    sources' fields), 'sources' (each source in the electron's field) or
    'hamiltonian' (minus the interaction energy).  All three are equal.
    """
    if attribute not in ("electron", "sources", "hamiltonian"):
        raise InvalidInputError(f"unknown attribute {attribute!r}")
    if not T > 0:
        raise InvalidInputError("T must be positive")
    if not branch.sources or all(s.charge == 0 for s in branch.sources) or branch.electron.charge == 0:
        return 0.0
    tol = default_tol() if tol is None else tol
    return adaptive_quad(_integrand(branch, dyad, attribute), 0.0, T, tol, tol_abs=1e-300, limit=limit).value


def _packet_constant(packet):
    return float(packet.phase(packet.x_center))


def overlap_exponents(a, b):
    """(position exponent, momentum exponent) of the overlap magnitude."""
    if a.sigma != b.sigma:
        raise UnsupportedConfigurationError("overlap formula assumes equal packet widths")
    dx = a.x_center - b.x_center
    dp = a.p_mean - b.p_mean
    return dx**2 / (8 * a.sigma**2), a.sigma**2 * dp**2 / 2


def gaussian_overlap(a, b):
    """Magnitude and phase of <b|a> for two equal-width packets.

    Phase is the mean-momentum times displacement term plus the difference of
    the packets' accumulated (non-local) phases, kept unwrapped.
    """
    ex, ep = overlap_exponents(a, b)
    magnitude = math.exp(-(ex + ep))
    phase = 0.5 * (a.p_mean + b.p_mean) * (b.x_center - a.x_center) + (_packet_constant(a) - _packet_constant(b))
    return magnitude, phase


def _wrap(phase):
    return math.remainder(phase, 2.0 * math.pi)


@dataclass
class InterferenceResult:
    per_particle_overlap: list
    interaction_phase_A: float
    interaction_phase_B: float
    visibility: float
    P_plus: float
    P_minus: float
    total_phase: float
    assembly: dict = field(default_factory=dict)
    position_exponent: float = 0.0
    momentum_exponent: float = 0.0


def _recombined(a, b, rel=1e-12):
    return abs(a.x_center - b.x_center) <= rel * a.sigma and abs(a.p_mean - b.p_mean) * a.sigma <= rel


def probabilities(visibility, phase):
    """P+ and P- for a given visibility and phase difference."""
    if not 0.0 <= visibility <= 1.0:
        raise InvalidInputError("visibility must lie in [0, 1]")
    p_plus = 0.5 * (1.0 + visibility * math.cos(_wrap(phase)))
    return p_plus, 1.0 - p_plus


def detection_probabilities(branchA, branchB, packetsA, packetsB, dyad, T, tol=None):
    """Two-outcome probabilities for the joint electron + sources experiment.

    ``packetsA[0]``/``packetsB[0]`` are the electron's packets at T and must
    have recombined; the rest pair up with the sources.  The phase is
    assembled as electron phase + source phase + extra phase, where the
    extra phase is the time integral of the interaction energy.  The two
    partial assemblies (sources alone, electron alone) are kept in
    ``assembly`` for comparison.
    """
    if len(packetsA) != len(packetsB) or len(packetsA) != len(branchA.sources) + 1:
        raise InvalidInputError("need one packet per particle per branch")
    eA, eB = packetsA[0], packetsB[0]
    if eA.sigma != eB.sigma:
        raise UnsupportedConfigurationError("electron packets must share a width")
    if not _recombined(eA, eB):
        raise InvalidInputError("electron packets have not recombined at T")
    weights = branchA.weight_array()

    overlaps = [(1.0, _packet_constant(eA) - _packet_constant(eB))]
    pos_exp = 0.0
    mom_exp = 0.0
    for k, (a, b) in enumerate(zip(packetsA[1:], packetsB[1:])):
        ex, ep = overlap_exponents(a, b)
        pos_exp += weights[k] * ex
        mom_exp += weights[k] * ep
        overlaps.append(gaussian_overlap(a, b))
    visibility = math.exp(-(pos_exp + mom_exp))

    phi = {}
    for attr in ("electron", "sources", "hamiltonian"):
        phi[attr] = (interaction_phase(branchA, dyad, T, attr, tol), interaction_phase(branchB, dyad, T, attr, tol))
    electron = phi["electron"][0] - phi["electron"][1]
    sources = phi["sources"][0] - phi["sources"][1]
    extra = -(phi["hamiltonian"][0] - phi["hamiltonian"][1])
    total = electron + sources + extra
    assembly = {"all_three": total, "sources_only": sources, "electron_only": electron, "extra": extra}
    p_plus, p_minus = probabilities(visibility, total)
    return InterferenceResult(
        per_particle_overlap=overlaps,
        interaction_phase_A=phi["hamiltonian"][0],
        interaction_phase_B=phi["hamiltonian"][1],
        visibility=visibility,
        P_plus=p_plus,
        P_minus=p_minus,
        total_phase=total,
        assembly=assembly,
        position_exponent=pos_exp,
        momentum_exponent=mom_exp,
    )


def kinetic_phase_reduction_check(traj_A, traj_B, spec_A, spec_B=None, T=None, full=False, endpoint_tol=1e-9, tol=None):
    """Check that a particle's kinetic phase difference reduces to a vector-potential integral.

    Without ``full`` the endpoints must coincide, and ``lhs`` is the
    difference of the two branches' integrals of p^2/2m.  With ``full`` the
    endpoint term and the potential difference are included as for a
    source particle whose branches end apart.  ``rhs`` is the compact form
    using the initial velocity.  The residual is second order in the charge.
    """
    spec_B = spec_A if spec_B is None else spec_B
    if T is None:
        T = min(traj_A.t_end, traj_B.t_end)
    if not (traj_A.covers(0.0, T) and traj_B.covers(0.0, T)):
        raise InvalidInputError("trajectories do not span [0, T]")
    tol = default_tol() if tol is None else tol
    xA, xB = float(traj_A.position(T)), float(traj_B.position(T))
    if not full:
        scale = max(abs(xA), abs(xB), abs(float(traj_A.position(0.0))), 1e-300)
        if abs(xA - xB) > endpoint_tol * scale:
            raise InvalidInputError(f"branch endpoints differ by {abs(xA - xB):.3g}")
    m, q, c = spec_A.m, spec_A.q, spec_A.c
    v0 = float(traj_A.velocity(0.0))

    def kinetic_pair(t):
        pa = traj_A.momentum(t)
        pb = traj_B.momentum(t)
        return (pa - pb) * (pa + pb) / (2 * m), (pa * pa + pb * pb) / (2 * m)

    def vector_pair(t):
        a = spec_A.A_value(traj_A.position(t), t)
        b = spec_B.A_value(traj_B.position(t), t)
        return a - b, np.abs(a) + np.abs(b)

    def scalar_pair(t):
        a = spec_A.scalar_potential(traj_A.position(t), t)
        b = spec_B.scalar_potential(traj_B.position(t), t)
        return a - b, np.abs(a) + np.abs(b)

    def quad(pair):
        # the branches nearly cancel, so aim no lower than roundoff in the separate integrands
        scale = adaptive_quad(lambda t: pair(t)[1], 0.0, T, 1e-3, tol_abs=1e-300).value
        floor = max(64.0 * np.finfo(float).eps * abs(scale), 1e-300)
        return adaptive_quad(lambda t: pair(t)[0], 0.0, T, tol, tol_abs=floor).value

    kinetic = quad(kinetic_pair)
    compact_vector = q * v0 / c * quad(vector_pair)
    lhs, rhs = kinetic, compact_vector
    details = {"kinetic": kinetic, "vector_term": compact_vector}
    if full:
        pa, pb = float(traj_A.momentum(T)), float(traj_B.momentum(T))
        endpoint = 0.5 * (pa + pb) * (xB - xA)
        potential = -q * quad(scalar_pair)
        lhs = endpoint + kinetic + potential
        rhs = compact_vector + potential
        details.update(endpoint=endpoint, potential=potential)
    details["residual"] = lhs - rhs
    return IdentityReport(lhs, rhs, details)
