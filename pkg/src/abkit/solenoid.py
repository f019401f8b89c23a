"""Magnetic experiment: an electron circling a solenoid of moving charges.

Geometry (CGS-Gaussian): the solenoid axis is z; positive pieces move
counterclockwise and negative pieces clockwise on rings of radius ``a``
spread over z in [-L/2, L/2], so both carry current in +phi.  The electron
circles at radius ``R`` in the z = 0 plane.  Traverse A runs over the
right half, angle -pi/2 + u t/R; traverse B over the left half, angle
3pi/2 - u t/R.  Both take T = pi R/u.

Phases are in radians (action divided by hbar).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.special import ellipe, ellipk

from .dynamics import GeneralPotentialSpec
from .errors import InvalidInputError, SingularityError, UnsupportedConfigurationError
from .interference import Gauge
from .quadrature import adaptive_quad, default_tol, panel_quad, richardson_extrapolate
from .units import CGS

TRAVERSES = ("A", "B")
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(32)


@dataclass(frozen=True)
class SolenoidSpec:
    """Solenoid of two counter-rotating charged shells plus an orbiting electron.

    ``Q`` is the charge magnitude of each shell and ``M`` its mass; a piece
    carries Q/(n_a n_L) and M/(n_a n_L).
    """

    a: float
    R: float
    L: float
    v0: float
    u: float
    Q: float
    M: float = 1.0
    n_a: int = 64
    n_L: int = 64
    e: float = CGS.e_charge
    c: float = CGS.c
    hbar: float = CGS.hbar

    def __post_init__(self):
        for name in ("a", "R", "L", "c", "hbar"):
            if not getattr(self, name) > 0:
                raise InvalidInputError(f"{name} must be positive")
        if not self.a < self.R:
            raise InvalidInputError("electron orbit must lie outside the solenoid (a < R)")
        if self.u < 0 or self.v0 < 0 or self.Q < 0:
            raise InvalidInputError("speeds and shell charge are magnitudes")
        if not self.M > 0:
            raise InvalidInputError("shell mass must be positive")
        if self.n_a < 1 or self.n_L < 1:
            raise InvalidInputError("need at least one piece per ring and one ring")

    @property
    def T(self):
        if self.u == 0:
            raise InvalidInputError("electron speed is zero; traverse time undefined")
        return math.pi * self.R / self.u

    @property
    def piece_charge(self):
        return self.Q / (self.n_a * self.n_L)

    @property
    def piece_mass(self):
        return self.M / (self.n_a * self.n_L)

    @property
    def N_e(self):
        return self.Q / self.e

    def with_length(self, L, keep_line_density=True):
        """Copy with a new length; by default Q scales so Q/L (and B0) is unchanged."""
        Q = self.Q * L / self.L if keep_line_density else self.Q
        M = self.M * L / self.L if keep_line_density else self.M
        return replace(self, L=L, Q=Q, M=M)

    @classmethod
    def from_electron_count(cls, a, R, L, v0, u, N_e, units=CGS, **kwargs):
        kwargs.setdefault("M", max(N_e, 1.0) * units.m_electron)
        return cls(a=a, R=R, L=L, v0=v0, u=u, Q=N_e * units.e_charge, e=units.e_charge, c=units.c, hbar=units.hbar, **kwargs)


@dataclass(frozen=True)
class PieceState:
    phi0: float
    z: float
    charge_sign: int
    q: float
    m: float

    def __post_init__(self):
        if self.charge_sign not in (1, -1):
            raise InvalidInputError("charge_sign must be +1 or -1")

    @classmethod
    def of(cls, spec, phi0, z, charge_sign=1):
        return cls(phi0, z, charge_sign, charge_sign * spec.piece_charge, spec.piece_mass)


@dataclass(frozen=True)
class PhaseResult:
    value: float
    error_estimate: float = 0.0
    warning: str | None = None
    details: dict = field(default_factory=dict)

    def __float__(self):
        return float(self.value)


def b_field(spec):
    """Interior field of the two shells: 4 (v0/c) Q/(a L)."""
    return 4.0 * (spec.v0 / spec.c) * spec.Q / (spec.a * spec.L)


def ab_phase_reference(spec):
    """Enclosed-flux phase e pi a^2 B0/(hbar c)."""
    return spec.e * math.pi * spec.a**2 * b_field(spec) / (spec.hbar * spec.c)


def ab_phase_from_count(N_e, e, hbar, c, v0, a, L):
    """Same phase written through the electron count and fine-structure combination."""
    return 4.0 * math.pi * N_e * (e**2 / (hbar * c)) * (v0 / c) * (a / L)


def _check_traverse(traverse):
    if traverse not in TRAVERSES:
        raise InvalidInputError(f"traverse must be 'A' or 'B', got {traverse!r}")
    return 1.0 if traverse == "A" else -1.0


def electron_angle(spec, traverse, t):
    t = np.asarray(t, dtype=float)
    if traverse == "A":
        return -0.5 * math.pi + spec.u * t / spec.R
    return 1.5 * math.pi - spec.u * t / spec.R


def _unit_phi(angle):
    angle = np.asarray(angle, dtype=float)
    return np.stack([-np.sin(angle), np.cos(angle), np.zeros_like(angle)], axis=-1)


def _electron_potential(points, theta, direction, spec, gauge, term="both"):
    """Vector potential of the electron (angle theta, velocity direction*u phi_hat) at points."""
    theta = np.asarray(theta, dtype=float)
    R_vec = np.stack([spec.R * np.cos(theta), spec.R * np.sin(theta), np.zeros_like(theta)], axis=-1)
    d = np.asarray(points, dtype=float) - R_vec
    dist = np.linalg.norm(d, axis=-1)
    if np.any(dist == 0.0):
        raise SingularityError("field point coincides with the electron")
    u_vec = direction * spec.u * _unit_phi(theta)
    pref = spec.e / spec.c
    if gauge is Gauge.LORENZ:
        return pref * u_vec / dist[..., None]
    first = 0.5 * pref * u_vec / dist[..., None]
    second = 0.5 * pref * d * (np.sum(d * u_vec, axis=-1) / dist**3)[..., None]
    if term == "first":
        return first
    if term == "second":
        return second
    return first + second


def electron_vector_potential(piece_pos, electron_angle_value, spec, gauge=Gauge.LORENZ, traverse="A", term="both"):
    """Electron's vector potential at ``piece_pos`` (3-vector, cm)."""
    direction = _check_traverse(traverse)
    return _electron_potential(np.asarray(piece_pos, dtype=float), electron_angle_value, direction, spec, gauge, term)


def _piece_kinematics(phi0, z, sign, spec, t):
    phi = np.asarray(phi0)[..., None] + np.asarray(sign)[..., None] * spec.v0 * np.asarray(t) / spec.a
    zz = np.broadcast_to(np.asarray(z, dtype=float)[..., None], phi.shape)
    pos = np.stack([spec.a * np.cos(phi), spec.a * np.sin(phi), zz], axis=-1)
    vel = (np.asarray(sign, dtype=float)[..., None] * spec.v0)[..., None] * _unit_phi(phi)
    return pos, vel


def _pieces_integrand(spec, traverse, gauge, phi0, z, sign, q, term="both"):
    direction = _check_traverse(traverse)
    q = np.asarray(q, dtype=float)

    def f(t):
        theta = electron_angle(spec, traverse, t)
        pos, vel = _piece_kinematics(phi0, z, sign, spec, t)
        A = _electron_potential(pos, theta, direction, spec, gauge, term)
        return np.sum(q[..., None] * np.sum(vel * A, axis=-1), axis=0) / (spec.c * spec.hbar)

    return f


def piece_phase(piece, traverse, spec, gauge=Gauge.LORENZ, term="both", tol=None):
    """Time integral of (q/c) v . A_electron for one piece, in radians."""
    _check_traverse(traverse)
    if piece.q == 0 or spec.u == 0 or spec.v0 == 0:
        return 0.0
    f = _pieces_integrand(spec, traverse, gauge, np.array([piece.phi0]), np.array([piece.z]),
                          np.array([piece.charge_sign]), np.array([piece.q]), term)
    tol = default_tol() if tol is None else tol
    return adaptive_quad(f, 0.0, spec.T, tol, tol_abs=1e-300).value


def discrete_pieces(spec, sign=None):
    """(phi0, z, sign, q) arrays for every piece: midpoint rings, evenly spaced angles."""
    signs = (1, -1) if sign is None else (sign,)
    j = np.arange(spec.n_a)
    k = np.arange(spec.n_L)
    phi0 = 2.0 * math.pi * (j + 0.5) / spec.n_a
    z = -0.5 * spec.L + (k + 0.5) * spec.L / spec.n_L
    P, Z = np.meshgrid(phi0, z, indexing="ij")
    out_phi, out_z, out_s = [], [], []
    for s in signs:
        out_phi.append(P.ravel())
        out_z.append(Z.ravel())
        out_s.append(np.full(P.size, s))
    s_arr = np.concatenate(out_s)
    return np.concatenate(out_phi), np.concatenate(out_z), s_arr, s_arr * spec.piece_charge


def _discrete_phase(spec, traverse, gauge, sign, term, tol, chunk=4096):
    phi0, z, s, q = discrete_pieces(spec, sign)
    total = 0.0
    err = 0.0
    for start in range(0, len(phi0), chunk):
        sl = slice(start, start + chunk)
        f = _pieces_integrand(spec, traverse, gauge, phi0[sl], z[sl], s[sl], q[sl], term)
        value, e = panel_quad(lambda t: f(t)[None, :], 0.0, spec.T, tol, tol_abs=1e-300)
        total += float(value[0])
        err += float(e[0])
    return total, err


def _continuum_kernel(gauge, term, a, R, h):
    """Angular integrand after the exact z integral over [-h, h] (h may be inf for Lorenz/Coulomb-second)."""

    def lorenz(theta):
        s2 = R * R + a * a - 2.0 * a * R * np.cos(theta)
        if math.isinf(h):
            raise UnsupportedConfigurationError("infinite length diverges term by term; extrapolate instead")
        return np.cos(theta) * 2.0 * np.arcsinh(h / np.sqrt(s2))

    def second(theta):
        s2 = R * R + a * a - 2.0 * a * R * np.cos(theta)
        zint = 2.0 / s2 if math.isinf(h) else 2.0 * h / (s2 * np.sqrt(s2 + h * h))
        return a * R * np.sin(theta) ** 2 * zint

    if gauge is Gauge.LORENZ:
        return lorenz
    if term == "first":
        return lambda th: 0.5 * lorenz(th)
    if term == "second":
        return lambda th: 0.5 * second(th)
    return lambda th: 0.5 * (lorenz(th) + second(th))


def _continuum_value(spec, traverse, gauge, sign, term, tol, L=None):
    L = spec.L if L is None else L
    direction = _check_traverse(traverse)
    kernel = _continuum_kernel(gauge, term, spec.a, spec.R, 0.5 * L)
    integral = adaptive_quad(kernel, 0.0, 2.0 * math.pi, tol, tol_abs=1e-300)
    n_signs = 2 if sign is None else 1
    # per sign: line density Q/L spread uniformly in angle, q*s = Q > 0 for both
    pref = n_signs * direction * spec.Q * spec.e * spec.v0 * spec.u * spec.T / (2.0 * math.pi * L * spec.hbar * spec.c**2)
    return pref * integral.value, abs(pref) * integral.error_estimate


def solenoid_phase(spec, traverse="A", gauge=Gauge.LORENZ, mode="continuum", sign=1, term="both",
                   extrapolate=False, tol=None):
    """Total piece phase for one traverse.

    ``sign`` selects positive (+1), negative (-1) or both (None) shells.
    Continuum mode integrates z exactly over the finite length and theta by
    adaptive quadrature; with ``extrapolate`` the result is Richardson
    extrapolated in 1/L^2 at fixed line charge density.  Discrete mode sums
    the time quadrature over every piece.
    """
    _check_traverse(traverse)
    if sign not in (1, -1, None):
        raise InvalidInputError("sign must be +1, -1 or None")
    tol = default_tol() if tol is None else tol
    if spec.Q == 0 or spec.u == 0 or spec.v0 == 0:
        return PhaseResult(0.0)
    warning = None
    if spec.L / spec.R < 10:
        warning = f"L/R = {spec.L / spec.R:.3g} < 10: finite-length corrections are not small"
    if mode == "discrete":
        value, err = _discrete_phase(spec, traverse, gauge, sign, term, tol)
        return PhaseResult(value, err, warning, {"pieces": len(discrete_pieces(spec, sign)[0])})
    if mode != "continuum":
        raise InvalidInputError(f"unknown mode {mode!r}")
    value, err = _continuum_value(spec, traverse, gauge, sign, term, tol)
    details = {"finite_length_value": value}
    if extrapolate:
        lengths = [spec.L, 2 * spec.L, 4 * spec.L, 8 * spec.L]
        values = [_continuum_value(spec.with_length(Lk), traverse, gauge, sign, term, tol)[0] for Lk in lengths]
        value, rich_err = richardson_extrapolate([1.0 / Lk for Lk in lengths], values, order=2)
        err = max(err, rich_err)
        details["lengths"] = lengths
        details["values"] = values
    return PhaseResult(value, err, warning, details)


def time_averaged_potential(point, spec, traverse="A"):
    """Traverse-averaged electron vector potential, first order in a/D, phi component.

    ``point`` = (phi, z) on the solenoid surface.
    """
    phi, z = (np.asarray(v, dtype=float) for v in point)
    direction = _check_traverse(traverse)
    D = np.hypot(spec.R, z)
    # the B traverse covers the left half, where the angular average of cos flips
    return direction * spec.e * spec.u / (spec.c * D) * (direction * 2.0 / math.pi * np.cos(phi) + spec.a * spec.R / (2.0 * D * D))


def time_averaged_potential_exact(point, spec, traverse="A", tol=None):
    """Traverse average of the tangential Lorenz potential without expanding in a."""
    phi, z = point
    direction = _check_traverse(traverse)
    pos = np.array([spec.a * math.cos(phi), spec.a * math.sin(phi), z])

    def f(t):
        A = _electron_potential(pos, electron_angle(spec, traverse, t), direction, spec, Gauge.LORENZ)
        return A @ _unit_phi(phi)

    return adaptive_quad(f, 0.0, spec.T, tol or default_tol()).value / spec.T


def time_averaged_phase(spec, traverse="A", sign=1, infinite_length=True, tol=None):
    """Piece phase from the time-averaged potential, summed over one shell.

    Each piece is treated as sitting in the traverse-averaged potential for
    the whole time T.  The angular and z integrals are done numerically;
    with ``infinite_length`` z runs over the whole line.
    """
    if sign not in (1, -1):
        raise InvalidInputError("sign must be +1 or -1")
    _check_traverse(traverse)
    if spec.Q == 0 or spec.u == 0 or spec.v0 == 0:
        return 0.0
    tol = default_tol() if tol is None else tol
    phis = np.linspace(0.0, 2.0 * math.pi, 65)[:-1]

    def ring(z):
        z = np.atleast_1d(z)
        vals = time_averaged_potential((phis[None, :], z[:, None]), spec, traverse)
        return vals.mean(axis=1)  # exact for a trigonometric polynomial of this degree

    lo, hi = (-math.inf, math.inf) if infinite_length else (-0.5 * spec.L, 0.5 * spec.L)
    z_integral = adaptive_quad(ring, lo, hi, tol, tol_abs=1e-300).value
    # q s = Q/(n_a n_L) > 0 for both shells; density Q/L per unit z after the angular mean
    return spec.Q / spec.L * spec.v0 / spec.c * spec.T * z_integral / spec.hbar


def time_averaged_closed_form(spec, traverse="A"):
    """pi Q e v0 a/(hbar L c^2), signed by traverse."""
    return _check_traverse(traverse) * math.pi * spec.Q * spec.e * spec.v0 * spec.a / (spec.hbar * spec.L * spec.c**2)


def impulse_phase_view(spec, traverse="A", sign=1, tol=None, chunk=2048):
    """Piece phase written as displacement times accumulated impulse.

    The electron is taken to start from rest, so at t = 0 each piece gets a
    kick -(q/c) A(r, 0+) followed by the induction force -(q/c) dA/dt.  The
    time derivative is a finite difference and the impulse a nested
    Gauss-Legendre integral; no shortcut to A(r, t) is used.  Discrete
    pieces as in ``solenoid_phase(mode='discrete')``.
    """
    direction = _check_traverse(traverse)
    if spec.Q == 0 or spec.u == 0 or spec.v0 == 0:
        return 0.0
    tol = default_tol() if tol is None else tol
    phi0, z, s, q = discrete_pieces(spec, sign)
    T = spec.T
    h = np.finfo(float).eps ** (1.0 / 3.0) * T

    def A_at(pos, t):
        return _electron_potential(pos, electron_angle(spec, traverse, t), direction, spec, Gauge.LORENZ)

    def dA_dt(pos, t):
        return (-A_at(pos, t + 2 * h) + 8 * A_at(pos, t + h) - 8 * A_at(pos, t - h) + A_at(pos, t - 2 * h)) / (12 * h)

    total = 0.0
    for start in range(0, len(phi0), chunk):
        sl = slice(start, start + chunk)

        def integrand(t):
            pos, vel = _piece_kinematics(phi0[sl], z[sl], s[sl], spec, t)
            out = np.empty(pos.shape[:-1])
            for i, ti in enumerate(t):
                p = pos[:, i, :]
                nodes = 0.5 * ti * (_GL_NODES + 1.0)
                rates = np.stack([dA_dt(p, tn) for tn in nodes], axis=0)
                accumulated = 0.5 * ti * np.tensordot(_GL_WEIGHTS, rates, axes=1)
                impulse = -(q[sl][:, None] / spec.c) * (A_at(p, 0.0) + accumulated)
                out[:, i] = -np.sum(vel[:, i, :] * impulse, axis=-1)
            return np.sum(out, axis=0)[None, :] / spec.hbar

        value, _ = panel_quad(integrand, 0.0, T, tol, tol_abs=1e-300)
        total += float(value[0])
    return total


def loop_vector_potential(rho, z, loop_radius, current, c):
    """A_phi of a circular current loop (Gaussian units) via complete elliptic integrals."""
    rho = np.asarray(rho, dtype=float)
    z = np.asarray(z, dtype=float)
    m = 4.0 * loop_radius * rho / ((loop_radius + rho) ** 2 + z * z)
    k = np.sqrt(m)
    return 4.0 * current / (c * k) * np.sqrt(loop_radius / rho) * ((1.0 - 0.5 * m) * ellipk(m) - ellipe(m))


def solenoid_vector_potential(rho, spec, sign=None, tol=None):
    """Magnetostatic A_phi at radius rho in the z = 0 plane from the shells' surface current."""
    n_signs = 2 if sign is None else 1
    surface_current = n_signs * spec.Q * spec.v0 / (2.0 * math.pi * spec.a * spec.L)
    f = lambda zp: loop_vector_potential(rho, zp, spec.a, surface_current, spec.c)
    return adaptive_quad(f, -0.5 * spec.L, 0.5 * spec.L, tol or default_tol(), tol_abs=1e-300).value


def electron_in_solenoid_phase(spec, traverse="A", sign=None, tol=None):
    """Electron phase in the solenoid's static potential: (e/hbar c) u T A_phi(R)."""
    direction = _check_traverse(traverse)
    A_phi = solenoid_vector_potential(spec.R, spec, sign, tol)
    return direction * spec.e / (spec.hbar * spec.c) * spec.u * spec.T * A_phi


def piece_general_spec(piece, traverse, spec, gauge=Gauge.LORENZ):
    """One-dimensional spec for a piece moving along its ring (coordinate = arc length).

    Only the tangential vector potential of the electron acts; the charge is
    scaled by 1/hbar so the packet machinery (hbar = 1) returns radians.
    """
    direction = _check_traverse(traverse)

    def A(x, t):
        x = np.asarray(x, dtype=float)
        t = np.asarray(t, dtype=float)
        x, t = np.broadcast_arrays(x, t)
        phi = x / spec.a
        pos = np.stack([spec.a * np.cos(phi), spec.a * np.sin(phi), np.full_like(phi, piece.z)], axis=-1)
        vec = _electron_potential(pos, electron_angle(spec, traverse, t), direction, spec, gauge)
        return np.sum(vec * _unit_phi(phi), axis=-1)

    return GeneralPotentialSpec(
        q=piece.q / spec.hbar,
        m=piece.m / spec.hbar,
        A=A,
        c=spec.c,
        length_scale=spec.a,
        time_scale=spec.T,
    )


@dataclass
class BudgetReport:
    target_phase: float
    N_e: float
    bound: float
    n_a: int | None
    sigma: float
    n_L: float
    n_e: float
    piece_mass: float
    wavelength: float
    wavelengths_per_packet: float
    n_p: float
    T: float
    displacement: float
    delta_v: float
    position_exponent_per_piece: float
    momentum_exponent_per_piece: float
    position_exponent: float
    momentum_exponent: float
    visibility: float
    first_principles: dict = field(default_factory=dict)


def visibility_budget(target_phase, geometry, units=CGS, margin=1e-3):
    """Size a solenoid for a given enclosed-flux phase and estimate the packet overlap loss.

    ``geometry`` holds a, R, L, v0, u (cm, cm/s).  Pieces per ring n_a is
    the largest power of ten with n_a^3 <= margin * bound, where the bound
    comes from requiring the piece wavelength to be small against its width.
    Every piece is taken to share the displacement equally.
    """
    try:
        a, R, L, v0, u = (float(geometry[k]) for k in ("a", "R", "L", "v0", "u"))
    except KeyError as exc:
        raise InvalidInputError(f"geometry is missing {exc.args[0]!r}") from None
    if target_phase < 0:
        raise InvalidInputError("target phase must be non-negative")
    hbar, c, e, m_e = units.hbar, units.c, units.e_charge, units.m_electron
    T = math.pi * R / u
    if target_phase == 0:
        return BudgetReport(0.0, 0.0, 0.0, None, math.nan, math.nan, 0.0, 0.0, math.inf, 0.0, 0.0, T,
                            0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0)
    N_e = target_phase / (4.0 * math.pi * (e * e / (hbar * c)) * (v0 / c) * (a / L))
    bound = N_e * m_e * v0 * a / hbar * (2.0 * math.pi * a / L)
    limit = margin * bound
    if limit < 1.0:
        raise UnsupportedConfigurationError(f"no piece count satisfies n_a^3 <= {limit:.3g}")
    n_a = 10 ** int(math.floor(math.log10(limit) / 3.0 + 1e-12))
    sigma = 2.0 * math.pi * a / n_a
    n_L = L / sigma
    n_e = N_e / (n_a * n_L)
    m = n_e * m_e
    wavelength = units.h / (m * v0)
    n_p = n_a * n_L
    dx = wavelength * (target_phase / math.pi) / (2.0 * n_p)
    dv = dx / T
    pos_piece = dx**2 / (8.0 * sigma**2)
    mom_piece = sigma**2 * (m * dv) ** 2 / (2.0 * hbar**2)
    pos_total = n_p * pos_piece
    mom_total = n_p * mom_piece

    # per-piece route: each of the N = 2 n_a n_L pieces carries phase/N, which
    # fixes its displacement through p dx = hbar * share
    N = 2.0 * n_a * n_L
    share = target_phase / N
    dx_piece = hbar * share / (m * v0)
    dp_piece = m * dx_piece / T
    first = {
        "pieces": N,
        "displacement": dx_piece,
        "position_exponent": N * dx_piece**2 / (8.0 * sigma**2),
        "momentum_exponent": N * sigma**2 * dp_piece**2 / (2.0 * hbar**2),
    }
    return BudgetReport(
        target_phase=target_phase,
        N_e=N_e,
        bound=bound,
        n_a=n_a,
        sigma=sigma,
        n_L=n_L,
        n_e=n_e,
        piece_mass=m,
        wavelength=wavelength,
        wavelengths_per_packet=sigma / wavelength,
        n_p=n_p,
        T=T,
        displacement=dx,
        delta_v=dv,
        position_exponent_per_piece=pos_piece,
        momentum_exponent_per_piece=mom_piece,
        position_exponent=pos_total,
        momentum_exponent=mom_total,
        visibility=math.exp(-(pos_total + mom_total)),
        first_principles=first,
    )


def ring_share_profile(spec, n_rings=None, tol=None):
    """Fraction of one shell's Lorenz phase carried by each ring (midpoint rings).

    Quantifies how unequal the piece contributions are; rings near the
    electron's plane dominate.
    """
    n_rings = spec.n_L if n_rings is None else n_rings
    z = -0.5 * spec.L + (np.arange(n_rings) + 0.5) * spec.L / n_rings
    tol = default_tol() if tol is None else tol
    vals = []
    for zk in z:
        f = lambda th: np.cos(th) / np.sqrt(spec.R**2 + spec.a**2 - 2 * spec.a * spec.R * np.cos(th) + zk * zk)
        vals.append(adaptive_quad(f, 0.0, 2.0 * math.pi, tol, tol_abs=1e-300).value)
    vals = np.array(vals)
    return z, vals / vals.sum()
