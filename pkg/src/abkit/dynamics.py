"""Classical 1D motion under scalar and vector potentials.

Three routes are provided: the closed-form solution when the forces depend
only on time, adaptive ODE integration for arbitrary potentials, and the
linearised dynamics whose force is frozen onto a reference trajectory.
Charges, masses and c are in whatever consistent units the caller uses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicHermiteSpline

from .errors import InvalidInputError, NumericError
from .quadrature import CumulativeIntegral, adaptive_quad, default_tol


def _evaluate(f, *args):
    """Call ``f`` and broadcast the result to the shape of the last argument."""
    shape = np.shape(args[-1])
    if f is None:
        return np.zeros(shape) if shape else 0.0
    out = np.asarray(f(*args) if callable(f) else f, dtype=float)
    if out.shape != shape:
        out = np.broadcast_to(out, shape).copy() if shape else float(out)
    return out if shape else float(out)


@dataclass(frozen=True)
class TimeDepForceSpec:
    """Particle under forces with no spatial dependence.

    The potential energy is ``q*(g(t) + x*Vprime(t))`` and the vector potential
    path component is ``A(t)``.  The callables must accept numpy arrays;
    plain numbers are taken as constants.
    """

    q: float
    m: float
    A_of_t: Optional[Callable] = None
    Vprime_of_t: Optional[Callable] = None
    g_of_t: Optional[Callable] = None
    x0: float = 0.0
    v0: float = 0.0
    c: float = 1.0

    def __post_init__(self):
        if not self.m > 0:
            raise InvalidInputError(f"mass must be positive, got {self.m!r}")
        if not self.c > 0:
            raise InvalidInputError("c must be positive")

    def A(self, t):
        return _evaluate(self.A_of_t, t)

    def Vprime(self, t):
        return _evaluate(self.Vprime_of_t, t)

    def g(self, t):
        return _evaluate(self.g_of_t, t)

    def potential(self, x, t):
        """Scalar potential per unit charge at (x, t)."""
        return self.g(t) + np.asarray(x) * self.Vprime(t)

    @property
    def p0(self):
        return self.m * self.v0 + self.q / self.c * self.A(0.0)

    def as_general(self):
        """The same physics expressed as a GeneralPotentialSpec."""
        return GeneralPotentialSpec(
            q=self.q,
            m=self.m,
            A=lambda x, t: self.A(t) + 0.0 * np.asarray(x),
            V=lambda x, t: self.potential(x, t),
            Vprime=lambda x, t: self.Vprime(t) + 0.0 * np.asarray(x),
            Aprime=lambda x, t: 0.0 * np.asarray(x) + 0.0 * np.asarray(t),
            c=self.c,
        )


@dataclass(frozen=True)
class TrajectoryPoint:
    t: float
    x: float
    v: float
    p: float


class TimeDepSolution:
    """Closed-form classical motion for a TimeDepForceSpec on [0, T].

    U(t), W(t) and the integral of A are held as cumulative integrals, so the
    trajectory can be evaluated cheaply at many times.
    """

    def __init__(self, spec, T, tol=None):
        if not T > 0:
            raise InvalidInputError("duration must be positive")
        self.spec = spec
        self.T = float(T)
        tol = default_tol() if tol is None else tol
        self.U = CumulativeIntegral(spec.Vprime, 0.0, T, tol)
        self.W = CumulativeIntegral(lambda t: t * spec.Vprime(t), 0.0, T, tol)
        self.Aint = CumulativeIntegral(spec.A, 0.0, T, tol)
        self.A0 = spec.A(0.0)

    def velocity(self, t):
        s = self.spec
        return s.v0 - s.q / (s.m * s.c) * (s.A(t) - self.A0) - s.q / s.m * self.U(t)

    def position(self, t):
        s = self.spec
        t = np.asarray(t, dtype=float)
        drift = self.Aint(t) - self.A0 * t
        return s.x0 + s.v0 * t - s.q / (s.m * s.c) * drift - s.q / s.m * (t * self.U(t) - self.W(t))

    def momentum(self, t):
        return self.spec.p0 - self.spec.q * self.U(t)

    def trajectory(self, n=1025):
        times = np.linspace(0.0, self.T, n)
        s = self.spec
        accel = s.q / s.m * (-s.Vprime(times) - _time_derivative(s.A, times, self.T) / s.c)
        return ClassicalTrajectory(
            times, self.position(times), self.velocity(times), self.momentum(times), accel,
            q=s.q, m=s.m, c=s.c,
            vector_potential=lambda x, t: s.A(t) + 0.0 * np.asarray(x),
            dense=lambda t: (self.position(t), self.velocity(t)),
        )


def _time_derivative(f, t, scale):
    h = np.finfo(float).eps ** (1.0 / 3.0) * max(scale, 1e-300)
    t = np.asarray(t, dtype=float)
    return (-f(t + 2 * h) + 8 * f(t + h) - 8 * f(t - h) + f(t - 2 * h)) / (12 * h)


def solve_time_dep(spec, t, tol=None):
    """Closed-form trajectory point at time ``t`` for time-only forces.

    Each of U(t), W(t) and the time integral of A is computed by adaptive
    quadrature on [0, t].
    """
    if t < 0:
        raise InvalidInputError("t must be non-negative")
    if t == 0:
        return TrajectoryPoint(0.0, spec.x0, spec.v0, spec.p0)
    tol = default_tol() if tol is None else tol
    U = adaptive_quad(spec.Vprime, 0.0, t, tol, tol_abs=1e-300).value
    W = adaptive_quad(lambda s: s * spec.Vprime(s), 0.0, t, tol).value
    Aint = adaptive_quad(spec.A, 0.0, t, tol).value
    A0 = spec.A(0.0)
    q, m, c = spec.q, spec.m, spec.c
    v = spec.v0 - q / (m * c) * (spec.A(t) - A0) - q / m * U
    x = spec.x0 + spec.v0 * t - q / (m * c) * (Aint - A0 * t) - q / m * (t * U - W)
    p = spec.p0 - q * U
    return TrajectoryPoint(float(t), float(x), float(v), float(p))


@dataclass
class GeneralPotentialSpec:
    """Particle under potentials with arbitrary (x, t) dependence.

    ``A`` and ``V`` are vectorised callables of (x, t); V is per unit charge.
    Missing partial derivatives are formed with 4th-order central differences
    using a step of eps**(1/3) times ``length_scale`` or ``time_scale``.
    """

    q: float
    m: float
    A: Optional[Callable] = None
    V: Optional[Callable] = None
    Vprime: Optional[Callable] = None
    Adot: Optional[Callable] = None
    Aprime: Optional[Callable] = None
    c: float = 1.0
    length_scale: float = 1.0
    time_scale: float = 1.0

    def __post_init__(self):
        if not self.m > 0:
            raise InvalidInputError(f"mass must be positive, got {self.m!r}")

    def _h(self, scale):
        return np.finfo(float).eps ** (1.0 / 3.0) * scale

    @staticmethod
    def _central(f, x, t, h, axis):
        if axis == 0:
            return (-f(x + 2 * h, t) + 8 * f(x + h, t) - 8 * f(x - h, t) + f(x - 2 * h, t)) / (12 * h)
        return (-f(x, t + 2 * h) + 8 * f(x, t + h) - 8 * f(x, t - h) + f(x, t - 2 * h)) / (12 * h)

    def scalar_potential(self, x, t):
        if self.V is None:
            return np.asarray(x, dtype=float) * 0.0 + np.asarray(t, dtype=float) * 0.0
        return np.asarray(self.V(x, t), dtype=float) + 0.0 * np.asarray(x)

    def dV_dx(self, x, t):
        if self.Vprime is not None:
            return np.asarray(self.Vprime(x, t), dtype=float) + 0.0 * np.asarray(x)
        if self.V is None:
            return np.asarray(x, dtype=float) * 0.0
        return self._central(self.V, np.asarray(x, dtype=float), t, self._h(self.length_scale), 0)

    def dA_dt(self, x, t):
        if self.Adot is not None:
            return np.asarray(self.Adot(x, t), dtype=float) + 0.0 * np.asarray(x)
        if self.A is None:
            return np.asarray(x, dtype=float) * 0.0
        return self._central(self.A, np.asarray(x, dtype=float), np.asarray(t, dtype=float), self._h(self.time_scale), 1)

    def dA_dx(self, x, t):
        if self.Aprime is not None:
            return np.asarray(self.Aprime(x, t), dtype=float) + 0.0 * np.asarray(x)
        if self.A is None:
            return np.asarray(x, dtype=float) * 0.0
        return self._central(self.A, np.asarray(x, dtype=float), t, self._h(self.length_scale), 0)

    def A_value(self, x, t):
        if self.A is None:
            return np.asarray(x, dtype=float) * 0.0
        return np.asarray(self.A(x, t), dtype=float) + 0.0 * np.asarray(x)

    def field(self, x, t):
        """Effective electric field along the path, -V' - (1/c) dA/dt."""
        return -self.dV_dx(x, t) - self.dA_dt(x, t) / self.c

    def check_derivatives(self, xs, ts, rtol=1e-6):
        """Compare supplied analytic V' against central differences.

        Returns the largest relative mismatch; raises InvalidInputError if it
        exceeds ``rtol``.
        """
        if self.Vprime is None or self.V is None:
            return 0.0
        xs = np.asarray(xs, dtype=float)
        ts = np.asarray(ts, dtype=float)
        supplied = np.asarray(self.Vprime(xs, ts), dtype=float)
        numeric = self._central(self.V, xs, ts, self._h(self.length_scale), 0)
        scale = np.maximum(np.abs(numeric), np.max(np.abs(numeric)) * 1e-3 + 1e-300)
        worst = float(np.max(np.abs(supplied - numeric) / scale))
        if worst > rtol:
            raise InvalidInputError(f"supplied Vprime disagrees with V by {worst:.3g} (relative)")
        return worst


class ClassicalTrajectory:
    """Sampled classical motion with cubic interpolation between samples.

    ``dense`` (optional) gives (x, v) at arbitrary times directly, e.g. from an
    ODE solver's continuous extension; otherwise Hermite splines are used.
    Canonical momentum is recomputed as m*v + (q/c)*A(x, t) when the vector
    potential is known.
    """

    def __init__(self, times, x, v, p, accel=None, q=0.0, m=1.0, c=1.0, vector_potential=None, dense=None):
        times = np.asarray(times, dtype=float)
        if times.ndim != 1 or len(times) < 2 or np.any(np.diff(times) <= 0):
            raise InvalidInputError("trajectory times must be strictly increasing")
        self.times = times
        self.x = np.asarray(x, dtype=float)
        self.v = np.asarray(v, dtype=float)
        self.p = np.asarray(p, dtype=float)
        self.q, self.m, self.c = q, m, c
        self._A = vector_potential
        self._dense = dense
        if accel is None:
            accel = np.gradient(self.v, times)
        self.accel = np.asarray(accel, dtype=float)
        self._x_spline = CubicHermiteSpline(times, self.x, self.v)
        self._v_spline = CubicHermiteSpline(times, self.v, self.accel)

    @property
    def t_start(self):
        return float(self.times[0])

    @property
    def t_end(self):
        return float(self.times[-1])

    def covers(self, t0, t1):
        slack = 1e-12 * max(1.0, abs(t1))
        return self.t_start <= t0 + slack and self.t_end >= t1 - slack

    def _check(self, t):
        t = np.asarray(t, dtype=float)
        slack = 1e-12 * max(1.0, abs(self.t_end))
        if np.any(t < self.t_start - slack) or np.any(t > self.t_end + slack):
            raise InvalidInputError("time outside trajectory span")
        return np.clip(t, self.t_start, self.t_end)

    def position(self, t):
        t = self._check(t)
        if self._dense is not None:
            return self._dense(t)[0]
        return self._x_spline(t)

    def velocity(self, t):
        t = self._check(t)
        if self._dense is not None:
            return self._dense(t)[1]
        return self._v_spline(t)

    def momentum(self, t):
        t = self._check(t)
        if self._A is not None:
            return self.m * self.velocity(t) + self.q / self.c * np.asarray(self._A(self.position(t), t), dtype=float)
        return np.interp(t, self.times, self.p)

    def vector_potential(self, t):
        if self._A is None:
            return np.zeros_like(np.asarray(t, dtype=float))
        t = self._check(t)
        return np.asarray(self._A(self.position(t), t), dtype=float) + 0.0 * t

    def canonical_residual(self):
        """Largest relative violation of p = m v + (q/c) A on the samples."""
        if self._A is None:
            return 0.0
        expected = self.m * self.v + self.q / self.c * np.asarray(self._A(self.x, self.times), dtype=float)
        scale = np.maximum(np.abs(expected), 1e-300)
        return float(np.max(np.abs(self.p - expected) / scale))


def _ode_trajectory(rhs_accel, spec, x0, v0, t_span, tol, n_samples, atol=None):
    t0, t1 = map(float, t_span)
    if not t1 > t0:
        raise InvalidInputError("t_span must be increasing")
    if not tol > 0:
        raise InvalidInputError("tol must be positive")

    def rhs(t, y):
        return np.array([y[1], rhs_accel(y[0], t)])

    if atol is None:
        atol = tol * max(abs(x0) + abs(v0) * (t1 - t0), abs(v0), 1e-300)
    sol = solve_ivp(rhs, (t0, t1), [x0, v0], method="DOP853", rtol=tol, atol=atol, dense_output=True)
    if sol.status != 0:
        reached = float(sol.t[-1])
        raise NumericError(f"integration stopped at t={reached!r}: {sol.message}", time_reached=reached)
    times = np.linspace(t0, t1, n_samples)
    xs, vs = sol.sol(times)
    accel = np.array([rhs_accel(xv, tv) for xv, tv in zip(xs, times)], dtype=float)
    A = spec.A_value if spec.A is not None else None
    Avals = spec.A_value(xs, times) if spec.A is not None else 0.0
    ps = spec.m * vs + spec.q / spec.c * Avals

    def dense(t):
        t = np.asarray(t, dtype=float)
        y = sol.sol(t)
        return y[0], y[1]

    return ClassicalTrajectory(times, xs, vs, ps, accel, q=spec.q, m=spec.m, c=spec.c, vector_potential=A, dense=dense)


def integrate_general(spec, x0, v0, t_span, tol=1e-10, first_order=False, n_samples=1025, atol=None):
    """Integrate m dv/dt = q*(-V' - dA/dt / c) with an adaptive 8(5,3) pair.

    With ``first_order`` the field is evaluated on the straight line
    x0 + v0*t, giving the motion correct to linear order in q.
    """
    t0 = float(t_span[0])
    qm = spec.q / spec.m
    if first_order:
        def accel(x, t):
            return qm * float(spec.field(x0 + v0 * (t - t0), t))
    else:
        def accel(x, t):
            value = float(spec.field(x, t))
            if not math.isfinite(value):
                raise NumericError(f"field not finite at t={t!r}", time_reached=t)
            return qm * value
    try:
        return _ode_trajectory(accel, spec, float(x0), float(v0), t_span, tol, n_samples, atol)
    except NumericError:
        raise
    except (FloatingPointError, ZeroDivisionError, OverflowError) as exc:
        raise NumericError(f"integration failed: {exc}") from exc


def approx_trajectory(spec, reference, X0, V0, t_span, tol=1e-10, n_samples=1025, atol=None):
    """Motion under the Hamiltonian expanded about ``reference``.

    The acceleration is (q/m) times the field evaluated on the reference path,
    so it carries no dependence on the new trajectory's own position.
    """
    if not reference.covers(float(t_span[0]), float(t_span[1])):
        raise InvalidInputError("reference trajectory does not span t_span")
    qm = spec.q / spec.m

    def accel(x, t):
        return qm * float(spec.field(float(reference.position(t)), t))

    return _ode_trajectory(accel, spec, float(X0), float(V0), t_span, tol, n_samples, atol)


def _path(spec, x0, v0, T, path, tol):
    if path == "classical":
        return integrate_general(spec, x0, v0, (0.0, T), tol).position
    if path == "straight":
        return lambda t: x0 + v0 * np.asarray(t, dtype=float)
    raise InvalidInputError(f"unknown path {path!r}")


def freeze_along_path(spec, x0, v0, T, path="classical", tol=1e-10):
    """Linearise a general spec into a TimeDepForceSpec along a path.

    ``path='classical'`` expands V about the integrated classical trajectory;
    ``path='straight'`` uses x0 + v0*t as done when only first order in q is
    kept.  The returned spec reproduces V and V' on the chosen path.
    """
    xp = _path(spec, x0, v0, T, path, tol)

    def Vp(t):
        t = np.asarray(t, dtype=float)
        return spec.dV_dx(xp(t), t)

    def g(t):
        t = np.asarray(t, dtype=float)
        x = xp(t)
        return spec.scalar_potential(x, t) - x * spec.dV_dx(x, t)

    def A(t):
        t = np.asarray(t, dtype=float)
        return spec.A_value(xp(t), t)

    return TimeDepForceSpec(q=spec.q, m=spec.m, A_of_t=A, Vprime_of_t=Vp, g_of_t=g, x0=x0, v0=v0, c=spec.c)


@dataclass(frozen=True)
class LinearisationReport:
    x_classical: float
    x_straight: float
    potential_phase_classical: float
    potential_phase_straight: float

    @property
    def position_difference(self):
        return self.x_classical - self.x_straight

    @property
    def phase_difference(self):
        return self.potential_phase_classical - self.potential_phase_straight


def compare_linearisations(spec, x0, v0, T, tol=1e-10):
    """Report how much the choice of expansion path matters.

    Each frozen spec is solved in closed form for the end position, and
    -q * int V dt is evaluated along the path it was frozen on.  The
    differences are second order in q.
    """
    out = {}
    for path in ("classical", "straight"):
        xp = _path(spec, x0, v0, T, path, tol)
        frozen = freeze_along_path(spec, x0, v0, T, path, tol)
        x_end = float(TimeDepSolution(frozen, T, tol).position(T))
        integrand = lambda t, xp=xp: spec.scalar_potential(xp(t), t)
        phase = -spec.q * adaptive_quad(integrand, 0.0, T, tol, tol_abs=1e-300).value
        out[path] = (x_end, phase)
    return LinearisationReport(out["classical"][0], out["straight"][0], out["classical"][1], out["straight"][1])
