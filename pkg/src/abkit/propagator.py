"""Direct 1D Schrodinger propagation on a uniform periodic grid.

Used only as an independent check on the analytic packet formulas, so it
knows nothing about them: it takes a TimeDepForceSpec, builds

    H(t) = (p - q A(t)/c)^2 / 2m + q x V'(t) + q g(t)

and advances with a symmetric split-step (Strang) scheme, evaluating the
time-dependent coefficients at each step's midpoint.  hbar = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BoundaryLeakError, DegenerateOverlapError, InvalidInputError

DEFAULT_POINTS = 2**14
DEFAULT_MARGIN = 12.0


@dataclass
class GridWavefunction:
    """Complex amplitudes on x_min + k*dx, k = 0..n-1 (periodic grid)."""

    x_min: float
    x_max: float
    amplitudes: np.ndarray
    time: float = 0.0
    _x: np.ndarray = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.ndim != 1 or len(self.amplitudes) < 4:
            raise InvalidInputError("amplitudes must be a 1-D array of at least 4 points")
        if not self.x_max > self.x_min:
            raise InvalidInputError("x_max must exceed x_min")

    @property
    def n(self):
        return len(self.amplitudes)

    @property
    def dx(self):
        return (self.x_max - self.x_min) / self.n

    @property
    def x(self):
        if self._x is None or len(self._x) != self.n:
            self._x = self.x_min + self.dx * np.arange(self.n)
        return self._x

    def norm(self):
        return float(np.sum(np.abs(self.amplitudes) ** 2) * self.dx)

    def mean_position(self):
        rho = np.abs(self.amplitudes) ** 2
        return float(np.sum(rho * self.x) / np.sum(rho))

    def mean_momentum(self):
        k = 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dx)
        phi = np.fft.fft(self.amplitudes)
        w = np.abs(phi) ** 2
        return float(np.sum(w * k) / np.sum(w))

    def same_grid(self, other):
        return self.n == other.n and self.x_min == other.x_min and self.x_max == other.x_max


def gaussian_packet_on_grid(x_min, x_max, n, center, momentum, sigma, phase=0.0, time=0.0):
    """Normalised exp(-(x-center)^2/4 sigma^2) * exp(i*momentum*(x-center) + i*phase)."""
    grid = GridWavefunction(x_min, x_max, np.zeros(n, dtype=complex), time)
    x = grid.x
    norm = (2.0 * math.pi * sigma**2) ** -0.25
    grid.amplitudes = norm * np.exp(-((x - center) ** 2) / (4 * sigma**2) + 1j * (momentum * (x - center) + phase))
    return grid


def grid_span(x_low, x_high, sigma, margin=DEFAULT_MARGIN):
    """Window covering [x_low, x_high] plus ``margin`` widths on each side."""
    return x_low - margin * sigma, x_high + margin * sigma


def _edge_amplitude(amplitudes, width):
    peak = float(np.max(np.abs(amplitudes)))
    if peak == 0.0:
        return 0.0
    edge = max(float(np.max(np.abs(amplitudes[:width]))), float(np.max(np.abs(amplitudes[-width:]))))
    return edge / peak


def propagate_schrodinger_1d(spec, psi0, T, steps, leak_tol=1e-12, check_every=1):
    """Advance ``psi0`` by ``T`` under the spec's Hamiltonian in ``steps`` steps.

    Each step is exp(-iV dt/2) exp(-iK dt) exp(-iV dt/2) with V and K frozen
    at the step midpoint, which is second order in dt and exactly unitary.
    Raises BoundaryLeakError if the amplitude near either edge of the window,
    or near the edges of the momentum grid, exceeds ``leak_tol`` relative to
    the peak.
    """
    if steps < 1:
        raise InvalidInputError("steps must be at least 1")
    if not T > 0:
        raise InvalidInputError("T must be positive")
    dt = T / steps
    n = psi0.n
    x = psi0.x
    k = 2.0 * np.pi * np.fft.fftfreq(n, d=psi0.dx)
    width = max(4, n // 200)
    psi = psi0.amplitudes.copy()
    q, m, c = spec.q, spec.m, spec.c
    t = psi0.time
    for i in range(steps):
        tm = t + 0.5 * dt
        half_v = np.exp(-0.5j * dt * q * (x * spec.Vprime(tm) + spec.g(tm)))
        kinetic = np.exp(-1j * dt * (k - q * spec.A(tm) / c) ** 2 / (2.0 * m))
        psi = half_v * np.fft.ifft(kinetic * np.fft.fft(half_v * psi))
        t = psi0.time + (i + 1) * dt
        if check_every and (i % check_every == 0 or i == steps - 1):
            leak = _edge_amplitude(psi, width)
            if leak > leak_tol:
                raise BoundaryLeakError(f"packet reached the grid edge at t={t!r} (relative amplitude {leak:.3g})", leak)
    spectral_leak = _edge_amplitude(np.fft.fftshift(np.fft.fft(psi)), width)
    if spectral_leak > leak_tol:
        raise BoundaryLeakError(f"momentum grid too coarse (relative amplitude {spectral_leak:.3g})", spectral_leak)
    return GridWavefunction(psi0.x_min, psi0.x_max, psi, t)


def overlap(a, b):
    """Discrete <a|b> = sum conj(a) b dx."""
    if not a.same_grid(b):
        raise InvalidInputError("wavefunctions live on different grids")
    return complex(np.vdot(a.amplitudes, b.amplitudes) * a.dx)


def extract_global_phase(a, b, previous=None):
    """Return (|<a|b>|, arg <a|b>) for normalised states.

    The magnitude is divided by both norms.  Without ``previous`` the phase
    is the principal value; with it, the branch closest to ``previous``.
    """
    ov = overlap(a, b)
    scale = math.sqrt(a.norm() * b.norm())
    if scale == 0.0:
        raise DegenerateOverlapError("zero-norm wavefunction")
    magnitude = abs(ov) / scale
    if magnitude < 1e-12:
        raise DegenerateOverlapError(f"overlap magnitude {magnitude:.3g} too small to define a phase", achieved=magnitude)
    phase = math.atan2(ov.imag, ov.real)
    if previous is not None:
        phase += 2.0 * math.pi * round((previous - phase) / (2.0 * math.pi))
    return magnitude, phase


def packet_oracle_comparison(spec, packet, T, n=DEFAULT_POINTS, steps=500, leak_tol=1e-12):
    """Propagate the packet's initial Gaussian on a grid and compare with ``packet`` at T.

    The window spans both the start and end centres plus the default margin.
    Returns ``(magnitude, phase)`` of <numeric|analytic>.
    """
    lo, hi = grid_span(min(spec.x0, packet.x_center), max(spec.x0, packet.x_center), packet.sigma)
    psi0 = gaussian_packet_on_grid(lo, hi, n, spec.x0, spec.p0, packet.sigma)
    psi = propagate_schrodinger_1d(spec, psi0, T, steps, leak_tol=leak_tol, check_every=max(1, steps // 20))
    analytic = GridWavefunction(lo, hi, packet.amplitude(psi0.x), T)
    return extract_global_phase(psi, analytic)
