"""Electric experiment: an electron passing above or below a charged capacitor.

Rationalized MKS.  ``hbar`` and ``epsilon0`` default to 1 so the formulas
read as bare products; pass SI values to get radians for SI inputs.  The
upper (+) traverse puts the electron above the plates, the lower (-) below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .dynamics import TimeDepForceSpec
from .errors import InvalidInputError, RegimeError
from .packet import evolve_packet_timedep
from .quadrature import adaptive_quad, default_tol

PLATES = ("upper", "lower")


@dataclass(frozen=True)
class CapacitorSpec:
    sigma_s: float
    area: float
    D: float
    M: float
    e: float
    T: float
    m: float = 1.0
    u: float = 1.0
    v0: float = 0.0
    hbar: float = 1.0
    epsilon0: float = 1.0

    def __post_init__(self):
        for name in ("area", "D", "M", "T", "m", "hbar", "epsilon0"):
            if not getattr(self, name) > 0:
                raise InvalidInputError(f"{name} must be positive")
        if self.sigma_s < 0 or self.e < 0 or self.v0 < 0:
            raise InvalidInputError("sigma_s, e and v0 are magnitudes")

    @property
    def coupling(self):
        """e sigma / (epsilon0 hbar): phase rate per unit plate separation."""
        return self.e * self.sigma_s / (self.epsilon0 * self.hbar)

    @property
    def expansion_parameter(self):
        plate = self.sigma_s * self.area
        return math.inf if plate == 0 else self.e / plate


def fixed_plate_phase_shift(spec):
    """-e sigma D T: the two traverses' constant potentials differ by e sigma D."""
    return -spec.coupling * spec.D * spec.T


def branch_phases_electron(spec, tol=None):
    """Electron phase on each traverse from quadrature of its constant potential energy."""
    tol = default_tol() if tol is None else tol
    out = {}
    for label, s in (("+", 1.0), ("-", -1.0)):
        energy = s * 0.5 * spec.coupling * spec.D
        out[label] = -adaptive_quad(lambda t: energy + 0.0 * t, 0.0, spec.T, tol, tol_abs=1e-300).value
    return out


def plate_displacement_ratio(spec):
    """Plate drift over T under the electron's force, relative to D."""
    return spec.e * spec.sigma_s / spec.epsilon0 * spec.T**2 / (4.0 * spec.M) / spec.D


def _plate_force_spec(spec, plate, traverse_sign, offset=0.0):
    """Plate as a packet in the electron's linear potential (+/- e sigma z/2), hbar-scaled."""
    s = 1.0 if plate == "upper" else -1.0
    slope = traverse_sign * s * 0.5 * spec.e * spec.sigma_s / spec.epsilon0
    return TimeDepForceSpec(
        q=1.0 / spec.hbar,
        m=spec.M / spec.hbar,
        A_of_t=0.0,
        Vprime_of_t=slope,
        g_of_t=-slope * offset,
        x0=s * 0.5 * spec.D,
        v0=0.0,
    )


@dataclass
class PlateLedger:
    """Per-plate, per-traverse contributions to the phase difference (+ minus -)."""

    contributions: dict
    total: float
    from_packets: float
    displacement_ratio: float
    details: dict = field(default_factory=dict)


def plate_attributed_phase(spec, tol=None, regime_limit=1e-3):
    """Phase difference attributed to the plates moving in the electron's potential.

    Each plate is evolved as a packet starting at rest at +/-D/2.  The four
    entries of ``contributions`` are the potential terms, signed so they add
    to the difference; ``from_packets`` is the same difference from full
    packet phases evaluated at the plates' nominal positions.
    """
    ratio = plate_displacement_ratio(spec)
    if ratio > regime_limit:
        raise RegimeError(f"plate displacement {ratio:.3g} D exceeds {regime_limit:g} D over the traverse", {"displacement_ratio": ratio})
    tol = default_tol() if tol is None else tol
    contributions = {}
    from_packets = 0.0
    for plate in PLATES:
        nominal = (0.5 if plate == "upper" else -0.5) * spec.D
        for label, tsign in (("+", 1.0), ("-", -1.0)):
            packet = evolve_packet_timedep(_plate_force_spec(spec, plate, tsign), 1.0, spec.T, tol, check=False)
            contributions[(plate, label)] = tsign * packet.ledger.timedep_potential
            from_packets += tsign * float(packet.phase(nominal))
    total = math.fsum(contributions.values())
    return PlateLedger(contributions, total, from_packets, ratio)


@dataclass
class SplitLedger:
    electron_fraction: float
    electron: float
    upper_plate: float
    lower_plate: float

    @property
    def plates(self):
        return self.upper_plate + self.lower_plate

    @property
    def total(self):
        return self.electron + self.upper_plate + self.lower_plate


def attribution_split(spec, electron_fraction, tol=None):
    """Move a fraction of the constant potential energy onto the electron.

    The electron gets +/- f e sigma D/2 and each plate's potential is shifted
    by the opposite constant, so the Hamiltonian is unchanged.  Each part's
    phase difference is computed by quadrature of its own potential.
    """
    f = float(electron_fraction)
    if not 0.0 <= f <= 1.0:
        raise InvalidInputError("electron_fraction must lie in [0, 1]")
    tol = default_tol() if tol is None else tol
    k = spec.coupling
    electron_energy = lambda s: s * f * 0.5 * k * spec.D

    def difference(energy_of_sign):
        plus = adaptive_quad(lambda t: energy_of_sign(1.0) + 0.0 * t, 0.0, spec.T, tol, tol_abs=1e-300).value
        minus = adaptive_quad(lambda t: energy_of_sign(-1.0) + 0.0 * t, 0.0, spec.T, tol, tol_abs=1e-300).value
        return -(plus - minus)

    electron = difference(electron_energy)
    # plates sit at their nominal positions; energy there is +/- (1 - f) e sigma D/4 each
    upper = difference(lambda s: s * 0.5 * k * (0.5 * spec.D - f * 0.5 * spec.D))
    lower = difference(lambda s: -s * 0.5 * k * (-0.5 * spec.D + f * 0.5 * spec.D))
    return SplitLedger(f, electron, upper, lower)


def ramp_correction(spec, ramp_time):
    """Extra phase from linear separation and rejoining ramps of the given duration.

    During each ramp the separation grows (or shrinks) linearly, so each ramp
    adds half its duration at full separation; two ramps add ``ramp_time``.
    """
    if ramp_time < 0:
        raise InvalidInputError("ramp_time must be non-negative")
    return -spec.coupling * spec.D * ramp_time


@dataclass
class ScenarioResult:
    T_plus: float
    T_minus: float
    D_plus: float
    D_minus: float
    T_bar: float
    phase_shift: float
    electron_field_term: float
    self_energy_term: float
    branch_phases: dict
    work_integral: float
    potential_integral: float
    exact: bool
    visibility: float = 1.0
    details: dict = field(default_factory=dict)


def _free_plate_times(spec):
    plate = spec.sigma_s * spec.area
    k = spec.sigma_s / spec.epsilon0
    T_plus = 4.0 * spec.M * spec.v0 / (k * (plate + spec.e))
    T_minus = 4.0 * spec.M * spec.v0 / (k * (plate - spec.e))
    T_bar = 4.0 * spec.M * spec.v0 / (k * plate)
    return T_plus, T_minus, T_bar


def _separation(spec, sign):
    """Plate separation z_U - z_L on a free-plate branch, and its return time."""
    k = spec.sigma_s / spec.epsilon0
    accel = k * (spec.sigma_s * spec.area + sign * spec.e) / (2.0 * spec.M)
    T_ret = 2.0 * spec.v0 / accel
    return (lambda t: 2.0 * (spec.v0 * t - 0.5 * accel * t * t)), T_ret, accel


def free_plate_scenario(spec, exact_mode=True, tol=None):
    """Plates launched apart at +/- v0 that fall back together under mutual and electron forces.

    Exact mode keeps every order in e/(sigma A); approximate mode keeps the
    leading term only.  The branch phases are also integrated numerically
    from the plate trajectories, and the upper plate's share on the upper
    traverse is evaluated both as -integral of V and as the nested work
    integral of the electron's force.
    """
    if not spec.v0 > 0:
        raise InvalidInputError("free-plate scenario needs v0 > 0")
    if not spec.e < spec.sigma_s * spec.area:
        raise InvalidInputError("need e < sigma*A: plates would not return")
    tol = default_tol() if tol is None else tol
    T_plus, T_minus, T_bar = _free_plate_times(spec)
    k = spec.sigma_s / spec.epsilon0
    h = spec.hbar

    if exact_mode:
        field_term = -(k * spec.e * spec.v0 / 6.0) * (T_minus**2 + T_plus**2) / h
        self_term = (k * spec.sigma_s * spec.area * spec.v0 / 6.0) * (T_minus**2 - T_plus**2) / h
    else:
        field_term = -k * spec.e * spec.v0 * T_bar**2 / (3.0 * h)
        self_term = 2.0 * k * spec.e * spec.v0 * T_bar**2 / (3.0 * h)
    phase = field_term + self_term

    branch = {}
    for label, sign in (("+", 1.0), ("-", -1.0)):
        sep, T_ret, _ = _separation(spec, sign)
        energy = 0.5 * k * (spec.sigma_s * spec.area + sign * spec.e)
        branch[label] = -energy * adaptive_quad(sep, 0.0, T_ret, tol, tol_abs=1e-300).value / h

    # upper plate, upper traverse: V = e sigma z_U/2 (per hbar), F = -dV/dz
    _, T_ret, accel = _separation(spec, 1.0)
    z_U = lambda t: spec.v0 * t - 0.5 * accel * t * t
    vz_U = lambda t: spec.v0 - accel * t
    slope = 0.5 * spec.e * k / h
    potential_integral = -adaptive_quad(lambda t: slope * z_U(t), 0.0, T_ret, tol, tol_abs=1e-300).value

    def inner(t):
        t = float(t)
        if t == 0.0:
            return 0.0
        return adaptive_quad(lambda tp: vz_U(tp) * (-slope), 0.0, t, tol, tol_abs=1e-300).value

    work_integral = adaptive_quad(lambda ts: [inner(t) for t in ts], 0.0, T_ret, tol, tol_abs=1e-300).value

    return ScenarioResult(
        T_plus=T_plus,
        T_minus=T_minus,
        D_plus=0.25 * spec.v0 * T_plus,
        D_minus=0.25 * spec.v0 * T_minus,
        T_bar=T_bar,
        phase_shift=phase,
        electron_field_term=field_term,
        self_energy_term=self_term,
        branch_phases=branch,
        work_integral=work_integral,
        potential_integral=potential_integral,
        exact=exact_mode,
        details={"numeric_phase_shift": branch["+"] - branch["-"], "expansion_parameter": spec.expansion_parameter},
    )
