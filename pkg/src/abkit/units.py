"""Physical constants, unit systems and the packet-regime checks.

Magnetic calculations default to CGS-Gaussian, electric ones to rationalized
MKS.  ``NATURAL`` keeps CGS magnitudes for c, e and m_e but sets hbar to 1,
which is the mode the packet formulas are written in.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

from .errors import InvalidInputError

# CODATA 2018, SI
_C_SI = 299_792_458.0
_HBAR_SI = 1.054571817e-34
_E_SI = 1.602176634e-19
_ME_SI = 9.1093837015e-31
EPSILON0_SI = 8.8541878128e-12

# statcoulomb per coulomb, exactly c/10 in cgs numerics
_STATC_PER_C = _C_SI * 10.0


class SystemTag(enum.Enum):
    CGS_GAUSSIAN = "cgs"
    RATIONALIZED_MKS = "mks"


@dataclass(frozen=True)
class UnitSystem:
    system_tag: SystemTag
    c: float
    hbar: float
    e_charge: float
    m_electron: float

    def __post_init__(self):
        for name in ("c", "hbar", "e_charge", "m_electron"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise InvalidInputError(f"{name} must be positive and finite, got {value!r}")

    @property
    def h(self):
        return 2.0 * math.pi * self.hbar

    @property
    def natural(self):
        return self.hbar == 1.0

    def with_natural_hbar(self):
        return replace(self, hbar=1.0)

    @property
    def fine_structure(self):
        if self.system_tag is SystemTag.CGS_GAUSSIAN:
            return self.e_charge**2 / (self.hbar * self.c)
        return self.e_charge**2 / (4.0 * math.pi * EPSILON0_SI * self.hbar * self.c)


CGS = UnitSystem(SystemTag.CGS_GAUSSIAN, _C_SI * 100.0, _HBAR_SI * 1e7, _E_SI * _STATC_PER_C, _ME_SI * 1e3)
MKS = UnitSystem(SystemTag.RATIONALIZED_MKS, _C_SI, _HBAR_SI, _E_SI, _ME_SI)
NATURAL = CGS.with_natural_hbar()


# multiply a CGS value by this to get the MKS value
_CGS_TO_MKS = {
    "dimensionless": 1.0,
    "length": 1e-2,
    "area": 1e-4,
    "mass": 1e-3,
    "time": 1.0,
    "velocity": 1e-2,
    "charge": 1.0 / _STATC_PER_C,
    "surface_charge": 1.0 / _STATC_PER_C / 1e-4,
    "energy": 1e-7,
    "action": 1e-7,
    "force": 1e-5,
    "magnetic_field": 1e-4,
    "vector_potential": 1e-6,
    "electric_potential": _C_SI * 1e-6,
}

QUANTITIES = tuple(_CGS_TO_MKS)


def convert(value, quantity, src, dst):
    """Convert ``value`` of kind ``quantity`` between unit systems.

    Only the handful of quantities this package needs are known.  Electric
    potential uses the statvolt/volt pair (1 statV = 299.792458 V).
    """
    if quantity not in _CGS_TO_MKS:
        raise InvalidInputError(f"unknown quantity {quantity!r}")
    src_tag = src.system_tag if isinstance(src, UnitSystem) else SystemTag(src)
    dst_tag = dst.system_tag if isinstance(dst, UnitSystem) else SystemTag(dst)
    if src_tag is dst_tag:
        return value
    factor = _CGS_TO_MKS[quantity]
    if src_tag is SystemTag.CGS_GAUSSIAN:
        return value * factor
    return value / factor


# unit suffix -> (quantity, value of one unit in MKS)
UNIT_SUFFIXES = {
    "": ("dimensionless", 1.0),
    "1": ("dimensionless", 1.0),
    "rad": ("dimensionless", 1.0),
    "m": ("length", 1.0),
    "cm": ("length", 1e-2),
    "mm": ("length", 1e-3),
    "um": ("length", 1e-6),
    "nm": ("length", 1e-9),
    "m2": ("area", 1.0),
    "cm2": ("area", 1e-4),
    "kg": ("mass", 1.0),
    "g": ("mass", 1e-3),
    "s": ("time", 1.0),
    "ms": ("time", 1e-3),
    "us": ("time", 1e-6),
    "m/s": ("velocity", 1.0),
    "cm/s": ("velocity", 1e-2),
    "C": ("charge", 1.0),
    "statC": ("charge", 1.0 / _STATC_PER_C),
    "e": ("charge", _E_SI),
    "C/m2": ("surface_charge", 1.0),
    "statC/cm2": ("surface_charge", 1.0 / _STATC_PER_C / 1e-4),
    "J": ("energy", 1.0),
    "erg": ("energy", 1e-7),
    "T": ("magnetic_field", 1.0),
    "G": ("magnetic_field", 1e-4),
}


def to_system(value, unit, system):
    """Express ``value`` given in ``unit`` in ``system``'s base units."""
    try:
        quantity, mks_scale = UNIT_SUFFIXES[unit]
    except KeyError:
        raise InvalidInputError(f"unknown unit {unit!r}") from None
    mks_value = value * mks_scale
    return quantity, convert(mks_value, quantity, SystemTag.RATIONALIZED_MKS, system)


@dataclass(frozen=True)
class PacketRegime:
    sigma: float
    mass: float
    speed: float
    duration: float


@dataclass(frozen=True)
class RegimeReport:
    wavelength_ratio: float
    spreading_ratio: float
    wavelength_ok: bool
    spreading_ok: bool
    tol_wavelength: float
    tol_spread: float

    @property
    def passed(self):
        return self.wavelength_ok and self.spreading_ok

    def failures(self):
        out = []
        if not self.wavelength_ok:
            out.append(f"wavelength_ratio={self.wavelength_ratio:.3g} >= {self.tol_wavelength:g}")
        if not self.spreading_ok:
            out.append(f"spreading_ratio={self.spreading_ratio:.3g} >= {self.tol_spread:g}")
        return out


DEFAULT_TOL_WAVELENGTH = 0.1
DEFAULT_TOL_SPREAD = 1e-3


def check_regime(regime, tol_wavelength=DEFAULT_TOL_WAVELENGTH, tol_spread=DEFAULT_TOL_SPREAD, units=NATURAL):
    """Report how well a packet satisfies the semiclassical assumptions.

    wavelength_ratio is the de Broglie wavelength h/(m v) over the width, and
    spreading_ratio is hbar T / (2 m sigma^2).  Never raises on a failed
    check; the flags carry the verdict.
    """
    for name in ("sigma", "mass", "speed", "duration"):
        value = getattr(regime, name)
        if not value > 0:
            raise InvalidInputError(f"{name} must be positive, got {value!r}")
    if math.isinf(regime.speed):
        wavelength_ratio = 0.0
    else:
        wavelength_ratio = units.h / (regime.mass * regime.speed) / regime.sigma
    spreading_ratio = units.hbar * regime.duration / (2.0 * regime.mass * regime.sigma**2)
    return RegimeReport(
        wavelength_ratio=wavelength_ratio,
        spreading_ratio=spreading_ratio,
        wavelength_ok=wavelength_ratio < tol_wavelength,
        spreading_ok=spreading_ratio < tol_spread,
        tol_wavelength=tol_wavelength,
        tol_spread=tol_spread,
    )
