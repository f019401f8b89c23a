import cmath
import math

import numpy as np
import pytest

from abkit.dynamics import TimeDepForceSpec
from abkit.errors import BoundaryLeakError, DegenerateOverlapError, InvalidInputError
from abkit.packet import evolve_packet_timedep
from abkit.propagator import (
    GridWavefunction,
    extract_global_phase,
    gaussian_packet_on_grid,
    overlap,
    packet_oracle_comparison,
    propagate_schrodinger_1d,
)
from abkit.samples import random_timedep_spec


def _free_gaussian(x, t, m, sigma, x0, p0):
    s = sigma**2 * (1 + 1j * t / (2 * m * sigma**2))
    pref = (2 * math.pi) ** -0.25 * math.sqrt(sigma) / np.sqrt(s)
    return pref * np.exp(-((x - x0 - p0 * t / m) ** 2) / (4 * s) + 1j * p0 * (x - x0) - 1j * p0**2 * t / (2 * m))


def test_free_spreading_matches_closed_form():
    m, sigma, p0, T = 1.0, 1.0, 2.0, 3.0
    spec = TimeDepForceSpec(q=0.0, m=m)
    psi0 = gaussian_packet_on_grid(-30.0, 40.0, 2048, 0.0, p0, sigma)
    psi = propagate_schrodinger_1d(spec, psi0, T, 10)
    exact = GridWavefunction(-30.0, 40.0, _free_gaussian(psi0.x, T, m, sigma, 0.0, p0), T)
    mag, phase = extract_global_phase(psi, exact)
    assert mag == pytest.approx(1.0, abs=1e-12)
    assert phase == pytest.approx(0.0, abs=1e-10)


def test_ehrenfest_constant_force():
    q, m, Vp = 1.0, 2.0, 0.3
    spec = TimeDepForceSpec(q=q, m=m, Vprime_of_t=Vp)
    psi0 = gaussian_packet_on_grid(-25.0, 25.0, 2048, 0.0, 1.0, 1.0)
    T = 4.0
    psi = propagate_schrodinger_1d(spec, psi0, T, 400)
    a = -q * Vp / m
    assert psi.mean_position() == pytest.approx(0.5 * T + 0.5 * a * T * T, rel=1e-6)
    assert psi.mean_momentum() == pytest.approx(1.0 + m * a * T, abs=1e-6)


def test_norm_conserved_over_many_steps():
    spec = TimeDepForceSpec(q=1.0, m=1.0, A_of_t=lambda t: np.sin(t), Vprime_of_t=lambda t: 0.1 * np.cos(t))
    psi0 = gaussian_packet_on_grid(-40.0, 40.0, 1024, 0.0, 0.0, 2.0)
    psi = propagate_schrodinger_1d(spec, psi0, 5.0, 10_000, check_every=0)
    assert psi.norm() == pytest.approx(psi0.norm(), abs=1e-10)


def test_second_order_in_time_step():
    spec = TimeDepForceSpec(q=1.0, m=1.0, A_of_t=lambda t: np.sin(3 * t), Vprime_of_t=lambda t: np.cos(2 * t))
    psi0 = gaussian_packet_on_grid(-30.0, 30.0, 1024, 0.0, 0.5, 1.5)
    ref = propagate_schrodinger_1d(spec, psi0, 2.0, 3200)
    errs = []
    for steps in (50, 100, 200):
        psi = propagate_schrodinger_1d(spec, psi0, 2.0, steps)
        errs.append(np.sqrt(np.sum(np.abs(psi.amplitudes - ref.amplitudes) ** 2) * psi.dx))
    assert math.log2(errs[0] / errs[1]) == pytest.approx(2.0, abs=0.15)
    assert math.log2(errs[1] / errs[2]) == pytest.approx(2.0, abs=0.15)


def test_phase_extraction():
    a = gaussian_packet_on_grid(-10, 10, 256, 0.0, 1.0, 1.0)
    assert extract_global_phase(a, a) == pytest.approx((1.0, 0.0))
    b = GridWavefunction(-10, 10, a.amplitudes * cmath.exp(0.7j))
    assert extract_global_phase(a, b) == pytest.approx((1.0, 0.7))
    # unwrapping towards a previous value
    c = GridWavefunction(-10, 10, a.amplitudes * cmath.exp(-3.0j))
    assert extract_global_phase(a, c, previous=3.0)[1] == pytest.approx(2 * math.pi - 3.0)
    far = gaussian_packet_on_grid(-10, 10, 256, 8.0, 0.0, 0.2)
    near = gaussian_packet_on_grid(-10, 10, 256, -8.0, 0.0, 0.2)
    with pytest.raises(DegenerateOverlapError):
        extract_global_phase(far, near)
    with pytest.raises(InvalidInputError):
        overlap(a, gaussian_packet_on_grid(-10, 11, 256, 0.0, 1.0, 1.0))


def test_boundary_leak_detected():
    spec = TimeDepForceSpec(q=0.0, m=1.0)
    psi0 = gaussian_packet_on_grid(-10.0, 10.0, 512, 0.0, 3.0, 1.0)
    with pytest.raises(BoundaryLeakError) as info:
        propagate_schrodinger_1d(spec, psi0, 5.0, 50)
    assert info.value.leak > 1e-12


def test_invalid_arguments():
    psi0 = gaussian_packet_on_grid(-10.0, 10.0, 64, 0.0, 0.0, 1.0)
    spec = TimeDepForceSpec(q=0.0, m=1.0)
    with pytest.raises(InvalidInputError):
        propagate_schrodinger_1d(spec, psi0, 1.0, 0)
    with pytest.raises(InvalidInputError):
        propagate_schrodinger_1d(spec, psi0, -1.0, 10)
    with pytest.raises(InvalidInputError):
        GridWavefunction(1.0, 0.0, np.ones(8))


def test_oracle_agrees_with_packet_formula():
    rng = np.random.default_rng(21)
    spec = random_timedep_spec(rng)
    pk = evolve_packet_timedep(spec, 1.0, 0.3)
    mag, phase = packet_oracle_comparison(spec, pk, 0.3, n=2**13, steps=300)
    assert mag >= 0.9999
    assert abs(phase) <= 1e-3
