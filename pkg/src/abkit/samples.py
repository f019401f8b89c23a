"""Seeded generators of sample force specs for checks and demonstrations."""

from __future__ import annotations

import numpy as np

from .dynamics import TimeDepForceSpec


def random_timedep_spec(rng, m=1000.0, v0_range=(0.15, 0.3), charge_range=(0.5, 1.5)):
    """Smooth random time-only forces: a few sinusoids in A and V', linear g.

    With sigma = 1 and T up to 0.5 these stay inside the default packet regime
    (wavelength about 2 pi/(m v0) << 1, spreading T/(2m) << 1e-3).
    """

    def series(n):
        amp = rng.uniform(-0.5, 0.5, n)
        freq = rng.uniform(0.5, 6.0, n)
        phase = rng.uniform(0.0, 2 * np.pi, n)
        return lambda t: np.sum(amp[:, None] * np.sin(freq[:, None] * np.atleast_1d(t)[None, :] + phase[:, None]), axis=0).reshape(np.shape(t))

    slope = rng.uniform(-0.3, 0.3)
    return TimeDepForceSpec(
        q=float(rng.choice([-1.0, 1.0]) * rng.uniform(*charge_range)),
        m=m,
        A_of_t=series(3),
        Vprime_of_t=series(3),
        g_of_t=lambda t: slope * np.asarray(t, dtype=float),
        x0=float(rng.uniform(-1.0, 1.0)),
        v0=float(rng.uniform(*v0_range)),
    )
