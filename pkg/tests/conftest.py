"""Shared fixtures: cached generator assemblies and spectra.

Spectra are the expensive objects (thousands of dense complex solves),
so every parameter point used by more than one test is computed once per
session and reused.
"""

from functools import lru_cache

import numpy as np
import pytest

from twoatom_cbs.liouvillian import DriveConfig, Geometry, assemble
from twoatom_cbs.spectrum import compute_spectrum
from twoatom_cbs.steady_state import intensities, perturbative_steady_state

DEFAULT_SEPARATION = 100.0


@lru_cache(maxsize=None)
def generator(rabi, detuning=0.0, k0_r12=DEFAULT_SEPARATION):
    cfg = DriveConfig(rabi=rabi, detuning=detuning)
    return assemble(cfg, Geometry.backscattering(k0_r12))


@lru_cache(maxsize=None)
def stationary(rabi, detuning=0.0, k0_r12=DEFAULT_SEPARATION):
    gen = generator(rabi, detuning, k0_r12)
    state = perturbative_steady_state(gen)
    return gen, state, intensities(state, gen)


@lru_cache(maxsize=None)
def spectrum_at(rabi, detuning=0.0, half_width=None, points=1201):
    """Cached spectrum; grid covers all resonances unless half_width given."""
    gen = generator(rabi, detuning)
    if half_width is None:
        omega_mod = float(np.hypot(rabi, detuning))
        half_width = 2.5 * omega_mod + 10.0
    grid = np.linspace(-half_width, half_width, points)
    spec, ib = compute_spectrum(gen, nu_grid=grid)
    return gen, spec, ib


@pytest.fixture(scope="session")
def weak_point():
    """Drive well below saturation, on resonance."""
    return spectrum_at(0.1, 0.0, half_width=25.0, points=1201)


@pytest.fixture(scope="session")
def strong_point():
    """Deep saturation regime, on resonance."""
    return spectrum_at(100.0, 0.0, half_width=510.0, points=4001)


@pytest.fixture(scope="session")
def backscattering_geometry():
    return Geometry.backscattering(DEFAULT_SEPARATION)
