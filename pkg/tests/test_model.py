import math

import numpy as np
import pytest

from ebhpairs.errors import BandEdgeError, BrillouinZoneError
from ebhpairs.model import (
    ModelParams,
    continuum_band,
    continuum_energy,
    density_of_states,
    k_sector,
    sector_from_jk,
)


def test_effective_hopping_values():
    p = ModelParams(J=1.0)
    assert k_sector(p, 0.0).JK == 2.0
    assert k_sector(p, math.pi).JK == 0.0
    assert k_sector(p, -math.pi).JK == 0.0
    np.testing.assert_allclose(k_sector(p, 3 * math.pi / 4).JK, 0.7653668647301796, rtol=1e-15)


def test_effective_hopping_respects_lattice_constant():
    p = ModelParams(J=0.5, d=2.0)
    s = k_sector(p, math.pi / 4)  # K d = pi/2
    np.testing.assert_allclose(s.JK, 2 * 0.5 * math.cos(math.pi / 4), rtol=1e-15)


@pytest.mark.parametrize("K", [math.pi * 1.001, -4.0, 10.0])
def test_k_outside_zone_rejected(K):
    with pytest.raises(BrillouinZoneError):
        k_sector(ModelParams(), K)


@pytest.mark.parametrize("kwargs", [{"J": 0.0}, {"J": -1.0}, {"d": 0.0}])
def test_invalid_params(kwargs):
    with pytest.raises(ValueError):
        ModelParams(**kwargs)


def test_sector_from_jk_roundtrip():
    p = ModelParams(J=1.3)
    for K in np.linspace(0, math.pi, 7):
        s = k_sector(p, K)
        np.testing.assert_allclose(sector_from_jk(p, s.JK).K, K, atol=1e-7)


@pytest.mark.parametrize(
    "kd, expected", [(0.0, -4.0), (math.pi / 2, 0.0), (math.pi, 4.0)]
)
def test_continuum_energy(kd, expected):
    s = k_sector(ModelParams(), 0.0)
    assert continuum_energy(s, kd) == pytest.approx(expected, abs=1e-15)


def test_band_edges_symmetric():
    s = k_sector(ModelParams(), 1.1)
    band = continuum_band(s)
    assert band.E_min == -band.E_max
    assert band.E_min <= band.E_max


def test_continuum_energy_monotone():
    s = k_sector(ModelParams(), 0.4)
    E = [continuum_energy(s, kd) for kd in np.linspace(0, math.pi, 200)]
    assert np.all(np.diff(E) > 0)


def test_density_of_states_values():
    assert density_of_states(k_sector(ModelParams(), 0.0), 0.0) == pytest.approx(0.25)
    s1 = k_sector(ModelParams(J=0.5), 0.0)  # JK = 1
    assert density_of_states(s1, math.sqrt(3)) == pytest.approx(1.0, rel=1e-14)


@pytest.mark.parametrize("E", [4.0, -4.0, 5.0])
def test_density_of_states_edge(E):
    with pytest.raises(BandEdgeError):
        density_of_states(k_sector(ModelParams(), 0.0), E)


def test_dos_is_inverse_band_slope():
    """Central difference of E(kd) against 1/rho at interior points."""
    s = k_sector(ModelParams(J=0.8), 0.9)
    h = 1e-5
    for kd in np.linspace(0.2, math.pi - 0.2, 11):
        slope = (continuum_energy(s, kd + h) - continuum_energy(s, kd - h)) / (2 * h)
        E = continuum_energy(s, kd)
        assert slope * density_of_states(s, E) == pytest.approx(1.0, rel=1e-8)


def test_dos_normalization_and_symmetry():
    s = k_sector(ModelParams(), 0.5)
    a = 2 * s.JK
    # substitution E = a sin(t) removes the edge singularity
    n = 2000
    t = -math.pi / 2 + (np.arange(n) + 0.5) * math.pi / n  # midpoints
    integrand = [density_of_states(s, a * math.sin(x)) * a * math.cos(x) for x in t]
    assert sum(integrand) * math.pi / n == pytest.approx(math.pi, rel=1e-10)
    for E in (0.3, 1.1, 2.9):
        assert density_of_states(s, E) == density_of_states(s, -E)
