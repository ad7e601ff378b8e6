import math

import numpy as np
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from ebhpairs.bound import bound_states, cubic_residual
from ebhpairs.model import ModelParams, density_of_states, k_sector
from ebhpairs.scattering import cross_section, phase_shifts

coupling = st.floats(-10, 10, allow_nan=False)
K_val = st.floats(-3.1, 3.1)
kd_val = st.floats(0.01, math.pi - 0.01)

settings.register_profile("ebh", max_examples=150, deadline=None)
settings.load_profile("ebh")


@given(coupling, coupling, K_val, kd_val)
def test_sigma_in_unit_interval(U, V, K, kd):
    p = ModelParams(U=U, V=V)
    sig = cross_section(p, k_sector(p, K), kd)
    assert 0.0 <= sig <= 1.0


@given(coupling, coupling, K_val, kd_val)
def test_sigma_sign_flip(U, V, K, kd):
    p = ModelParams(U=U, V=V)
    s = k_sector(p, K)
    assert math.isclose(cross_section(p, s, kd), cross_section(p.flipped(), s, math.pi - kd),
                        abs_tol=1e-10)


@given(coupling, K_val, kd_val)
def test_v0_reduction(U, K, kd):
    p = ModelParams(U=U)
    sh = phase_shifts(p, k_sector(p, K), kd)
    gap = (sh.delta - sh.delta0 + math.pi / 2) % math.pi - math.pi / 2
    assert abs(gap) < 1e-12


@given(K_val, st.floats(0.0, 0.999))
def test_dos_symmetric_and_positive(K, frac):
    s = k_sector(ModelParams(), K)
    E = frac * 2 * s.JK
    assume(s.JK > 1e-6)
    assert density_of_states(s, E) == density_of_states(s, -E) > 0


@given(coupling, coupling, st.floats(-3.0, 3.0))
def test_bound_states_solve_cubic_outside_band(U, V, K):
    p = ModelParams(U=U, V=V)
    s = k_sector(p, K)
    states = bound_states(p, s)
    assert len(states) <= 2
    scale = max(1.0, abs(U), abs(V)) ** 2
    for b in states:
        assert abs(b.alpha) < 1
        assert abs(b.energy) >= 2 * s.JK
        assert cubic_residual(p, s, b.alpha) < 1e-10 * scale


@given(coupling, coupling, st.floats(-3.0, 3.0))
def test_bound_energies_flip_sign(U, V, K):
    p = ModelParams(U=U, V=V)
    s = k_sector(p, K)
    a = sorted(b.energy for b in bound_states(p, s))
    b = sorted(-b.energy for b in bound_states(p.flipped(), s))
    assert len(a) == len(b)
    assert np.allclose(a, b, atol=1e-9)
