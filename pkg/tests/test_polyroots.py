import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ebhpairs.polyroots import companion_roots, is_real, polyval


def test_known_cubic():
    # (x - 1)(x + 2)(x - 0.5)
    roots = np.sort(companion_roots(np.poly([1.0, -2.0, 0.5])).real)
    np.testing.assert_allclose(roots, [-2.0, 0.5, 1.0], atol=1e-14)


def test_leading_zero_drops_degree():
    roots = companion_roots((0.0, 1.0, -3.0, 2.0))
    assert len(roots) == 2
    np.testing.assert_allclose(np.sort(roots.real), [1.0, 2.0], atol=1e-14)


def test_complex_pair_kept_complex():
    roots = companion_roots((1.0, 0.0, 1.0))
    assert not any(is_real(r) for r in roots)


def test_widely_separated_roots_keep_relative_accuracy():
    roots = [-2e-6, 0.5, -5e5]
    found = np.sort(companion_roots(np.poly(roots)).real)
    np.testing.assert_allclose(found, np.sort(roots), rtol=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-3, 3).filter(lambda x: abs(x) > 1e-3), min_size=3, max_size=3))
def test_real_roots_have_small_residual(roots):
    coeffs = np.poly(roots)
    for r in companion_roots(coeffs):
        if is_real(r):
            scale = np.polyval(np.abs(coeffs), abs(r.real))
            assert abs(polyval(coeffs, r.real)) <= 1e-12 * scale
