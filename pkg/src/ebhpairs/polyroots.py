"""Polynomial roots from companion-matrix eigenvalues with Newton polishing."""

from __future__ import annotations

import numpy as np

#: Imaginary parts below this (relative to max(1, |root|)) count as real.
REAL_TOL = 1e-10


def polyval(coeffs, x):
    """Horner evaluation; ``coeffs`` ordered from the highest power down."""
    acc = 0.0 * x
    for c in coeffs:
        acc = acc * x + c
    return acc


def _polish(coeffs, x, iterations=3):
    deriv = np.polyder(np.asarray(coeffs, dtype=float))
    best, best_res = x, abs(polyval(coeffs, x))
    for _ in range(iterations):
        slope = polyval(deriv, x)
        if slope == 0.0:
            break
        x = x - polyval(coeffs, x) / slope
        res = abs(polyval(coeffs, x))
        if res < best_res:
            best, best_res = x, res
        else:
            break
    return best


def companion_roots(coeffs) -> np.ndarray:
    """All complex roots of a polynomial.

    Leading zero coefficients are dropped first, so a cubic with vanishing
    top coefficient is solved as a quadratic.  Near-real roots are snapped
    to the real axis and refined by Newton steps on the original
    coefficients.
    """
    c = np.trim_zeros(np.asarray(coeffs, dtype=float), "f")
    n = len(c) - 1
    if n < 1:
        return np.empty(0, dtype=complex)
    monic = c[1:] / c[0]
    comp = np.zeros((n, n))
    comp[0, :] = -monic
    comp[np.arange(1, n), np.arange(n - 1)] = 1.0
    roots = np.linalg.eigvals(comp).astype(complex)
    out = np.empty(n, dtype=complex)
    for j, r in enumerate(roots):
        if abs(r.imag) < REAL_TOL * max(1.0, abs(r)):
            out[j] = _polish(c, r.real)
        else:
            out[j] = r
    return out


def is_real(root: complex) -> bool:
    return abs(root.imag) < REAL_TOL * max(1.0, abs(root))
