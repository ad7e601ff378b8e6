"""Scattering states of a pair: phase shifts, amplitudes, cross-sections,
band-edge scattering lengths and resonance momenta.

Momenta ``k`` are relative quasimomenta in units of 1/length; every formula
depends on them only through ``k * d`` which must lie strictly inside
(0, pi) for the phase shifts to be defined.  Scalar or array ``k`` are both
accepted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    BandEdgeError,
    FlatBandError,
    SingularAmplitudeError,
    WUndefinedError,
)
from .model import KSector, ModelParams

#: Denominator threshold (units of J^2) below which a scattering length diverges.
DIVERGENCE_TOL = 1e-12
#: |cos(kd + delta0)| below which the r = 0 amplitude is reported as singular.
AMPLITUDE_TOL = 1e-12
_EDGE_TOL = 1e-15


@dataclass(frozen=True)
class PhaseShifts:
    delta0: float | np.ndarray
    delta: float | np.ndarray


@dataclass(frozen=True)
class ScatteringState:
    sector: KSector
    k: float
    energy: float
    shifts: PhaseShifts
    sigma: float

    @property
    def amplitude(self) -> complex:
        """Scattering amplitude f = (exp(2 i delta) - 1) / 2."""
        return 0.5 * (np.exp(2j * self.shifts.delta) - 1.0)


@dataclass(frozen=True)
class ScatteringLengths:
    a0: float
    a_pi: float
    finite0: bool
    finite_pi: bool


@dataclass(frozen=True)
class ResonanceMomenta:
    """Center-of-mass momenta where a band-edge scattering length diverges.

    ``bottom`` belongs to the kd -> 0 edge and ``top`` to kd -> pi; either is
    None when the corresponding condition cannot be met.
    """

    bottom: Optional[float]
    top: Optional[float]


def fold_half_pi(angle):
    """Map an angle defined modulo pi onto (-pi/2, pi/2]."""
    a = np.asarray(angle, dtype=float)
    a = np.where(a > 0.5 * np.pi, a - np.pi, a)
    a = np.where(a <= -0.5 * np.pi, a + np.pi, a)
    return a if a.ndim else float(a)


def _check_sector(sector: KSector) -> None:
    if sector.JK <= 0.0:
        raise FlatBandError("flat band: J_K = 0, phase shifts are undefined")


def _kd(sector: KSector, k):
    kd = np.asarray(k, dtype=float) * sector.d
    if np.any(kd <= _EDGE_TOL) or np.any(kd >= math.pi - _EDGE_TOL):
        raise BandEdgeError("band-edge momentum: k d must lie strictly inside (0, pi)")
    return kd


def _tan_delta_terms(params: ModelParams, JK: float, kd):
    """Numerator and denominator whose ratio is tan(delta)."""
    U, V = params.U, params.V
    c = np.cos(kd)
    s = np.sin(kd)
    num = JK * U + (2.0 * JK * c + U) * V * c
    den = (U * V - 2.0 * JK * (JK - V * c)) * s
    return num, den


def phase_shifts(params: ModelParams, sector: KSector, k) -> PhaseShifts:
    """Phase shifts delta0 (on-site part only) and delta (full) at momentum k.

    Both are principal values in (-pi/2, pi/2]; only tan(delta) is physical.
    """
    _check_sector(sector)
    kd = _kd(sector, k)
    JK = sector.JK
    delta0 = fold_half_pi(np.arctan2(-params.U, 2.0 * JK * np.sin(kd)))
    num, den = _tan_delta_terms(params, JK, kd)
    delta = fold_half_pi(np.arctan2(num, den))
    return PhaseShifts(delta0=delta0, delta=delta)


def phase_shift_sweep(params: ModelParams, sector: KSector, k, continuous=False):
    """Phase shifts on an ordered grid of momenta.

    With ``continuous=True`` delta and delta0 are unwrapped along the grid
    (period pi) instead of being folded to the principal branch.
    """
    shifts = phase_shifts(params, sector, np.atleast_1d(np.asarray(k, dtype=float)))
    if not continuous:
        return shifts
    return PhaseShifts(
        delta0=np.unwrap(shifts.delta0, period=np.pi),
        delta=np.unwrap(shifts.delta, period=np.pi),
    )


def cross_section(params: ModelParams, sector: KSector, k):
    """Cross-section sigma = sin^2(delta), in [0, 1]."""
    return np.sin(phase_shifts(params, sector, k).delta) ** 2


def scattering_state(params: ModelParams, sector: KSector, k: float) -> ScatteringState:
    shifts = phase_shifts(params, sector, k)
    return ScatteringState(
        sector=sector,
        k=k,
        energy=-2.0 * sector.JK * math.cos(k * sector.d),
        shifts=shifts,
        sigma=math.sin(shifts.delta) ** 2,
    )


def scattering_wavefunction(params: ModelParams, sector: KSector, k: float, r_index):
    """Relative-coordinate amplitude of the scattering state at sites ``r_index``.

    Off-site amplitudes are cos(k|r| + delta) (unit amplitude convention);
    the on-site amplitude is fixed by the r = 0 equation.
    """
    shifts = phase_shifts(params, sector, k)
    kd = k * sector.d
    i = np.abs(np.asarray(r_index))
    psi = np.cos(kd * i + shifts.delta)
    if np.any(i == 0):
        edge = math.cos(kd + shifts.delta0)
        if abs(edge) < AMPLITUDE_TOL:
            raise SingularAmplitudeError(
                f"amplitude singular: cos(kd + delta0) = {edge:.3e} at kd = {kd}"
            )
        psi0 = math.cos(shifts.delta0) * math.cos(kd + shifts.delta) / edge
        psi = np.where(i == 0, psi0, psi)
    return psi if psi.ndim else float(psi)


def sigma_zero_momenta(params: ModelParams, sector: KSector) -> list[float]:
    """Values of k d in (0, pi) where the cross-section vanishes."""
    U, V, JK = params.U, params.V, sector.JK
    if U * V == 0.0 or JK <= 0.0:
        return []
    ratio = 8.0 * JK**2 / (U * V)
    if ratio > 1.0 or ratio < 0.0:
        return []
    root = math.sqrt(1.0 - ratio)
    cosines = sorted({-U / (4.0 * JK) * (1.0 + root), -U / (4.0 * JK) * (1.0 - root)})
    if len(cosines) == 2 and abs(cosines[1] - cosines[0]) < 1e-12:
        cosines = [0.5 * (cosines[0] + cosines[1])]
    out = []
    for c in cosines:
        if -1.0 < c < 1.0:
            kd = math.acos(c)
            _, den = _tan_delta_terms(params, JK, kd)
            if den != 0.0:
                out.append(kd)
    return sorted(out)


def hard_core_momentum(params: ModelParams, sector: KSector) -> Optional[float]:
    """Interior k d where |delta| = pi/2 (sigma = 1), if it exists.

    Solves cos(kd) = J_K/V - U/(2 J_K); the band-edge limits are excluded.
    """
    U, V, JK = params.U, params.V, sector.JK
    if V == 0.0 or JK <= 0.0:
        return None
    c = JK / V - U / (2.0 * JK)
    if not -1.0 < c < 1.0:
        return None
    return math.acos(c)


def scattering_lengths(
    params: ModelParams, sector: KSector, tol: float = DIVERGENCE_TOL
) -> ScatteringLengths:
    """Generalized 1D scattering lengths at the bottom (kd->0) and top (kd->pi)
    of the continuum, in units of length.

    A length whose denominator falls below ``tol * J**2`` is flagged as
    divergent and its value set to NaN.
    """
    _check_sector(sector)
    U, V, JK, d = params.U, params.V, sector.JK, params.d
    num0 = U * V - 2.0 * JK * (JK - V)
    den0 = U * V + JK * (U + 2.0 * V)
    num_pi = U * V - 2.0 * JK * (JK + V)
    den_pi = U * V - JK * (U + 2.0 * V)
    threshold = tol * params.J**2
    finite0 = abs(den0) >= threshold
    finite_pi = abs(den_pi) >= threshold
    return ScatteringLengths(
        a0=num0 / den0 * d if finite0 else math.nan,
        a_pi=num_pi / den_pi * d if finite_pi else math.nan,
        finite0=finite0,
        finite_pi=finite_pi,
    )


def pair_coupling_W(params: ModelParams) -> float:
    """W = UV / (U + 2V); zero for the noninteracting pair."""
    U, V = params.U, params.V
    if U + 2.0 * V == 0.0:
        if U * V == 0.0:
            return 0.0
        raise WUndefinedError(f"W undefined: U + 2V = 0 with U = {U}, V = {V}")
    return U * V / (U + 2.0 * V)


def resonance_momentum(params: ModelParams) -> ResonanceMomenta:
    """K_R = (2/d) arccos(-+W/2J) for the kd -> 0 and kd -> pi edges."""
    W = pair_coupling_W(params)

    def edge(arg):
        if 0.0 <= arg <= 1.0:
            return 2.0 * math.acos(arg) / params.d
        return None

    x = W / (2.0 * params.J)
    return ResonanceMomenta(bottom=edge(-x), top=edge(x))
