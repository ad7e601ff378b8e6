"""Interaction-bound pairs.

A bound state decays as alpha**(|i|-1) away from the origin of the relative
coordinate, where alpha is a real root of the characteristic cubic

    J_K V a^3 + (V U - J_K^2) a^2 + J_K (V + U) a + J_K^2 = 0

with |alpha| < 1.  Its energy is -J_K (1 + alpha^2) / alpha.

At most two such roots exist.  They are labelled by family: family 1 is the
root continuously connected (along J_K, i.e. along |K|) to the bound state
at K = 0, family 2 is the other one.  When two bound states already exist at
K = 0, family 2 is the one lying on the side of the continuum selected by
the sign of W = UV/(U+2V), or the more weakly bound one if both lie on the
same side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import (
    CaseMismatchError,
    FlatBandError,
    SingularAmplitudeError,
    WUndefinedError,
)
from .model import KSector, ModelParams, k_sector, sector_from_jk
from .polyroots import companion_roots, is_real, polyval
from .scattering import pair_coupling_W, resonance_momentum

#: Roots with 1 - THRESHOLD_EPS <= |alpha| <= 1 sit on the continuum edge.
THRESHOLD_EPS = 1e-9
#: Below |V| < DEGREE_TOL * J the cubic is solved as a quadratic.
DEGREE_TOL = 1e-14
#: Below J_K < FLAT_BAND_TOL * J only the band-edge limit is available.
FLAT_BAND_TOL = 1e-12
PHI0_TOL = 1e-12
_TRACK_FLOOR = 1e-7


@dataclass(frozen=True)
class BoundState:
    alpha: float
    energy: float
    phi0: float
    norm: float
    family: int


@dataclass(frozen=True)
class RootInfo:
    alpha: complex
    status: str  # "bound", "threshold", "unbound" or "complex"


@dataclass(frozen=True)
class ExistenceReport:
    W: float
    Kc: Optional[float]
    family2_all_K: bool
    K_grid: np.ndarray = field(repr=False)
    n_states: np.ndarray = field(repr=False)
    resonance: Optional[float]
    family2_side: Optional[str]


def characteristic_cubic(params: ModelParams, sector: KSector) -> tuple:
    """Coefficients (a^3, a^2, a, 1) of the characteristic cubic."""
    return _cubic(params.U, params.V, sector.JK)


def _cubic(U, V, JK):
    return (JK * V, V * U - JK**2, JK * (V + U), JK**2)


def _scaled_roots(U, V, J, JK):
    """Roots x = alpha / J_K of the cubic divided through by J_K^2.

    In this variable the two physical roots stay O(1/|U|), O(1/|V|) as
    J_K -> 0, which keeps them resolvable near the flat band.
    """
    if abs(V) < DEGREE_TOL * J:
        return companion_roots((V * U - JK**2, V + U, 1.0))
    return companion_roots((JK**2 * V, V * U - JK**2, V + U, 1.0))


def _roots(U, V, J, JK):
    return JK * _scaled_roots(U, V, J, JK)


def _status(root: complex) -> str:
    if not is_real(root):
        return "complex"
    m = abs(root.real)
    if m < 1.0 - THRESHOLD_EPS:
        return "bound"
    if m <= 1.0:
        return "threshold"
    return "unbound"


def classify_roots(params: ModelParams, sector: KSector) -> list[RootInfo]:
    """Every root of the characteristic polynomial with its classification."""
    roots = _roots(params.U, params.V, params.J, sector.JK)
    return [RootInfo(alpha=complex(r), status=_status(r)) for r in roots]


def _bound_alphas(U, V, J, JK) -> list[float]:
    return [r.real for r in _roots(U, V, J, JK) if _status(r) == "bound"]


def bound_energy(JK: float, alpha: float) -> float:
    return -JK * (1.0 + alpha**2) / alpha


def _family_two_index(U, V, J, alphas) -> int:
    """Which of two bound roots at K = 0 belongs to family 2."""
    JK = 2.0 * J
    energies = [bound_energy(JK, a) for a in alphas]
    try:
        W = pair_coupling_W(ModelParams(J=J, U=U, V=V))
    except WUndefinedError:
        W = None
    if W and energies[0] * energies[1] < 0.0:
        return 0 if math.copysign(1.0, energies[0]) == math.copysign(1.0, W) else 1
    return int(abs(alphas[1]) > abs(alphas[0]))


def _max_step(J, JK):
    return min(0.05 * J, 0.5 * JK)


def _march(U, V, J, jk, x, slope, jk_to, record=None):
    """Follow one real scaled root x = alpha/J_K from ``jk`` down to ``jk_to``."""
    while jk > jk_to:
        h = min(_max_step(J, jk), jk - jk_to)
        while True:
            jn = jk_to if h >= jk - jk_to else jk - h
            pred = x + slope * (jn - jk)
            roots = _scaled_roots(U, V, J, jn)
            dist = np.abs(roots - pred)
            order = np.argsort(dist)
            best = roots[order[0]]
            clear = len(roots) == 1 or dist[order[0]] <= 0.25 * dist[order[1]]
            if (clear and is_real(best)) or h < 1e-15 * J:
                break
            h *= 0.5
        slope = (best.real - x) / (jn - jk)
        jk, x = jn, best.real
        if record is not None:
            record.append((jk, x, slope))
    return x, slope


@lru_cache(maxsize=256)
def _family_one_path(U: float, V: float, J: float):
    """Nodes (J_K, alpha/J_K, slope) of family 1 from J_K = 2J to a small floor."""
    JK0 = 2.0 * J
    alphas = _bound_alphas(U, V, J, JK0)
    if not alphas:
        return None
    if len(alphas) >= 2:
        two = _family_two_index(U, V, J, alphas[:2])
        alpha0 = alphas[1 - two]
    else:
        alpha0 = alphas[0]
    nodes = [(JK0, alpha0 / JK0, 0.0)]
    _march(U, V, J, JK0, alpha0 / JK0, 0.0, _TRACK_FLOOR * J, record=nodes)
    return tuple(nodes)


def _family_one_alpha(U, V, J, JK) -> Optional[float]:
    path = _family_one_path(float(U), float(V), float(J))
    if path is None:
        return None
    jks = np.array([p[0] for p in path])
    # nodes are descending in J_K; start from the last node not below JK
    idx = int(np.searchsorted(-jks, -JK, side="right")) - 1
    jk, x, slope = path[max(idx, 0)]
    if jk != JK:
        x, _ = _march(U, V, J, jk, x, slope, JK)
    return JK * x


def make_bound_state(params: ModelParams, JK: float, alpha: float, family: int) -> BoundState:
    den = params.U * alpha + JK * (alpha**2 + 1.0)
    phi0 = 2.0 * JK * alpha / den if abs(den) >= PHI0_TOL * params.J else math.inf
    norm = (phi0**2 + 2.0 / (1.0 - alpha**2)) ** -0.5
    return BoundState(
        alpha=alpha,
        energy=bound_energy(JK, alpha),
        phi0=phi0,
        norm=norm,
        family=family,
    )


def bound_states(params: ModelParams, sector: KSector) -> list[BoundState]:
    """Bound states at a fixed center-of-mass momentum, ordered by family."""
    J, JK = params.J, sector.JK
    if JK < FLAT_BAND_TOL * J:
        raise FlatBandError("flat band: use band_edge_limit for J_K -> 0")
    alphas = _bound_alphas(params.U, params.V, J, JK)
    if not alphas:
        return []
    tracked = _family_one_alpha(params.U, params.V, J, JK)
    if tracked is not None:
        alphas.sort(key=lambda a: abs(a - tracked))
    else:
        alphas.sort(key=abs)
    # a third bound root would contradict the two-family picture; keep it visible
    return [make_bound_state(params, JK, a, n + 1) for n, a in enumerate(alphas)]


def bound_wavefunction(state: BoundState, r_index):
    """Normalized relative-coordinate amplitude psi(r_i) of a bound state."""
    i = np.abs(np.asarray(r_index))
    if math.isinf(state.phi0):
        raise SingularAmplitudeError("phi0 singular: U alpha + J_K (alpha^2 + 1) = 0")
    with np.errstate(divide="ignore"):
        psi = state.norm * np.where(
            i == 0, state.phi0, np.power(state.alpha, np.maximum(i - 1, 0).astype(float))
        )
    return psi if psi.ndim else float(psi)


def cubic_residual(params: ModelParams, sector: KSector, alpha: float) -> float:
    return abs(polyval(characteristic_cubic(params, sector), alpha))


def band_edge_limit(params: ModelParams) -> dict[int, float]:
    """Family energies in the limit J_K -> 0 (K -> +-pi/d).

    Evaluated at J_K = 1e-6 J and 2e-6 J and extrapolated linearly to zero.
    """
    h = 1e-6 * params.J
    near = {s.family: s.energy for s in bound_states(params, sector_from_jk(params, h))}
    far = {s.family: s.energy for s in bound_states(params, sector_from_jk(params, 2 * h))}
    return {f: 2.0 * near[f] - far[f] for f in sorted(near) if f in far}


def existence_report(params: ModelParams, K_grid) -> ExistenceReport:
    """W, critical momentum K_c and the number of bound families across ``K_grid``."""
    W = pair_coupling_W(params)
    res = resonance_momentum(params)
    resonance = res.top if W > 0 else res.bottom
    if abs(W / (2.0 * params.J)) <= 1.0:
        Kc, all_K = resonance, False
    else:
        Kc, all_K = None, True
    K_grid = np.asarray(K_grid, dtype=float)
    counts = np.empty(len(K_grid), dtype=int)
    for n, K in enumerate(K_grid):
        sector = k_sector(params, K)
        if sector.JK < FLAT_BAND_TOL * params.J:
            counts[n] = len(band_edge_limit(params))
        else:
            counts[n] = len(bound_states(params, sector))
    side = None
    if W != 0.0 and params.U != 0.0 and params.V != 0.0:
        side = "above" if W > 0 else "below"
    return ExistenceReport(
        W=W,
        Kc=Kc,
        family2_all_K=all_K,
        K_grid=K_grid,
        n_states=counts,
        resonance=resonance if not all_K else None,
        family2_side=side,
    )


def special_case_reference(params: ModelParams, sector: KSector, case_id) -> list[BoundState]:
    """Closed-form bound states for the three analytically solvable cases.

    ``case_id`` is "i" (V = 0), "ii" (|U| -> infinity) or "iii" (U = -V).
    """
    U, V, J, JK = params.U, params.V, params.J, sector.JK
    case = {1: "i", 2: "ii", 3: "iii"}.get(case_id, str(case_id).lower())
    if JK <= 0.0:
        raise FlatBandError("flat band: closed forms need J_K > 0")
    if case == "i":
        if V != 0.0:
            raise CaseMismatchError("case (i) requires V = 0")
        if U == 0.0:
            return []
        E = math.copysign(math.sqrt(U**2 + 4.0 * JK**2), U)
        return [make_bound_state(params, JK, (U - E) / (2.0 * JK), 1)]
    if case == "ii":
        if abs(U) < 1e6 * max(J, abs(V)) or V == 0.0:
            raise CaseMismatchError("case (ii) requires |U| >= 1e6 max(J, |V|) and V != 0")
        out = [BoundState(alpha=0.0, energy=U, phi0=math.inf, norm=0.0, family=1)]
        if abs(JK / V) < 1.0:
            a2 = -JK / V
            out.append(BoundState(alpha=a2, energy=V + JK**2 / V, phi0=0.0,
                                  norm=math.sqrt(0.5 * (1.0 - a2**2)), family=2))
        return out
    if case == "iii":
        if U == 0.0 or abs(U + V) > 1e-12 * max(abs(U), abs(V)):
            raise CaseMismatchError("case (iii) requires U = -V != 0")
        E1 = math.copysign(math.sqrt(V**2 + 4.0 * JK**2), V)
        out = [make_bound_state(params, JK, (V - E1) / (2.0 * JK), 1)]
        if abs(JK / U) < 1.0:
            out.append(make_bound_state(params, JK, -JK / U, 2))
        return out
    raise ValueError(f"unknown case {case_id!r}")
