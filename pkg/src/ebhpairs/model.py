"""Model parameters, center-of-mass sectors and the two-particle continuum."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BandEdgeError, BrillouinZoneError


@dataclass(frozen=True)
class ModelParams:
    """Couplings of the extended Bose-Hubbard chain.

    Parameters
    ----------
    J : float
        Tunnel coupling between adjacent sites, J > 0.
    U : float
        On-site interaction (either sign).
    V : float
        Nearest-neighbour interaction (either sign).
    d : float
        Lattice constant, d > 0.
    """

    J: float = 1.0
    U: float = 0.0
    V: float = 0.0
    d: float = 1.0

    def __post_init__(self):
        if not self.J > 0:
            raise ValueError(f"J must be positive, got {self.J}")
        if not self.d > 0:
            raise ValueError(f"d must be positive, got {self.d}")

    def flipped(self) -> "ModelParams":
        """Return the parameters with (U, V) -> (-U, -V)."""
        return ModelParams(J=self.J, U=-self.U, V=-self.V, d=self.d)


@dataclass(frozen=True)
class KSector:
    """Fixed center-of-mass quasimomentum K and its effective hopping J_K."""

    K: float
    JK: float
    d: float = 1.0


@dataclass(frozen=True)
class ContinuumBand:
    E_min: float
    E_max: float

    @property
    def width(self) -> float:
        return self.E_max - self.E_min


def effective_hopping(J: float, K: float, d: float = 1.0) -> float:
    # 2J cos(Kd/2) written as a sine so that |K|d = pi gives exactly zero
    return 2.0 * J * math.sin(0.5 * (math.pi - abs(K * d)))


def k_sector(params: ModelParams, K: float) -> KSector:
    """Build the sector with J_K = 2 J cos(K d / 2).

    Quasimomenta outside the first Brillouin zone are rejected rather than
    folded back.
    """
    if abs(K * params.d) > math.pi * (1.0 + 1e-15):
        raise BrillouinZoneError(f"|K d| = {abs(K * params.d)} exceeds pi")
    Kd = max(-math.pi, min(math.pi, K * params.d))
    K = Kd / params.d
    return KSector(K=K, JK=effective_hopping(params.J, K, params.d), d=params.d)


def sector_from_jk(params: ModelParams, JK: float) -> KSector:
    """Sector with K >= 0 whose effective hopping equals ``JK``."""
    if not 0.0 <= JK <= 2.0 * params.J:
        raise ValueError(f"JK must lie in [0, 2J], got {JK}")
    K = 2.0 * math.acos(JK / (2.0 * params.J)) / params.d
    return KSector(K=K, JK=JK, d=params.d)


def continuum_band(sector: KSector) -> ContinuumBand:
    return ContinuumBand(E_min=-2.0 * sector.JK, E_max=2.0 * sector.JK)


def continuum_energy(sector: KSector, k: float) -> float:
    """Two-particle scattering energy -2 J_K cos(k d)."""
    kd = k * sector.d
    if not -1e-15 <= kd <= math.pi * (1.0 + 1e-15):
        raise ValueError(f"k d must lie in [0, pi], got {kd}")
    return -2.0 * sector.JK * math.cos(kd)


def density_of_states(sector: KSector, E: float) -> float:
    """Density of states d(kd)/dE = [(2 J_K)^2 - E^2]^(-1/2).

    Normalized so that the integral over the band equals pi.
    """
    half_width = 2.0 * sector.JK
    if abs(E) >= half_width:
        raise BandEdgeError(
            f"band-edge singularity: |E| = {abs(E)} >= 2 J_K = {half_width}"
        )
    return 1.0 / math.sqrt((half_width - E) * (half_width + E))
