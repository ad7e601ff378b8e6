"""Finite-lattice exact diagonalization of the relative-coordinate problem.

The three-term difference equation is written as an L x L matrix on sites
i = -(L-1)/2 ... (L-1)/2 and diagonalized densely.  Nothing here uses the
analytic bound-state or phase-shift results, so the spectra serve as an
independent check on them.

Bosonic pairs have even wavefunctions psi(-i) = psi(i).  The ring is
reflection symmetric, so the matrix is block-diagonalized into even and odd
sectors and bound-state candidates are reported for the even (bosonic)
sector; odd-sector candidates, which would belong to a hard-core/fermionic
pair, are kept separately.

The continuum edges of an odd ring are not symmetric: the bottom state
E = -2 J_K is exact while the top one sits at 2 J_K cos(pi / L).
"""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

from .errors import OracleError
from .model import KSector, ModelParams

GAP_TOL = 1e-6
IPR_FACTOR = 10.0
FIT_RANGE = (3, 20)


@dataclass(frozen=True)
class RelativeHamiltonian:
    L: int
    params: ModelParams
    sector: KSector
    matrix: np.ndarray = field(repr=False)
    boundary_mode: str = "ring"

    @property
    def sites(self) -> np.ndarray:
        m = (self.L - 1) // 2
        return np.arange(-m, m + 1)

    def dump(self, path) -> None:
        """Write nonzero entries as 'row col value' lines (0-based indices)."""
        rows, cols = np.nonzero(self.matrix)
        with open(path, "w") as fh:
            fh.write(f"# L={self.L} K={float(self.sector.K)!r} JK={float(self.sector.JK)!r} "
                     f"boundary={self.boundary_mode}\n")
            for r, c in zip(rows, cols):
                fh.write(f"{r} {c} {float(self.matrix[r, c])!r}\n")


@dataclass(frozen=True)
class OracleSpectrum:
    eigenvalues: np.ndarray
    parity: np.ndarray
    bound_candidates: np.ndarray
    bound_vectors: np.ndarray = field(repr=False)
    localization: np.ndarray
    odd_bound_candidates: np.ndarray
    ipr: np.ndarray = field(repr=False)


def build_hamiltonian(
    params: ModelParams, sector: KSector, L: int, boundary_mode: str = "ring"
) -> RelativeHamiltonian:
    if L % 2 == 0 or L < 11:
        raise ValueError(f"L must be odd and at least 11, got {L}")
    if boundary_mode not in ("ring", "open"):
        raise ValueError(f"boundary_mode must be 'ring' or 'open', got {boundary_mode!r}")
    m = (L - 1) // 2
    JK = sector.JK
    h = np.zeros((L, L))
    idx = np.arange(L - 1)
    h[idx, idx + 1] = -JK
    h[idx + 1, idx] = -JK
    if boundary_mode == "ring":
        h[0, L - 1] = h[L - 1, 0] = -JK
    h[m, m] += params.U
    h[m - 1, m - 1] += params.V
    h[m + 1, m + 1] += params.V
    return RelativeHamiltonian(L=L, params=params, sector=sector, matrix=h, boundary_mode=boundary_mode)


def _parity_bases(L: int):
    """Orthonormal bases (columns) of the even and odd subspaces under i -> -i."""
    m = (L - 1) // 2
    even = np.zeros((L, m + 1))
    odd = np.zeros((L, m))
    even[m, 0] = 1.0
    s = np.sqrt(0.5)
    for j in range(1, m + 1):
        even[m + j, j] = even[m - j, j] = s
        odd[m + j, j - 1] = s
        odd[m - j, j - 1] = -s
    return even, odd


def _eigh(h: RelativeHamiltonian, block: np.ndarray):
    try:
        return np.linalg.eigh(block)
    except np.linalg.LinAlgError as exc:
        fd, path = tempfile.mkstemp(prefix="ebh_oracle_", suffix=".txt")
        os.close(fd)
        h.dump(path)
        raise OracleError(f"eigensolver did not converge; matrix dumped to {path}") from exc


def fit_decay(psi: np.ndarray, L: int, fit_range=FIT_RANGE) -> float:
    """|alpha| from a log-linear fit of |psi(r_i)| over fit_range[0] <= |i| <= fit_range[1].

    Points below 1e-10 of the peak amplitude are dropped since they are
    dominated by round-off.
    """
    m = (L - 1) // 2
    lo, hi = fit_range
    hi = min(hi, m)
    i = np.arange(lo, hi + 1)
    amp = 0.5 * (np.abs(psi[m + i]) + np.abs(psi[m - i]))
    keep = amp > 1e-10 * np.abs(psi).max()
    if keep.sum() < 2:
        return float("nan")
    slope = np.polyfit(i[keep], np.log(amp[keep]), 1)[0]
    return float(np.exp(slope))


def spectrum(h: RelativeHamiltonian, gap_tol: float = GAP_TOL, ipr_gate: bool = False) -> OracleSpectrum:
    """Full spectrum with parity labels and bound-state candidates.

    A candidate lies more than ``gap_tol * J`` outside the continuum
    [-2 J_K, 2 J_K].  The inverse participation ratio of every eigenvector
    is reported; with ``ipr_gate=True`` candidates must also have IPR above
    10 / L, which rejects weakly bound states whose decay length exceeds
    roughly L / 20.
    """
    L = h.L
    even, odd = _parity_bases(L)
    vals, vecs, par = [], [], []
    for basis, p in ((even, 1), (odd, -1)):
        w, v = _eigh(h, basis.T @ h.matrix @ basis)
        vals.append(w)
        vecs.append(basis @ v)
        par.append(np.full(len(w), p))
    vals = np.concatenate(vals)
    vecs = np.concatenate(vecs, axis=1)
    par = np.concatenate(par)
    order = np.argsort(vals, kind="stable")
    vals, vecs, par = vals[order], vecs[:, order], par[order]

    ipr = np.sum(vecs**4, axis=0) / np.sum(vecs**2, axis=0) ** 2
    candidate = np.abs(vals) - 2.0 * h.sector.JK > gap_tol * h.params.J
    if ipr_gate:
        candidate &= ipr > IPR_FACTOR / L
    even_c = candidate & (par == 1)
    bound_vecs = vecs[:, even_c]
    loc = np.array([fit_decay(bound_vecs[:, n], L) for n in range(bound_vecs.shape[1])])
    return OracleSpectrum(
        eigenvalues=vals,
        parity=par,
        bound_candidates=vals[even_c],
        bound_vectors=bound_vecs,
        localization=loc,
        odd_bound_candidates=vals[candidate & (par == -1)],
        ipr=ipr,
    )


def residual_check(params: ModelParams, sector: KSector, psi, E: float) -> float:
    """Largest residual of the difference equation over interior sites.

    ``psi`` holds amplitudes on i = -i_max ... i_max (odd length, centred on
    r = 0); the two end sites only enter as neighbours.
    """
    psi = np.asarray(psi, dtype=float)
    n = len(psi)
    if n % 2 == 0 or n < 3:
        raise ValueError("psi must have odd length >= 3 centred on r = 0")
    m = (n - 1) // 2
    i = np.arange(-m, m + 1)
    pot = np.where(i == 0, params.U, 0.0) + np.where(np.abs(i) == 1, params.V, 0.0)
    res = -sector.JK * (psi[:-2] + psi[2:]) + (pot[1:-1] - E) * psi[1:-1]
    return float(np.max(np.abs(res)))
