"""Cross-check suite: closed forms, exact diagonalization, residuals and
symmetries.  Each check reports the measured error next to its tolerance.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass
from typing import Callable, Optional

import numpy as np

from .bound import band_edge_limit, bound_states, bound_wavefunction
from .errors import SingularAmplitudeError
from .model import ModelParams, k_sector
from .oracle import build_hamiltonian, residual_check, spectrum
from .scattering import (
    cross_section,
    hard_core_momentum,
    pair_coupling_W,
    phase_shifts,
    scattering_lengths,
    scattering_wavefunction,
    sigma_zero_momenta,
)

# interior K values, symmetric about zero, avoiding the flat band at +-pi
K_GRID_21 = np.linspace(-math.pi, math.pi, 23)[1:-1]
K_GRID_ORACLE = np.linspace(0.0, math.pi, 11)
UV_GRID_5 = (-4.0, -2.0, 0.0, 2.0, 4.0)
QUADRANT_SETS = ((2, 2), (-2, -2), (2, -2), (-2, 2), (4, 1), (-4, -1), (1, -4), (-1, 4))


@dataclass
class CheckResult:
    name: str
    error: float
    tolerance: float
    passed: bool
    seconds: float = 0.0
    detail: str = ""

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return (f"{flag} {self.name}: error={self.error:.3e} tol={self.tolerance:.1e} "
                f"({self.seconds:.2f}s) {self.detail}").rstrip()

    def as_dict(self) -> dict:
        d = asdict(self)
        for key in ("error", "tolerance"):
            if not math.isfinite(d[key]):
                d[key] = None
        return d


def _result(name, error, tol, t0, detail="", passed=None):
    if passed is None:
        passed = bool(error <= tol)
    return CheckResult(name, float(error), float(tol), bool(passed), time.perf_counter() - t0, detail)


def _angle_gap(a, b):
    """Distance between angles defined modulo pi."""
    d = np.mod(np.asarray(a) - np.asarray(b) + 0.5 * np.pi, np.pi) - 0.5 * np.pi
    return np.abs(d)


def check_case_i(tol=1e-10, J=1.0) -> CheckResult:
    t0 = time.perf_counter()
    err, bad = 0.0, 0
    for U in (1, -1, 2, -2, 4, -4, 8, -8):
        p = ModelParams(J=J, U=U * J, V=0.0)
        for K in K_GRID_21:
            s = k_sector(p, K)
            states = bound_states(p, s)
            if len(states) != 1:
                bad += 1
                continue
            exact = math.copysign(math.sqrt(p.U**2 + 4 * s.JK**2), p.U)
            err = max(err, abs(states[0].energy - exact) / J)
    return _result("case (i) energies", err, tol, t0, f"count mismatches={bad}",
                   passed=err <= tol and bad == 0)


def check_case_iii(tol=1e-10, J=1.0) -> CheckResult:
    t0 = time.perf_counter()
    err, bad = 0.0, 0
    for U in (1, -1, 2, -2, 4, -4):
        p = ModelParams(J=J, U=U * J, V=-U * J)
        for K in K_GRID_21:
            s = k_sector(p, K)
            states = bound_states(p, s)
            E1 = math.copysign(math.sqrt(p.V**2 + 4 * s.JK**2), p.V)
            expect = [((p.V - E1) / (2 * s.JK), E1)]
            if abs(s.JK / p.U) < 1:
                expect.append((-s.JK / p.U, p.U + s.JK**2 / p.U))
            if len(states) != len(expect):
                bad += 1
                continue
            for st, (a, E) in zip(states, expect):
                err = max(err, abs(st.alpha - a), abs(st.energy - E) / J)
    return _result("case (iii) alphas and energies", err, tol, t0, f"count mismatches={bad}",
                   passed=err <= tol and bad == 0)


def check_case_ii(tol=1e-4, J=1.0, U=1e6) -> CheckResult:
    t0 = time.perf_counter()
    err, bad = 0.0, 0
    for V in (2, -2, 4, -4):
        p = ModelParams(J=J, U=U * J, V=V * J)
        for K in K_GRID_21:
            s = k_sector(p, K)
            states = bound_states(p, s)
            # at finite U the family-2 threshold moves slightly past |J_K/V| = 1,
            # so only a missing predicted state counts as a mismatch
            if len(states) < 1 + (abs(s.JK / p.V) < 1):
                bad += 1
                continue
            err = max(err, abs(states[0].energy - p.U) / abs(p.U))
            if len(states) == 2:
                err = max(err, abs(states[1].energy - (p.V + s.JK**2 / p.V)) / J)
    return _result("case (ii) asymptotics", err, tol, t0, f"count mismatches={bad}",
                   passed=err <= tol and bad == 0)


def _cubic_levels(p, s):
    if s.JK < 1e-12 * p.J:
        levels = band_edge_limit(p)
        return sorted(levels.values()), [0.0] * len(levels)
    states = sorted(bound_states(p, s), key=lambda b: b.energy)
    return [b.energy for b in states], [b.alpha for b in states]


def oracle_comparison(param_sets, K_grid=K_GRID_ORACLE, L=201, alpha_max=0.9):
    """Largest energy deviation (for |alpha| <= alpha_max) and count mismatches."""
    err, mismatches = 0.0, []
    for p in param_sets:
        for K in K_grid:
            s = k_sector(p, K)
            levels, alphas = _cubic_levels(p, s)
            oracle = np.sort(spectrum(build_hamiltonian(p, s, L)).bound_candidates)
            if len(oracle) != len(levels):
                mismatches.append((p.U, p.V, float(K)))
                continue
            for E, a, Eo in zip(levels, alphas, oracle):
                if abs(a) <= alpha_max:
                    err = max(err, abs(E - Eo) / p.J)
    return err, mismatches


def check_oracle(tol=1e-8, L=201, param_sets=None, name="oracle equivalence") -> CheckResult:
    t0 = time.perf_counter()
    if param_sets is None:
        param_sets = [ModelParams(U=U, V=V) for U in UV_GRID_5 for V in UV_GRID_5]
    err, mism = oracle_comparison(param_sets, L=L)
    detail = f"count mismatches={len(mism)}" + (f" first={mism[0]}" if mism else "")
    return _result(name, err, tol, t0, detail, passed=err <= tol and not mism)


def check_v0_reduction(tol=1e-13) -> CheckResult:
    t0 = time.perf_counter()
    Ks = np.linspace(-math.pi, math.pi, 66)[1:-1]
    kd = np.linspace(0.0, math.pi, 66)[1:-1]
    err = 0.0
    for U in (2.0, -2.0, 6.0, -6.0):
        p = ModelParams(U=U, V=0.0)
        for K in Ks:
            sh = phase_shifts(p, k_sector(p, K), kd)
            err = max(err, float(np.max(_angle_gap(sh.delta, sh.delta0))))
    return _result("V=0 reduction delta == delta0", err, tol, t0)


def fd_scattering_length(p, s, kd0=1e-4, h=1e-6):
    """-d(delta)/dk at small k by central difference, branch-safe."""
    d = p.d
    sh = phase_shifts(p, s, np.array([kd0 - h, kd0 + h]) / d)
    step = float(np.mod(sh.delta[1] - sh.delta[0] + 0.5 * np.pi, np.pi) - 0.5 * np.pi)
    return -step / (2 * h / d)


def random_scattering_cases(n=20, seed=20240, J=1.0):
    """Random (U, V, K) whose band-bottom scattering length is well conditioned."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        U, V = rng.uniform(-5, 5, size=2)
        K = rng.uniform(-0.95 * math.pi, 0.95 * math.pi)
        p = ModelParams(J=J, U=U, V=V)
        s = k_sector(p, K)
        den0 = U * V + s.JK * (U + 2 * V)
        if abs(den0) < 0.5 * J**2:
            continue
        a0 = scattering_lengths(p, s).a0
        if not 0.1 <= abs(a0) <= 10.0:
            continue
        out.append((p, s))
    return out


def check_scattering_length(tol=1e-5) -> CheckResult:
    t0 = time.perf_counter()
    err = 0.0
    for p, s in random_scattering_cases():
        a0 = scattering_lengths(p, s).a0
        err = max(err, abs(fd_scattering_length(p, s) - a0) / abs(a0))
    return _result("scattering length vs finite difference", err, tol, t0)


def check_resonance(tol_K=1e-6, alpha_min=0.99) -> CheckResult:
    t0 = time.perf_counter()
    p = ModelParams(J=1.0, U=2.0, V=2.0)
    W = pair_coupling_W(p)
    K_R = 2 * math.acos(W / (2 * p.J)) / p.d
    # scan a small window around K_R for a divergence flag
    window = K_R + np.linspace(-tol_K, tol_K, 201)
    flagged = [K for K in window if not scattering_lengths(p, k_sector(p, K)).finite_pi]
    dist = min((abs(K - K_R) for K in flagged), default=math.inf)
    above = bound_states(p, k_sector(p, K_R + 1e-3 / p.d))
    below = bound_states(p, k_sector(p, K_R - 1e-3 / p.d))
    a2 = abs(above[1].alpha) if len(above) == 2 else 0.0
    ok = dist <= tol_K and a2 > alpha_min and len(below) == 1
    detail = f"|alpha2(K_R+1e-3)|={a2:.6f} n(K_R-1e-3)={len(below)}"
    return _result("resonance locus (U,V)=(2,2)", dist, tol_K, t0, detail, passed=ok)


def check_sigma(n=256, tol_hard=1e-10, tol_zero=1e-12) -> CheckResult:
    t0 = time.perf_counter()
    Ks = np.linspace(-math.pi, math.pi, n + 2)[1:-1]
    kd = np.linspace(0.0, math.pi, n + 2)[1:-1]
    bounds_violation = hard_worst = zero_worst = 0.0
    n_hard = n_zero = 0
    for U, V in QUADRANT_SETS:
        p = ModelParams(U=U, V=V)
        for K in Ks:
            s = k_sector(p, K)
            sig = cross_section(p, s, kd)
            bounds_violation = max(bounds_violation, float(np.max(-sig)), float(np.max(sig - 1)))
            kh = hard_core_momentum(p, s)
            if kh is not None and 1e-9 < kh < math.pi - 1e-9:
                hard_worst = max(hard_worst, 1.0 - float(cross_section(p, s, kh)))
                n_hard += 1
            for kz in sigma_zero_momenta(p, s):
                zero_worst = max(zero_worst, float(cross_section(p, s, kz)))
                n_zero += 1
    ok = bounds_violation <= 0 and hard_worst <= tol_hard and zero_worst <= tol_zero
    detail = (f"range violation={bounds_violation:.1e} 1-sigma(hard-core)={hard_worst:.1e} "
              f"[{n_hard} pts] sigma(zeros)={zero_worst:.1e} [{n_zero} pts]")
    return _result("cross-section bounds and special points",
                   max(hard_worst / tol_hard, zero_worst / tol_zero) * tol_hard,
                   tol_hard, t0, detail, passed=ok)


def check_residuals(tol=1e-10, i_max=50, param_sets=None) -> CheckResult:
    t0 = time.perf_counter()
    if param_sets is None:
        param_sets = [ModelParams(U=U, V=V) for U, V in QUADRANT_SETS + ((4, 0), (0, 3), (-4, 4))]
    idx = np.arange(-(i_max + 1), i_max + 2)
    err, count = 0.0, 0
    for p in param_sets:
        for K in (0.0, 0.7, 1.9, 2.8):
            s = k_sector(p, K)
            for kd in (0.3, 1.1, 2.0, 2.9):
                try:
                    psi = scattering_wavefunction(p, s, kd / p.d, idx)
                except SingularAmplitudeError:
                    continue
                E = -2 * s.JK * math.cos(kd)
                err = max(err, residual_check(p, s, psi, E) / p.J)
                count += 1
            for b in bound_states(p, s):
                psi = bound_wavefunction(b, idx)
                err = max(err, residual_check(p, s, psi, b.energy) / p.J)
                count += 1
    return _result("difference-equation residuals", err, tol, t0, f"{count} states")


def check_sign_flip(tol=1e-10, param_sets=None) -> CheckResult:
    t0 = time.perf_counter()
    if param_sets is None:
        param_sets = [ModelParams(U=U, V=V) for U in UV_GRID_5 for V in UV_GRID_5]
    Ks = np.linspace(-math.pi, math.pi, 66)[1:-1]
    kd = np.linspace(0.0, math.pi, 66)[1:-1]
    err, bad = 0.0, 0
    for p in param_sets:
        q = p.flipped()
        for K in Ks:
            s = k_sector(p, K)
            diff = cross_section(p, s, kd) - cross_section(q, s, (math.pi - kd))
            err = max(err, float(np.max(np.abs(diff))))
        for K in K_GRID_21:
            s = k_sector(p, K)
            a, b = bound_states(p, s), bound_states(q, s)
            if [x.family for x in a] != [x.family for x in b]:
                bad += 1
                continue
            for x, y in zip(a, b):
                err = max(err, abs(x.energy + y.energy) / p.J)
    return _result("sign-flip symmetries", err, tol, t0, f"family mismatches={bad}",
                   passed=err <= tol and bad == 0)


DEFAULT_CHECKS: dict[str, Callable[..., CheckResult]] = {
    "case_i": check_case_i,
    "case_iii": check_case_iii,
    "case_ii": check_case_ii,
    "oracle": check_oracle,
    "v0_reduction": check_v0_reduction,
    "scattering_length": check_scattering_length,
    "resonance": check_resonance,
    "sigma": check_sigma,
    "residuals": check_residuals,
    "sign_flip": check_sign_flip,
}


def run_suite(tol: Optional[float] = None, L: int = 201, preset_sets=None) -> list[CheckResult]:
    """Run every check; ``tol`` overrides all tolerances when given."""
    results = []
    for key, fn in DEFAULT_CHECKS.items():
        kwargs = {}
        if key == "oracle":
            kwargs["L"] = L
        if tol is not None:
            if key == "resonance":
                kwargs["tol_K"] = tol
            elif key == "sigma":
                kwargs["tol_hard"] = kwargs["tol_zero"] = tol
            else:
                kwargs["tol"] = tol
        results.append(fn(**kwargs))
    if preset_sets:
        extra = {} if tol is None else {"tol": tol}
        for p in preset_sets:
            label = f"[U={p.U:g}, V={p.V:g}]"
            results.append(check_oracle(L=L, param_sets=[p], name=f"preset oracle {label}",
                                        **extra))
            results.append(check_residuals(param_sets=[p], **extra))
            results[-1].name = f"preset residuals {label}"
            results.append(check_sign_flip(param_sets=[p], **extra))
            results[-1].name = f"preset sign-flip {label}"
    return results
