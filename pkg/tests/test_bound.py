import math

import numpy as np
import pytest

from ebhpairs.bound import (
    band_edge_limit,
    bound_states,
    bound_wavefunction,
    characteristic_cubic,
    classify_roots,
    cubic_residual,
    existence_report,
    special_case_reference,
)
from ebhpairs.errors import CaseMismatchError, FlatBandError, SingularAmplitudeError
from ebhpairs.model import KSector, ModelParams, k_sector
from ebhpairs.oracle import residual_check


def sector(JK):
    return KSector(K=2 * math.acos(JK / 2), JK=JK)


def test_cubic_coefficients():
    assert characteristic_cubic(ModelParams(U=-4.0, V=4.0), sector(2.0)) == (8.0, -20.0, 0.0, 4.0)
    assert characteristic_cubic(ModelParams(U=3.0), sector(1.0)) == (0.0, -1.0, 3.0, 1.0)


# (alpha, E) per family, frozen from a 50-digit polynomial solve
FROZEN = [
    ((2.0, 2.0, 0.0), [(-0.45339765151640377, 5.3179341638339882)]),
    ((-8.0, 2.0, 0.0), [(0.2411131577030587, -8.7770867828016242),
                        (-0.75251782192981682, 4.1627800078017928)]),
    ((8.0, 8.0, 1.0), [(-0.16978381243437203, 10.635645652789413),
                       (-0.33725483742132222, 5.7962076053715677)]),
    ((0.0, 1.0, 0.0), [(-0.69562076955986206, 4.2663713332825029)]),
    ((2.0, -2.0, 1.0), [(0.58117075824593431, -4.0401012916689499),
                        (-0.87758256189037272, 3.5403023058681397)]),
    ((3.0, -1.0, 2.5), [(-0.20569564603581878, 3.1956327538177072),
                        (0.53617134007606236, -1.5143336171185148)]),
    ((2.0, 2.0, 2.5), [(-0.22329788879669777, 2.9650522102590709),
                       (-0.75005491863904254, 1.3138162434829842)]),
]


@pytest.mark.parametrize("uvk, expected", FROZEN)
def test_frozen_bound_states(uvk, expected):
    U, V, K = uvk
    p = ModelParams(U=U, V=V)
    states = bound_states(p, k_sector(p, K))
    assert [s.family for s in states] == list(range(1, len(expected) + 1))
    for st, (alpha, E) in zip(states, expected):
        assert st.alpha == pytest.approx(alpha, abs=1e-13)
        assert st.energy == pytest.approx(E, abs=1e-12)


def test_no_interaction_no_bound_state():
    p = ModelParams()
    assert bound_states(p, sector(1.0)) == []


def test_classify_roots_statuses():
    infos = classify_roots(ModelParams(U=-4.0, V=4.0), sector(2.0))
    assert len(infos) == 3
    assert sorted(i.status for i in infos).count("bound") == 2


def test_flat_band_raises():
    p = ModelParams(U=1.0, V=1.0)
    with pytest.raises(FlatBandError):
        bound_states(p, k_sector(p, math.pi))


@pytest.mark.parametrize("U, V", [(2.0, 2.0), (-3.0, 1.5), (5.0, -1.0), (0.0, -2.0), (-1.0, -0.5)])
def test_bound_state_properties(U, V):
    p = ModelParams(U=U, V=V)
    for K in np.linspace(0, 3.0, 7):
        s = k_sector(p, K)
        states = bound_states(p, s)
        assert len(states) <= 2
        for st in states:
            assert abs(st.alpha) < 1
            assert abs(st.energy) > 2 * s.JK
            assert cubic_residual(p, s, st.alpha) < 1e-12 * max(1.0, abs(U), abs(V)) ** 2
            r = np.arange(-400, 401)
            psi = bound_wavefunction(st, r)
            assert np.sum(psi**2) == pytest.approx(1.0, abs=1e-12)
            assert residual_check(p, s, psi, st.energy) < 1e-12 * max(1.0, abs(st.energy))


def test_wavefunction_shape():
    p = ModelParams(U=-4.0, V=4.0)
    st = bound_states(p, sector(2.0))[1]
    psi = bound_wavefunction(st, [0, 1, 2, 3, -3])
    assert psi[0] == pytest.approx(st.norm * st.phi0)
    assert psi[1] == pytest.approx(st.norm)
    assert psi[3] == pytest.approx(st.norm * st.alpha**2)
    assert psi[4] == psi[3]


def test_hard_core_limit_suppresses_contact():
    p = ModelParams(U=1e8, V=-4.0)
    s = sector(1.0)
    states = bound_states(p, s)
    fam2 = states[1]
    assert fam2.energy == pytest.approx(-4.0 - 0.25, abs=1e-6)
    assert abs(bound_wavefunction(fam2, 0)) < 1e-7


def test_singular_phi0():
    # U alpha + JK (alpha^2 + 1) = 0 is the case (ii) limit state at alpha = 0
    ref = special_case_reference(ModelParams(U=1e7, V=2.0), sector(1.0), "ii")
    with pytest.raises(SingularAmplitudeError):
        bound_wavefunction(ref[0], 0)


class TestSpecialCases:
    def test_case_i(self):
        p = ModelParams(U=3.0)
        s = sector(2.0)
        (ref,) = special_case_reference(p, s, "i")
        assert ref.energy == pytest.approx(5.0)
        (st,) = bound_states(p, s)
        assert st.energy == pytest.approx(ref.energy, abs=1e-13)
        assert st.alpha == pytest.approx(ref.alpha, abs=1e-14)

    def test_case_iii(self):
        p = ModelParams(U=-4.0, V=4.0)
        s = sector(2.0)
        ref = special_case_reference(p, s, 3)
        assert [r.energy for r in ref] == pytest.approx([math.sqrt(32), -5.0])
        got = bound_states(p, s)
        for a, b in zip(got, ref):
            assert a.alpha == pytest.approx(b.alpha, abs=1e-13)

    def test_case_ii_against_large_u(self):
        p = ModelParams(U=1e7, V=-3.0)
        s = sector(1.5)
        ref = special_case_reference(p, s, "ii")
        got = bound_states(p, s)
        assert got[0].energy == pytest.approx(ref[0].energy, rel=1e-6)
        assert got[1].energy == pytest.approx(ref[1].energy, abs=1e-5)
        assert got[1].alpha == pytest.approx(0.5, abs=1e-6)

    @pytest.mark.parametrize(
        "U, V, case", [(1.0, 1.0, "i"), (10.0, 1.0, "ii"), (1e7, 0.0, "ii"), (2.0, 1.0, "iii")]
    )
    def test_mismatch(self, U, V, case):
        with pytest.raises(CaseMismatchError):
            special_case_reference(ModelParams(U=U, V=V), sector(1.0), case)

    def test_unknown_case(self):
        with pytest.raises(ValueError):
            special_case_reference(ModelParams(), sector(1.0), "iv")


@pytest.mark.parametrize("U, V", [(2.0, 2.0), (-3.0, 1.0), (4.0, -1.0), (-2.0, -5.0)])
def test_band_edge_limit_energies(U, V):
    levels = band_edge_limit(ModelParams(U=U, V=V))
    assert sorted(levels.values()) == pytest.approx(sorted([U, V]), abs=1e-9)


def test_band_edge_limit_single_family():
    levels = band_edge_limit(ModelParams(U=3.0))
    assert list(levels.values()) == pytest.approx([3.0], abs=1e-9)


def test_existence_report_resonant_case():
    p = ModelParams(U=2.0, V=2.0)
    grid = np.linspace(0, math.pi, 41)
    rep = existence_report(p, grid)
    assert rep.W == pytest.approx(2 / 3)
    assert rep.Kc == pytest.approx(2 * math.acos(1 / 3))
    assert not rep.family2_all_K
    assert rep.family2_side == "above"
    assert np.all(rep.n_states[grid < rep.Kc - 1e-3] == 1)
    assert np.all(rep.n_states[grid > rep.Kc + 1e-3] == 2)


def test_existence_report_family2_everywhere():
    rep = existence_report(ModelParams(U=-4.0, V=4.0), np.linspace(0, math.pi, 9))
    assert rep.family2_all_K and rep.Kc is None
    assert np.all(rep.n_states == 2)
    assert rep.family2_side == "below"


def test_existence_report_no_side_without_both_couplings():
    rep = existence_report(ModelParams(U=0.0, V=1.0), [0.0, 1.0])
    assert rep.family2_side is None


def test_family_two_loosens_toward_threshold():
    p = ModelParams(U=2.0, V=2.0)
    Kc = existence_report(p, [0.0]).Kc
    gaps = []
    for dK in (1e-1, 1e-2, 1e-3):
        states = bound_states(p, k_sector(p, Kc + dK))
        gaps.append(1 - abs(states[1].alpha))
    assert gaps[0] > gaps[1] > gaps[2] > 0


def test_at_most_two_families_on_grid():
    for U in (-4, -2, 0, 2, 4):
        for V in (-4, -2, 0, 2, 4):
            p = ModelParams(U=U, V=V)
            for K in np.linspace(-3.0, 3.0, 13):
                assert len(bound_states(p, k_sector(p, K))) <= 2


def test_family_two_decay_just_past_threshold():
    """|alpha_2| at K_c + delta for (U, V) = (2, 2), 50-digit reference values."""
    p = ModelParams(U=2.0, V=2.0)
    Kc = 2 * math.acos(1 / 3)
    for dK, ref in ((1e-3, 0.987743), (5e-4, 0.993758), (1e-4, 0.998732)):
        states = bound_states(p, k_sector(p, Kc + dK))
        assert len(states) == 2
        assert abs(states[1].alpha) == pytest.approx(ref, abs=2e-6)
