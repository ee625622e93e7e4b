import math

import numpy as np
import pytest

from unruh_bell.states import (
    Kind,
    StateFamily,
    Truncation,
    boson_coefficients,
    boson_unruh_state,
    build_state,
    charged_boson_unruh_state,
    family_state,
    fermion_unruh_state,
    reduce_to_region_I,
    required_nmax,
)
from unruh_bell.thermo import ModeSpec, Statistics

ALL_FAMILIES = [k.value for k in Kind]


def test_boson_state_at_zero_acceleration():
    assert boson_unruh_state(0, 0.0, 10).as_dict() == {(0, 0): 1.0}
    assert boson_unruh_state(1, 0.0, 10).as_dict() == {(1, 0): 1.0}


def test_boson_coefficient_value():
    # amplitude on |2>_I |2>_II of the vacuum at r = 1
    amp = boson_unruh_state(0, 1.0, 10).as_dict()[(2, 2)]
    assert amp == pytest.approx(math.tanh(1) ** 2 / math.cosh(1), abs=1e-15)
    assert amp == pytest.approx(0.375888, abs=1e-6)


def test_boson_tail_is_exact():
    for r in (0.3, 1.0, 2.0):
        for occ in (0, 1):
            st = boson_unruh_state(occ, r, 25)
            deficit = st.meta["deficit[w]"]
            assert 1 - st.norm_squared == pytest.approx(deficit, abs=1e-14)
    ex = boson_coefficients(0.7, 400)
    assert ex.norm_deficit < 1e-14 and ex.norm_deficit_excited < 1e-14


def test_charged_boson_state():
    assert charged_boson_unruh_state(0, 0.0, 5).as_dict() == {(0, 0, 0, 0): 1.0}
    assert charged_boson_unruh_state("+", 0.0, 5).as_dict() == {(1, 0, 0, 0): 1.0}
    assert charged_boson_unruh_state("-", 0.0, 5).as_dict() == {(0, 1, 0, 0): 1.0}
    plus = charged_boson_unruh_state("+", 1.0, 60)
    assert plus.norm_squared == pytest.approx(1.0, abs=1e-8)


def test_charged_boson_norm_converges():
    deficits = [1 - charged_boson_unruh_state(0, 0.8, n).norm_squared for n in (10, 20, 40, 80)]
    assert all(b < a for a, b in zip(deficits, deficits[1:]))
    assert deficits[-1] < 1e-8


def test_fermion_states():
    assert fermion_unruh_state(0, 0.0).as_dict() == {(0, 0, 0, 0): 1.0}
    vac = fermion_unruh_state(0, math.pi / 4).as_dict()
    expect = {(0, 0, 0, 0): 0.5, (0, 0, 1, 1): -0.5, (1, 1, 0, 0): 0.5, (1, 1, 1, 1): -0.5}
    assert vac == pytest.approx(expect, abs=1e-15)
    for occ in (0, "+", "-"):
        for rf in np.linspace(0, math.pi / 4, 7):
            assert fermion_unruh_state(occ, rf).norm_squared == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(ValueError):
        fermion_unruh_state(0, 1.0)
    with pytest.raises(ValueError):
        fermion_unruh_state(2, 0.3)


def test_phi_bb_at_rest_is_the_bell_state():
    st = build_state(StateFamily.make("Phi_BB"))
    s = 1 / math.sqrt(2)
    assert st.as_dict() == pytest.approx({(0, 0, 0, 0): s, (1, 0, 1, 0): s}, abs=1e-15)
    idx = [i for i, f in enumerate(st.factors) if f.region == "II"]
    assert np.all(st.labels[:, idx] == 0)


def test_alpha_family_at_quarter_pi_equals_bell_family():
    a = family_state("Psi_alpha_BB", 0.4, 0.6, 20, alpha=math.pi / 4)
    b = family_state("Psi_BB", 0.4, 0.6, 20)
    assert np.array_equal(a.labels, b.labels)
    assert np.allclose(a.amplitudes, b.amplitudes, atol=1e-15)


def test_x2_norm_at_moderate_cutoff():
    st = family_state("X2", 0.5, 0.3, 60)
    assert st.norm_squared >= 1 - 1e-8


@pytest.mark.parametrize("kind", ALL_FAMILIES)
def test_region_one_state_is_pure_at_rest(kind):
    rho = reduce_to_region_I(family_state(kind, 0.0, 0.0, 4))
    assert rho.purity() == pytest.approx(1.0, abs=1e-12)
    assert rho.trace() == pytest.approx(1.0, abs=1e-12)


def test_adaptive_cutoff_meets_norm_tolerance():
    fam = StateFamily.make("Phi_BB", a_omega=2 * math.pi, a_Omega=2 * math.pi)
    st = build_state(fam)
    rho = reduce_to_region_I(st)
    eps = 1 - rho.trace()
    assert 0 <= eps < 1e-8
    assert st.meta["norm_deficit"] == pytest.approx(eps, abs=1e-14)


def test_required_nmax_grows_with_acceleration():
    ns = [required_nmax("Phi_BB", r, r) for r in (0.2, 0.8, 1.5, 2.5)]
    assert ns == sorted(ns)
    assert required_nmax("Phi_FF", 0.7, 0.7) == 20


def test_family_validation():
    with pytest.raises(ValueError):
        StateFamily.make("Phi_BB", sign=2)
    with pytest.raises(ValueError):
        StateFamily(Kind.PHI_BB, ModeSpec(Statistics.FERMION, 1.0), ModeSpec(Statistics.BOSON, 1.0))
    with pytest.raises(ValueError):
        StateFamily.make("Psi_alpha_BB", alpha=0.0)
    with pytest.raises(ValueError):
        Kind.parse("Chi_BB")
    with pytest.raises(ValueError):
        Truncation(nmax=0)
    assert Kind.parse("phi_bb") is Kind.PHI_BB


def test_kind_statistics():
    B, C, F = Statistics.BOSON, Statistics.CHARGED_BOSON, Statistics.FERMION
    assert Kind.X2.statistics == (C, F)
    assert Kind.X1.statistics == (B, F)
    assert Kind.PHI_BF.statistics == (B, F)
    assert Kind.PSI_ALPHA_BB.statistics == (B, B)
    assert Kind.PSI_FF.statistics == (F, F)


def test_trace_antiparticles_option_keeps_only_particles():
    st = family_state("Phi_FF", 0.3, 0.4)
    rho = reduce_to_region_I(st, trace_antiparticles=True)
    assert all(f.species != "-" for f in rho.factors)
    assert rho.trace() == pytest.approx(1.0, abs=1e-14)


def test_sign_changes_only_the_relative_phase():
    a = family_state("Psi_BF", 0.4, 0.3, 20, sign=+1)
    b = family_state("Psi_BF", 0.4, 0.3, 20, sign=-1)
    assert np.array_equal(a.labels, b.labels)
    assert np.allclose(np.abs(a.amplitudes), np.abs(b.amplitudes))
    assert not np.allclose(a.amplitudes, b.amplitudes)
