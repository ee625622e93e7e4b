import math

import numpy as np
import pytest

from oracles import dense_rho_from_labels, entropy_dense, jw_reduced, ptranspose_dense, dense_negativity
from unruh_bell import analytic
from unruh_bell.entanglement import (
    correlations,
    family_correlations,
    family_negativity,
    mutual_information,
    negativity,
    sector_negativities,
    von_neumann_entropy,
)
from unruh_bell.fock import DensityMatrix, Factor
from unruh_bell.states import StateFamily, Truncation, family_state, reduce_to_region_I

import scipy.sparse as sp

PI4, PI6 = math.pi / 4, math.pi / 6


def region_one(kind, r1, r2, nmax=40, **kw):
    return reduce_to_region_I(family_state(kind, r1, r2, nmax, **kw))


def test_phi_ff_at_rest_has_one_sector():
    rep = negativity(region_one("Phi_FF", 0.0, 0.0))
    assert rep.total == pytest.approx(0.5, abs=1e-14)
    assert len(rep.sectors) == 1
    assert rep.sectors[0][0] == "0,0|1+,1+"


def test_phi_ff_at_infinite_acceleration_splits_equally():
    rep = negativity(region_one("Phi_FF", PI4, PI4))
    assert rep.total == pytest.approx(0.125, abs=1e-14)
    assert len(rep.sectors) == 4
    for _, v in rep.sectors:
        assert v == pytest.approx(1 / 32, abs=1e-14)


def test_psi_ff_at_infinite_acceleration():
    assert negativity(region_one("Psi_FF", PI4, PI4)).total == pytest.approx((math.sqrt(2) - 1) / 4, abs=1e-14)
    assert negativity(region_one("Psi_FF", PI6, PI6)).total == pytest.approx(0.2702847075, abs=1e-10)


@pytest.mark.parametrize("r", [0.1, 0.4, PI6, 0.7, PI4])
def test_phi_ff_sector_ratios(r):
    d = negativity(region_one("Phi_FF", r, r)).sector_dict()
    base = d["0,0|1+,1+"]
    t2 = math.tan(r) ** 2
    assert d["0,1-|1+,1+1-"] == pytest.approx(t2 * base, abs=1e-12)
    assert d["1-,0|1+1-,1+"] == pytest.approx(t2 * base, abs=1e-12)
    assert d["1-,1-|1+1-,1+1-"] == pytest.approx(t2 * t2 * base, abs=1e-12)


def test_sectors_sum_to_total():
    for kind, r in [("Phi_FF", (0.3, 0.6)), ("X1", (0.8, 0.4)), ("Phi_BB", (0.5, 0.5)), ("X2", (0.6, 0.5))]:
        rep = family_negativity(kind, r)
        assert math.fsum(v for _, v in rep.sectors) == pytest.approx(rep.total, abs=1e-12)
        assert sector_negativities(region_one(kind, *r)) == negativity(region_one(kind, *r)).sectors


def test_numeric_negativity_matches_dense_eigensolve():
    for kind, r in [("Phi_BF", (0.6, 0.3)), ("X1", (0.5, 0.7)), ("Psi_BB", (0.4, 0.3))]:
        rho = region_one(kind, *r, nmax=6)
        sub = [i for i, f in enumerate(rho.factors) if f.mode == "W"]
        dims = [int(rho.labels[:, c].max()) + 1 for c in range(len(rho.factors))]
        d, _ = dense_rho_from_labels(rho, dims)
        ref = dense_negativity(ptranspose_dense(d, dims, sub))
        assert negativity(rho).total == pytest.approx(ref, abs=1e-12)


def test_party_choice_does_not_matter():
    for kind, r in [("Psi_FF", (0.3, 0.5)), ("Phi_BF", (0.7, 0.2)), ("Psi_BB", (0.5, 0.3))]:
        rho = region_one(kind, *r)
        assert negativity(rho, "W").total == pytest.approx(negativity(rho, "w").total, abs=1e-12)


def test_party_split_must_be_proper():
    rho = region_one("Phi_FF", 0.2, 0.2)
    with pytest.raises(ValueError):
        negativity(rho, lambda f: True)


def test_psi_bb_one_observer_sectors_are_two_by_two():
    rep = family_negativity("Psi_BB", (0.5, 0.0))
    assert all("|" in label for label, _ in rep.sectors)
    assert rep.sectors[0][0] == "0,1|1,0"


def test_bb_sectors_form_chains_when_both_accelerate():
    # with both modes accelerated the partial transpose couples (n, m) blocks into longer chains
    rep = family_negativity("Phi_BB", (0.5, 0.5))
    assert rep.sectors[0][0] == "0,0|1,1"
    assert any(label.startswith("chain@") for label, _ in rep.sectors)
    rep = family_negativity("Psi_BB", (0.5, 0.5))
    assert rep.sectors[0][0].startswith("chain@")
    assert len([v for _, v in rep.sectors if v > 1e-6]) > 1


# ---------------------------------------------------------------- entropy

def test_entropy_of_pure_and_mixed_states():
    assert von_neumann_entropy(region_one("Phi_BB", 0.0, 0.0)) == pytest.approx(0.0, abs=1e-12)
    f = (Factor("a", "I"),)
    mixed = DensityMatrix(f, np.arange(5).reshape(-1, 1), sp.identity(5, format="csr") / 5)
    assert von_neumann_entropy(mixed) == pytest.approx(math.log(5), abs=1e-14)


def test_psi_ff_entropy_limit():
    assert von_neumann_entropy(region_one("Psi_FF", PI4, PI4)) == pytest.approx(math.log(8), abs=1e-12)


@pytest.mark.parametrize("kind", ["Phi_FF", "Psi_FF", "Phi_BB", "Psi_BB", "Phi_BF", "Psi_BF", "X1", "X2"])
def test_mutual_information_at_rest_is_two_bits(kind):
    c = correlations(region_one(kind, 0.0, 0.0, nmax=3))
    assert c.mutual_information_bits == pytest.approx(2.0, abs=1e-12)
    assert c.entropy_nats == pytest.approx(0.0, abs=1e-12)


def test_mutual_information_limits():
    lim = analytic.asymptotic_limits()
    assert mutual_information(region_one("Psi_FF", PI4, PI4)) == pytest.approx(lim["I_Psi_FF"], abs=1e-12)
    assert mutual_information(region_one("Phi_FF", PI4, PI4)) == pytest.approx(lim["I_Phi_FF"], abs=1e-12)
    assert lim["I_Psi_FF"] == pytest.approx(0.6225562489, abs=1e-10)
    assert lim["I_Phi_FF"] == pytest.approx(0.4208041755, abs=1e-10)


def test_entropy_against_jordan_wigner_oracle():
    st = family_state("Phi_FF", 0.5, 0.3)
    keep = [i for i, f in enumerate(st.factors) if f.region == "I"]
    ref = entropy_dense(jw_reduced(st, keep))
    assert von_neumann_entropy(reduce_to_region_I(st)) == pytest.approx(ref, abs=1e-12)


def test_family_correlations_uses_adaptive_cutoff():
    c = family_correlations("Psi_BB", (0.6, 0.6))
    assert 0 < c.mutual_information_bits < 2
    assert c.entropy_nats > 0


# ------------------------------------------------------------- truncation

def test_adaptive_truncation_metadata():
    rep = family_negativity("Phi_BF", (0.9, 0.5))
    m = rep.truncation_meta
    assert m["converged"] and m["shift"] < 1e-8 and m["norm_deficit"] < 1e-8
    assert m["nmax"] >= 20


def test_fixed_tiny_cutoff_is_flagged():
    rep = family_negativity("X1", (2.0, 0.5), truncation=2)
    assert rep.truncation_meta["nmax"] == 2
    assert not rep.truncation_meta["converged"]
    rep = family_negativity("X1", (2.0, 0.5), truncation=Truncation(nmax=400))
    assert rep.truncation_meta["converged"]


def test_fermion_families_need_no_truncation():
    rep = family_negativity("Phi_FF", (0.4, 0.2))
    assert rep.truncation_meta == {"nmax": 0, "norm_deficit": 0.0, "shift": 0.0, "converged": True}


def test_state_family_input():
    fam = StateFamily.make("Psi_BF", a_omega=3.0, a_Omega=5.0)
    a = family_negativity(fam).total
    b = family_negativity("Psi_BF", fam.r_params).total
    assert a == b


def test_sign_does_not_change_negativity():
    for kind in ("Phi_BB", "Psi_BF", "X2", "Psi_FF"):
        a = family_negativity(kind, (0.4, 0.3), sign=+1).total
        b = family_negativity(kind, (0.4, 0.3), sign=-1).total
        assert a == pytest.approx(b, abs=1e-12)


def test_trace_antiparticles_does_not_change_particle_families():
    for kind, r in [("Phi_FF", (0.5, 0.3)), ("Psi_FF", (0.2, 0.6)), ("Psi_BF", (0.6, 0.4)), ("Phi_BF", (0.6, 0.4))]:
        a = family_negativity(kind, r).total
        b = family_negativity(kind, r, trace_antiparticles=True).total
        assert b == pytest.approx(a, abs=1e-10)


def test_x_states_keep_their_entanglement_in_antiparticles():
    for kind in ("X1", "X2"):
        assert family_negativity(kind, (0.4, 0.7)).total > 0.1
        assert family_negativity(kind, (0.4, 0.7), trace_antiparticles=True).total == 0.0
