import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import neg2x2_eig
from unruh_bell import analytic
from unruh_bell.entanglement import family_negativity, negativity
from unruh_bell.fock import density_matrix, partial_transpose, permute_factors
from unruh_bell.states import family_state, reduce_to_region_I
from unruh_bell.thermo import Statistics, accel_param, occupation, partition

rf = st.floats(0.0, math.pi / 4)
rb = st.floats(0.0, 1.2)
accel = st.floats(1e-3, 1e3)
freq = st.floats(0.05, 20.0)
FAST = settings(max_examples=25, deadline=None)


@given(st.floats(0, 1), st.floats(0, 1), st.floats(-1, 1))
def test_neg2x2_matches_eigensolver(a, b, c):
    assert abs(analytic.neg2x2(a, b, c) - neg2x2_eig(a, b, c)) <= 1e-15 * (1 + abs(a) + abs(b) + abs(c))


@given(accel, freq)
def test_thermal_identities(a, w):
    r = accel_param(Statistics.BOSON, w, a)
    assert math.isclose(math.tanh(r) ** 2, math.exp(-2 * math.pi * w / a), rel_tol=1e-10, abs_tol=1e-300)
    r_f = accel_param(Statistics.FERMION, w, a)
    assert math.isclose(math.sin(r_f) ** 2, occupation(Statistics.FERMION, w, a), rel_tol=1e-10, abs_tol=1e-300)
    assert math.isclose(1 / math.cos(r_f) ** 2, partition(Statistics.FERMION, w, a), rel_tol=1e-12)
    assert 0 <= r_f <= math.pi / 4


@given(rf, rf)
def test_ff_symmetric_and_bounded(r1, r2):
    for kind in ("Phi", "Psi"):
        v = analytic.neg_ff_r(kind, r1, r2)
        assert v == analytic.neg_ff_r(kind, r2, r1)
        assert 0.125 - 1e-15 <= v <= 0.5 if kind == "Phi" else (math.sqrt(2) - 1) / 4 - 1e-15 <= v <= 0.5


@FAST
@given(rf, rf, st.sampled_from(["Phi_FF", "Psi_FF"]))
def test_ff_numeric_matches_closed_form(r1, r2, kind):
    assert abs(family_negativity(kind, (r1, r2)).total - analytic.neg_ff_r(kind, r1, r2)) < 1e-12


@FAST
@given(rb, rf, st.sampled_from(["Phi_BF", "Psi_BF", "X1", "X2"]))
def test_mixed_families_match_series(r, r_f, kind):
    num = family_negativity(kind, (r, r_f)).total
    ana = analytic.family_negativity_r(kind, r, r_f).total
    assert abs(num - ana) < 1e-8


@FAST
@given(rb, rb, st.sampled_from(["Phi_BB", "Psi_BB", "Phi_BF", "X2"]))
def test_party_choice_and_sign_are_irrelevant(r1, r2, kind):
    r2 = min(r2, math.pi / 4)
    rho = reduce_to_region_I(family_state(kind, r1, r2, 10))
    a = negativity(rho, "W").total
    assert abs(a - negativity(rho, "w").total) < 1e-12
    flipped = reduce_to_region_I(family_state(kind, r1, r2, 10, sign=-1))
    assert abs(a - negativity(flipped).total) < 1e-12


@FAST
@given(rb, rf, st.permutations(range(8)))
def test_factor_order_does_not_change_negativity(r, r_f, perm):
    st_ = family_state("X2", r, r_f, 6)
    rho = reduce_to_region_I(st_)
    n = len(rho.factors)
    order = [p for p in perm if p < n]
    shuffled = reduce_to_region_I(permute_factors(st_, [p for p in perm if p < len(st_.factors)]))
    assert abs(negativity(rho).total - negativity(shuffled).total) < 1e-12
    assert len(order) == n


@FAST
@given(rb, rb)
def test_partial_transpose_is_an_involution(r1, r2):
    rho = reduce_to_region_I(family_state("Psi_BB", r1, r2, 6))
    twice = partial_transpose(partial_transpose(rho, "W"), "W")
    a = dict(zip(map(tuple, rho.labels), range(rho.dim)))
    b = dict(zip(map(tuple, twice.labels), range(twice.dim)))
    keys = [k for k in a if k in b]
    ia = np.array([a[k] for k in keys])
    ib = np.array([b[k] for k in keys])
    diff = rho.matrix[ia][:, ia] - twice.matrix[ib][:, ib]
    assert abs(diff).max() == 0 if diff.nnz else True
    assert math.isclose(rho.matrix.sum(), twice.matrix.sum(), rel_tol=1e-14, abs_tol=1e-15)


@FAST
@given(rb)
def test_density_matrix_is_normalised(r):
    st_ = family_state("Phi_BF", r, 0.3, 40)
    assert abs(density_matrix(st_).trace() - st_.norm_squared) < 1e-13
