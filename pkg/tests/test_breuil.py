import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gl3fl import breuil as br
from gl3fl import sbar
from gl3fl.fontaine_laffaille import phi_smith_exponents
from gl3fl.scalars import Fq, ProjPoint, ScalarError, proj_invert

P = 11
TRIPLE = (6, 3, 0)
F = Fq(P)
E = P - 1


# ---------------------------------------------------------------- residual filtrations


def test_mns_filtration_is_framed():
    assert sbar.isotypic_check(br.mns_filtration(3, 4, 5, TRIPLE, P))


def test_mns_generic_smith():
    assert sbar.smith_exponents(br.mns_filtration(1, 1, 2, TRIPLE, P)) == [E - 6, E, E + 6]


def test_mns_nu_zero_smith():
    assert sbar.smith_exponents(br.mns_filtration(2, 5, 0, TRIPLE, P)) == sorted([E - 3, E - 3, E + 6])


def test_mns_rejects_degenerate_input():
    with pytest.raises(ValueError):
        br.mns_filtration(0, 1, 1, TRIPLE, P)
    with pytest.raises(ValueError):
        br.mns_filtration(1, 1, 1, (5, 3, 0), P)


@pytest.mark.parametrize("lmn,case", [((1, 1, 1), "ii"), ((1, 1, 0), "iii"), ((1, 1, 2), "i")])
def test_elementary_divisor_case(lmn, case):
    assert br.elementary_divisor_case(*lmn, F) == case


@given(st.integers(1, P - 1), st.integers(1, P - 1), st.integers(0, P - 1))
def test_smith_matches_case_formula(lam, mu, nu):
    case = br.elementary_divisor_case(lam, mu, nu, F)
    assert sbar.smith_exponents(br.mns_filtration(lam, mu, nu, TRIPLE, P)) == br.expected_smith(case, TRIPLE, P)


# ---------------------------------------------------------------- change of basis


def _identity(M):
    return sbar.identity(M.field, M.p, M.f, 3, M.types)


def test_change_of_basis_identity_is_noop():
    M = br.diagonal_case_module(br.CASE_A, TRIPLE, P, (1, 1, 1), (3, 5, 7))
    N = br.change_of_basis(M, M.V, _identity(M))
    assert sbar.equal_mod(N.V, M.V, M.cap)
    assert sbar.equal_mod(N.A, _identity(M), M.cap)  # phi(I) = I


def test_change_of_basis_absorbing_frobenius():
    # V' = A^-1 V, B = I gives Frobenius matrix I and the same FL class
    M = br.random_case_module(br.CASE_A, TRIPLE, P, random.Random(5))
    Vp = sbar.mul(sbar.invert_unit(M.A), M.V, rule=sbar.FILTRATION)
    N = br.change_of_basis(M, Vp, _identity(M))
    assert sbar.equal_mod(N.A, _identity(M), M.cap)
    assert br.breuil_to_fl(N) == br.breuil_to_fl(M)


def test_change_of_basis_rejects_bad_congruence():
    M = br.random_case_module(br.CASE_B, TRIPLE, P, random.Random(7))
    Vp = br.build_matrix(F, P, 1, br.template_rows(br.CASE_B, TRIPLE, P, [1, 2]), M.types, sbar.FILTRATION)
    with pytest.raises(br.CongruenceFailure):
        br.change_of_basis(M, Vp, _identity(M))


@settings(max_examples=15)
@given(st.integers(0, 10 ** 9))
def test_change_of_basis_preserves_smith(seed):
    M = br.random_case_module(br.CASE_A, TRIPLE, P, random.Random(seed))
    N, _ = br.diagonalization_step(M, br.CASE_A, TRIPLE)
    assert sbar.smith_exponents(N.V) == sbar.smith_exponents(M.V)


# ---------------------------------------------------------------- diagonalization


def test_diagonalize_already_diagonal():
    M = br.diagonal_case_module(br.CASE_A, TRIPLE, P, (2, 3, 4), (0, 0, 0))
    R = br.diagonalize_frobenius(M, br.CASE_A, TRIPLE)
    assert R.steps == 0
    assert R.diagonal == [[2, 3, 4]]


@pytest.mark.parametrize("shape", [br.CASE_A, br.CASE_B, br.CASE_C])
@pytest.mark.parametrize("seed", [1, 2, 3])
def test_diagonalize_predicted_permutation(shape, seed):
    s = br.random_case_sample(shape, TRIPLE, P, random.Random(seed))
    assert tuple(s.diagonalized.diagonal[0]) == br.predicted_diagonal(shape, s.alphas)
    assert s.diagonalized.congruence_checks == s.diagonalized.steps


def test_predicted_diagonal_case_b():
    assert br.predicted_diagonal(br.CASE_B, (5, 6, 7)) == (6, 7, 5)


def test_diagonalize_rejects_wrong_shape():
    M = br.random_case_module(br.CASE_A, TRIPLE, P, random.Random(1))
    with pytest.raises(br.BreuilError):
        br.diagonalize_frobenius(M, br.CASE_C, TRIPLE, max_steps=3)


# ---------------------------------------------------------------- phi-modules and ungrading


def test_phi_module_of_scalar_filtration():
    rows = [[[(1, E)] if i == j else None for j in range(3)] for i in range(3)]
    M = br.make_module(F, P, 1, (0, 0, 0), rows, br.diag_rows((1, 1, 1)), validate=False)
    Phi = br.breuil_to_phi_module(M)
    for i in range(3):
        for j in range(3):
            s = Phi.comps[0][i][j]
            assert s.c == ({E: 1} if i == j else {})


def test_phi_module_is_transpose_over_diagonal():
    # oracle: with A = Diag(alpha), Phi_ij = V_ji / alpha_j
    alphas = (2, 3, 4)
    M = br.diagonal_case_module(br.CASE_A, TRIPLE, P, alphas, (3, 5, 7))
    Phi = br.breuil_to_phi_module(M)
    for i in range(3):
        for j in range(3):
            want = M.V.comps[0][j][i].scale(F.inv(alphas[j]))
            assert Phi.comps[0][i][j].equals(want)
    assert br.phi_module_class_ok(Phi, M.types)


def test_ungrade_zero_twists_on_ungraded_input():
    G = sbar.graded_from_rows(F, P, 1, [[{0: 1}, None, None], [None, {E: 2}, None], [None, None, {2 * E: 3}]])
    Phi0 = br.ungrade_descend(G, (0, 0, 0))
    assert Phi0.comps[0][0][0][0] == 1 and Phi0.comps[0][1][1][1] == 2 and Phi0.comps[0][2][2][2] == 3


def test_ungrade_case_a_columns():
    a, b = 6, 3
    M = br.diagonal_case_module(br.CASE_A, TRIPLE, P, (2, 3, 4), (3, 5, 7))
    assert br.descent_twists(M.types, P, 1) == (0, b, a)
    Phi0 = br.ungrade_descend(br.breuil_to_phi_module(M), (0, b, a))
    # F . Diag(pbar, pbar^{b+1}, pbar^{a+1}): column j lives in a single degree
    for j, m in enumerate((1, b + 1, a + 1)):
        for d in range(Phi0.N):
            col = [Phi0.comps[0][d][r][j] for r in range(3)]
            assert any(col) == (d == m)
    assert phi_smith_exponents(Phi0) == [1, b + 1, a + 1]


def test_ungrade_niveau2_weights():
    M = br.niveau2_module((1, 2), (3, 4), (5, 6), (1, 1), (2, 3), TRIPLE, P)
    x = br.niveau2_exponents(6, 3, P)
    assert br.descent_twists(M.types, P, 2) == (0, x["k2"], x["k1"])
    R = br.breuil_to_fl_details(M)
    assert R.weights == (1, 4, 7)


def test_ungrade_rejects_wrong_twists():
    M = br.diagonal_case_module(br.CASE_A, TRIPLE, P, (2, 3, 4), (3, 5, 7))
    with pytest.raises(br.NotUngradeable):
        br.ungrade_descend(br.breuil_to_phi_module(M), (0, 1, 1))


# ---------------------------------------------------------------- the FL class of a Breuil module


@pytest.mark.parametrize("alphas", [(2, 3, 4), (1, 7, 9), (10, 10, 10)])
def test_case_a_fl_is_inverse_alpha1(alphas):
    M = br.diagonal_case_module(br.CASE_A, TRIPLE, P, alphas, (3, 5, 7))
    assert br.breuil_to_fl(M).value == F.inv(alphas[1])


def test_case_b_and_c_fl():
    assert br.breuil_to_fl(br.diagonal_case_module(br.CASE_B, TRIPLE, P, (2, 3, 4), (3, 5))).value == 0
    assert br.breuil_to_fl(br.diagonal_case_module(br.CASE_C, TRIPLE, P, (2, 3, 4), (3, 5))).is_infinity


@settings(max_examples=25)
@given(st.integers(0, 10 ** 9))
def test_case_a_fl_independent_of_free_constants(seed):
    rng = random.Random(seed)
    alphas = tuple(rng.randrange(1, P) for _ in range(3))
    while True:
        c = [rng.randrange(P) for _ in range(3)]
        if br.constants_admissible(br.CASE_A, c, F):
            break
    M = br.diagonal_case_module(br.CASE_A, TRIPLE, P, alphas, c)
    assert br.breuil_to_fl(M).value == F.inv(alphas[1])


def test_constants_admissible_exhaustive_against_pipeline():
    # oracle: the pipeline itself decides whether the residual module has an FL lattice
    import itertools
    for shape, n in ((br.CASE_B, 2), (br.CASE_C, 2)):
        for c in itertools.product(range(P), repeat=n):
            try:
                br.breuil_to_fl(br.diagonal_case_module(shape, TRIPLE, P, (1, 2, 3), list(c)))
                ok = True
            except Exception:
                ok = False
            assert ok == br.constants_admissible(shape, c, F)


@settings(max_examples=10)
@given(st.integers(0, 10 ** 9), st.sampled_from([br.CASE_A, br.CASE_B, br.CASE_C]))
def test_route_independence(seed, shape):
    s = br.random_case_sample(shape, TRIPLE, P, random.Random(seed))
    direct = br.breuil_to_fl(s.module)
    assert direct == br.breuil_to_fl(s.diagonalized.module)
    assert direct == br.expected_case_fl(shape, s.alphas, F)


# ---------------------------------------------------------------- valuations


def test_sd_case_a_example():
    assert br.sd_case_valuations(br.CASE_A, 1) == (1, 1, 1)


def test_sd_case_b_example():
    assert br.sd_case_valuations(br.CASE_B, 1, Fraction(1, 2)) == (1, Fraction(1, 2), Fraction(3, 2))


fractions = st.fractions(min_value=Fraction(1, 50), max_value=Fraction(99, 50), max_denominator=50)


@given(st.sampled_from([br.CASE_A, br.CASE_B, br.CASE_C]), fractions, fractions)
def test_sd_valuations_sum_to_three(case, oa, ob):
    if case != br.CASE_A and not (0 < ob < 1 and oa < ob + 1):
        with pytest.raises(ValueError):
            br.sd_case_valuations(case, oa, ob)
        return
    vals = br.sd_case_valuations(case, oa, ob)
    assert sum(vals) == 3
    assert all(0 < v < 2 for v in vals)


def test_fl_from_valuation_cases():
    t = 7
    assert br.theorem251_fl(1, P, t).value == F.inv(t)
    assert br.theorem251_fl(Fraction(1, 2), P).value == 0
    assert br.theorem251_fl(Fraction(3, 2), P).is_infinity
    with pytest.raises(ScalarError):
        br.theorem251_fl(1, P)


def test_fl_from_valuation_matches_case_a_pipeline():
    alphas = (2, 3, 4)
    M = br.diagonal_case_module(br.CASE_A, TRIPLE, P, alphas, (3, 5, 7))
    assert br.theorem251_fl(1, P, alphas[1]) == br.breuil_to_fl(M)


# ---------------------------------------------------------------- niveau two


def test_niveau2_exponent_relations():
    x = br.niveau2_exponents(6, 3, P)
    assert x["k1"] + x["r1"] * (P - 1) == x["k2"]
    assert (P - 1) * (x["r1"] + x["r2"]) == 2 * x["e"]


def test_niveau2_module_framed():
    M = br.niveau2_module((1, 2), (3, 4), (5, 6), (7, 8), (9, 10), TRIPLE, P)
    assert sbar.isotypic_check(M.V) and sbar.isotypic_check(M.A)
    assert M.f == 2 and M.e == P * P - 1


@settings(max_examples=4)
@given(st.integers(0, 10 ** 9))
def test_niveau2_fl_infinity_and_dual_zero(seed):
    rng = random.Random(seed)
    F2 = Fq(P, 2)
    u = lambda: tuple(rng.randrange(1, F2.q) for _ in range(2))
    M = br.niveau2_module(u(), u(), u(), u(), u(), TRIPLE, P)
    fl = br.breuil_to_fl(M)
    assert fl.is_infinity
    assert br.breuil_to_fl(br.dual_module(M)) == proj_invert(fl)


def test_niveau2_rejects_split_extension():
    with pytest.raises(ScalarError):
        br.niveau2_module((1, 2), (3, 4), (5, 6), (0, 8), (9, 10), TRIPLE, P)


def test_niveau2_diagonalization_keeps_diagonal():
    rng = random.Random(4)
    M0 = br.random_niveau2_start(TRIPLE, P, rng)
    R = br.diagonalize_frobenius(M0, br.NIVEAU2, TRIPLE)
    consts = [[M0.A.comps[c][i][i].coeff(0) for i in range(3)] for c in range(2)]
    assert R.diagonal == consts
    assert br.breuil_to_fl(R.module).is_infinity
