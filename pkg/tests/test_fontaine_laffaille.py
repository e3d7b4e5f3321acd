import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gl3fl import linalg as la
from gl3fl.fontaine_laffaille import (
    FLModule,
    NotInvertible,
    NotMaximallyNonSplit,
    OutOfFLRange,
    PhiPSeriesMatrix,
    PivotFailure,
    fl_dual,
    fl_invariant,
    fl_of_matrix,
    fl_to_phi_matrix,
    phi_conjugate,
    phi_matrix_normal_form,
    upper_triangularize,
)
from gl3fl.scalars import Fq, ProjPoint, proj_invert

P = 11
F = Fq(P)


def upper(mu0, a01, a02, mu1, a12, mu2):
    return [[mu0, a01, a02], [0, mu1, a12], [0, 0, mu2]]


def valid_upper(rng):
    return upper(rng.randrange(1, P), rng.randrange(1, P), rng.randrange(P), rng.randrange(1, P),
                 rng.randrange(1, P), rng.randrange(1, P))


# ---------------------------------------------------------------- the invariant


def test_fl_infinity_when_corner_vanishes():
    assert fl_invariant(F, upper(1, 2, 0, 3, 4, 5)).is_infinity


def test_fl_zero_example():
    assert fl_invariant(F, upper(1, 1, 1, 1, 1, 1)).value == 0


def test_fl_formula_example():
    # (1 - 2) / (-2) = 1/2 = 6 in F_11
    assert fl_invariant(F, upper(1, 1, 2, 1, 1, 1)).value == 6


def test_fl_requires_maximally_nonsplit_and_invertible():
    with pytest.raises(NotMaximallyNonSplit):
        fl_invariant(F, upper(1, 0, 2, 1, 1, 1))
    with pytest.raises(NotInvertible):
        fl_invariant(F, upper(1, 1, 2, 0, 1, 1))


@given(st.integers(0, 10 ** 9))
def test_fl_basis_scaling_invariance(seed):
    rng = random.Random(seed)
    U = valid_upper(rng)
    beta = [rng.randrange(1, P) for _ in range(3)]
    # new basis beta_i e_i: F -> diag(beta)^-1 F diag(beta)
    Ub = [[F.mul(F.mul(F.inv(beta[i]), U[i][j]), beta[j]) for j in range(3)] for i in range(3)]
    assert fl_invariant(F, Ub) == fl_invariant(F, U)


@given(st.integers(0, 10 ** 9))
def test_fl_never_equals_mu1(seed):
    U = valid_upper(random.Random(seed))
    assert fl_invariant(F, U).value != U[1][1]


# ---------------------------------------------------------------- triangularization


def test_upper_triangularize_already_upper():
    U = upper(1, 2, 3, 4, 5, 6)
    A, U2 = upper_triangularize(F, U)
    assert A == la.eye(3) and U2 == U


@given(st.integers(0, 10 ** 9))
def test_upper_triangularize_recovers_factors(seed):
    rng = random.Random(seed)
    L = [[1, 0, 0], [rng.randrange(P), 1, 0], [rng.randrange(P), rng.randrange(P), 1]]
    U0 = valid_upper(rng)
    A, U = upper_triangularize(F, la.mul(F, L, U0))
    assert U == U0
    assert A == la.inverse(F, L)


def test_upper_triangularize_pivot_failure():
    with pytest.raises(PivotFailure):
        upper_triangularize(F, [[0, 1, 0], [1, 0, 0], [0, 0, 1]])


# ---------------------------------------------------------------- duality


def test_fl_dual_of_infinity_is_zero():
    U = upper(1, 2, 0, 3, 4, 5)
    assert fl_of_matrix(F, fl_dual(F, U)).value == 0


@given(st.integers(0, 10 ** 9))
def test_fl_dual_inverts_class(seed):
    U = valid_upper(random.Random(seed))
    x = fl_invariant(F, U)
    D = fl_dual(F, U)
    assert fl_of_matrix(F, D) == proj_invert(x)
    assert fl_of_matrix(F, fl_dual(F, D)) == x


# ---------------------------------------------------------------- phi-matrices


def test_fl_to_phi_matrix_trivial():
    M = FLModule(F, P, (0, 0, 0), (tuple(map(tuple, la.eye(3))),))
    Phi = fl_to_phi_matrix(M, 6)
    assert Phi.equals(PhiPSeriesMatrix.from_constant(F, P, 6, [la.eye(3)]))


def test_fl_to_phi_matrix_rank_one():
    M = FLModule(F, P, (4,), (((7,),),))
    Phi = fl_to_phi_matrix(M, 8)
    assert Phi.comps[0][4] == [[7]] and all(Phi.comps[0][d] == [[0]] for d in range(8) if d != 4)


def test_fl_to_phi_matrix_case_a_module():
    a, b = 6, 3
    Fm = upper(2, 1, 3, 4, 1, 5)
    M = FLModule(F, P, (1, b + 1, a + 1), (tuple(map(tuple, Fm)),))
    Phi = fl_to_phi_matrix(M)
    for r, m in enumerate((1, b + 1, a + 1)):
        assert Phi.comps[0][m][r] == Fm[r]


def test_weights_outside_fl_range_rejected():
    with pytest.raises(OutOfFLRange):
        FLModule(F, P, (0, 3, P - 1), (tuple(map(tuple, la.eye(3))),))


def test_normal_form_of_normal_input_is_trivial():
    Fm = upper(2, 1, 3, 4, 1, 5)
    M = FLModule(F, P, (1, 4, 7), (tuple(map(tuple, Fm)),))
    nf = phi_matrix_normal_form(fl_to_phi_matrix(M))
    assert nf.weights == (1, 4, 7)
    assert nf.C[0][0] == la.eye(3)
    assert fl_of_matrix(F, nf.module.mats[0]) == fl_invariant(F, Fm)


def _random_unit_series(rng, N, n=3):
    while True:
        C0 = [[rng.randrange(P) for _ in range(n)] for _ in range(n)]
        if la.det(F, C0):
            break
    return [C0] + [[[rng.randrange(P) if rng.random() < 0.3 else 0 for _ in range(n)] for _ in range(n)]
                   for _ in range(N - 1)]


@given(st.integers(0, 10 ** 9))
def test_normal_form_round_trip(seed):
    # oracle: build C0^-1 Diag(pbar^m) F phi(C0) and recover weights and FL class
    rng = random.Random(seed)
    weights = (0, 3, 7)
    Fm = valid_upper(rng)
    M = FLModule(F, P, weights, (tuple(map(tuple, Fm)),))
    N = 3 * (P - 1)
    Phi = phi_conjugate(fl_to_phi_matrix(M, N), [_random_unit_series(rng, N)])
    nf = phi_matrix_normal_form(Phi)
    assert nf.weights == weights
    assert fl_of_matrix(F, nf.module.mats[0]) == fl_invariant(F, Fm)
    back = phi_conjugate(Phi, nf.C)
    assert back.equals(fl_to_phi_matrix(nf.module, N), nf.checked_to)


@given(st.integers(0, 10 ** 9), st.integers(0, P - 2))
def test_normal_form_rank_one(seed, m):
    rng = random.Random(seed)
    N = 3 * (P - 1)
    s = [rng.randrange(1, P)] + [rng.randrange(P) for _ in range(N - 1 - m)]
    comps = [[[[0]] for _ in range(N)]]
    for d, c in enumerate(s):
        comps[0][m + d] = [[c]]
    nf = phi_matrix_normal_form(PhiPSeriesMatrix(F, P, N, comps))
    assert nf.weights == (m,)
    assert nf.module.mats[0] == ((s[0],),)
