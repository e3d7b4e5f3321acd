import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gl3fl import breuil as br
from gl3fl.sbar import (
    FILTRATION,
    FROBENIUS,
    Series,
    SbarPoly,
    adjugate,
    det,
    graded_from_rows,
    identity,
    inv_frob_exp,
    invert_unit,
    isotypic_check,
    mul,
    phi_apply,
    pm_det,
    pm_identity,
    pm_mul,
    smith_exponents,
)
from gl3fl.scalars import Fq, TensorScalar

P = 11
TRIPLE = (6, 3, 0)


def random_frobenius(rng, p=P, f=1, types=(0, 3, 6)):
    F = Fq(p, f)
    rows = br.random_frobenius_rows(F, p, f, types, rng)
    return br.build_matrix(F, p, f, rows, types, FROBENIUS)


# ---------------------------------------------------------------- inv_frob_exp


def test_inv_frob_exp_f1_is_identity():
    assert all(inv_frob_exp(a, P, 1) == a % (P - 1) for a in range(30))


def test_inv_frob_exp_f2_example():
    assert inv_frob_exp(7, 11, 2) == 77


@given(st.integers(0, 10 ** 6), st.sampled_from([(5, 1), (5, 2), (11, 2), (7, 3)]))
def test_inv_frob_exp_defining_property(a, pf):
    p, f = pf
    e = p ** f - 1
    assert p * inv_frob_exp(a, p, f) % e == a % e


# ---------------------------------------------------------------- isotypic check


def test_isotypic_zero_and_scalar_identity():
    F = Fq(P)
    e = P - 1
    Z = graded_from_rows(F, P, 1, [[None] * 3 for _ in range(3)], (0, 3, 6), FILTRATION)
    assert isotypic_check(Z)
    U = graded_from_rows(F, P, 1, [[{e: 1} if i == j else None for j in range(3)] for i in range(3)],
                         (2, 2, 2), FILTRATION)
    assert isotypic_check(U)


def test_isotypic_mns_filtration():
    assert isotypic_check(br.mns_filtration(2, 3, 5, TRIPLE, P))


def test_isotypic_detects_wrong_degree():
    F = Fq(P)
    bad = graded_from_rows(F, P, 1, [[{1: 1}, None, None], [None, {0: 1}, None], [None, None, {0: 1}]],
                           (0, 3, 6), FROBENIUS)
    assert not isotypic_check(bad)


@given(st.integers(0, 10 ** 9))
def test_frobenius_times_filtration_stays_framed(seed):
    rng = random.Random(seed)
    A = random_frobenius(rng)
    V = br.mns_filtration(rng.randrange(1, P), rng.randrange(1, P), rng.randrange(P), TRIPLE, P)
    assert isotypic_check(mul(A, V))


# ---------------------------------------------------------------- phi


def test_phi_kills_high_powers_and_fixes_constants():
    F = Fq(P)
    e = P - 1
    x = SbarPoly.monomial(F, P, 1, 1, e)
    assert all(s.is_zero() for s in phi_apply(x).comps)
    c = SbarPoly.monomial(F, P, 1, 7, 0)
    assert phi_apply(c).equals(c)


def _random_sbar(rng, F, p, f, terms=6):
    cap = (p ** f - 1) * p
    comps = []
    for _ in range(f):
        comps.append(Series(F, cap, {rng.randrange(cap // 3): rng.randrange(F.q) for _ in range(terms)}))
    return SbarPoly(p, tuple(comps))


def _expand_product(x, y):
    # oracle: schoolbook product of coefficient dictionaries, truncated at ep
    cap = x.e * x.p
    out = []
    for a, b in zip(x.comps, y.comps):
        F = a.F
        d = {}
        for i, u in a.c.items():
            for j, v in b.c.items():
                if i + j < cap:
                    d[i + j] = F.add(d.get(i + j, 0), F.mul(u, v))
        out.append(Series(F, cap, d))
    return SbarPoly(x.p, tuple(out))


@given(st.integers(0, 10 ** 9), st.sampled_from([1, 2]))
def test_phi_multiplicative(seed, f):
    rng = random.Random(seed)
    p = 5
    F = Fq(p, 2)
    x, y = _random_sbar(rng, F, p, f), _random_sbar(rng, F, p, f)
    assert (x * y).equals(_expand_product(x, y))
    assert phi_apply(x * y).equals(phi_apply(x) * phi_apply(y))


def test_phi_cycles_idempotent_components():
    F = Fq(5, 2)
    x = SbarPoly.monomial(F, 5, 2, TensorScalar(F, [3, 4]), 0)
    assert [s.coeff(0) for s in phi_apply(x).comps] == [4, 3]


# ---------------------------------------------------------------- matrix algebra


def test_adjugate_identity():
    I = identity(Fq(P), P, 1, 3, (0, 3, 6))
    assert all(a.equals(b) for ra, rb in zip(adjugate(I).comps[0], I.comps[0]) for a, b in zip(ra, rb))


def _leibniz_det(C):
    # oracle: permutation expansion
    F, prec = C[0][0].F, C[0][0].prec
    tot = Series(F, prec)
    for perm in itertools.permutations(range(3)):
        sign = 1
        for i in range(3):
            for j in range(i + 1, 3):
                if perm[i] > perm[j]:
                    sign = -sign
        t = C[0][perm[0]] * C[1][perm[1]] * C[2][perm[2]]
        tot = tot + t if sign > 0 else tot - t
    return tot.truncate(prec)


@given(st.integers(0, 10 ** 9))
def test_adjugate_times_matrix_is_det(seed):
    A = random_frobenius(random.Random(seed))
    C = A.comps[0]
    cap = A.cap
    d = _leibniz_det(C)
    assert d.equals(pm_det(C).truncate(cap))
    prod = pm_mul(C, adjugate(A).comps[0])
    for i in range(3):
        for j in range(3):
            want = d if i == j else Series(d.F, cap)
            assert prod[i][j].truncate(cap).equals(want)


def test_invert_unit_diagonal():
    F = Fq(P)
    D = br.build_matrix(F, P, 1, br.diag_rows((2, 3, 5)), (0, 3, 6), FROBENIUS)
    inv = invert_unit(D).comps[0]
    assert [inv[i][i].coeff(0) for i in range(3)] == [F.inv(2), F.inv(3), F.inv(5)]


# ---------------------------------------------------------------- smith exponents


def test_smith_identity_and_diagonal():
    F = Fq(P)
    I = identity(F, P, 1, 3)
    assert smith_exponents(I) == [0, 0, 0]
    D = graded_from_rows(F, P, 1, [[{2: 1}, None, None], [None, {5: 1}, None], [None, None, {9: 1}]])
    assert smith_exponents(D) == [2, 5, 9]


def test_smith_generic_case():
    e, a = P - 1, 6
    assert smith_exponents(br.mns_filtration(1, 1, 2, TRIPLE, P)) == [e - a, e, e + a]


@given(st.integers(0, 10 ** 9))
def test_smith_invariant_under_unimodular(seed):
    rng = random.Random(seed)
    V = br.mns_filtration(rng.randrange(1, P), rng.randrange(1, P), rng.randrange(P), TRIPLE, P)
    A, B = random_frobenius(rng), random_frobenius(rng)
    want = smith_exponents(V)
    assert smith_exponents(mul(A, V)) == want
    assert smith_exponents(mul(V, B)) == want


@given(st.integers(1, P - 1), st.integers(1, P - 1), st.integers(0, P - 1))
def test_smith_sum_is_three_e(lam, mu, nu):
    assert sum(smith_exponents(br.mns_filtration(lam, mu, nu, TRIPLE, P))) == 3 * (P - 1)
