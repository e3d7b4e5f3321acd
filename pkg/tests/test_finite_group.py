import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gl3fl import finite_group as fg
from gl3fl.combinatorics import NonGeneric

P = 11
TRIPLE = (6, 3, 0)


def random_gl3(rng, p):
    while True:
        g = fg.mat([[rng.randrange(p) for _ in range(3)] for _ in range(3)], p)
        if fg.mat_det(g, p):
            return g


def random_vector(rng, p, char):
    X = fg.flag_space(p)
    return fg.PSFunction(p, char, np.array([rng.randrange(p) for _ in range(X.dim)], dtype=np.int64))


@pytest.fixture(scope="module")
def s_report():
    return fg.verify_S_observables(*TRIPLE, P)


# ---------------------------------------------------------------- flags and Bruhat cells


@pytest.mark.parametrize("p,n", [(7, 456), (11, 1596)])
def test_flag_count(p, n):
    pts = fg.flag_enumerate(p)
    assert len(pts) == n == (p + 1) * (p * p + p + 1)
    assert len(set(pts)) == n


@pytest.mark.parametrize("p", [5, 7, 11])
def test_cell_sizes(p):
    sizes = {}
    for x in fg.flag_enumerate(p):
        sizes[x.length] = sizes.get(x.length, 0) + 1
    assert sizes == {0: 1, 1: 2 * p, 2: 2 * p * p, 3: p ** 3}


def test_bruhat_upper_triangular():
    g = fg.u(1, 2, 3, 7)
    b, x = fg.bruhat_normalize(g, 7)
    assert b == g and x.length == 0


def test_bruhat_w0():
    b, x = fg.bruhat_normalize(fg.w0(7), 7)
    assert b == fg.identity(7)
    assert x.length == 3 and not any(x.params)


@given(st.integers(0, 10 ** 9), st.sampled_from([5, 7, 11]))
def test_bruhat_reconstruction(seed, p):
    g = random_gl3(random.Random(seed), p)
    b, x = fg.bruhat_normalize(g, p)
    assert fg.is_upper(b)
    assert fg.mat_mul(b, fg.flag_rep(x, p), p) == g


# ---------------------------------------------------------------- the action


def test_identity_acts_trivially():
    F = random_vector(random.Random(1), 7, (4, 2, 0))
    assert fg.act(fg.identity(7), F).equals(F)


@settings(max_examples=100)
@given(st.integers(0, 10 ** 9))
def test_action_is_a_group_law(seed):
    rng = random.Random(seed)
    p = 7
    F = random_vector(rng, p, (4, 2, 0))
    g, h = random_gl3(rng, p), random_gl3(rng, p)
    assert fg.act(g, fg.act(h, F)).equals(fg.act(fg.mat_mul(g, h, p), F))


@given(st.integers(0, 10 ** 9))
def test_evaluate_matches_translation(seed):
    rng = random.Random(seed)
    p = 7
    F = random_vector(rng, p, (4, 2, 0))
    g, h = random_gl3(rng, p), random_gl3(rng, p)
    assert fg.evaluate(fg.act(h, F), g) == fg.evaluate(F, fg.mat_mul(g, h, p))


def test_torus_scales_eigenvector():
    p, char = 7, (4, 2, 0)
    for eig in [(4, 2, 0), (2, 4, 0), (0, 2, 4)]:
        (f,) = fg.iwahori_eigenvectors(p, char, eig)
        assert fg.is_T_eigen(f, eig)
        assert fg.is_fixed(f, fg.u(1, 0, 0, p)) and fg.is_fixed(f, fg.u(0, 0, 1, p))


# ---------------------------------------------------------------- eigenspaces


def test_eigenspace_dimensions():
    a2, a1, a0 = TRIPLE
    dims = {e: len(fg.iwahori_eigenvectors(P, TRIPLE, e)) for e in [(a1, a2, a0), (a2, a0, a1), (a0, a1, a2)]}
    assert set(dims.values()) == {1}


def test_non_weyl_eigentriple_has_no_vectors():
    assert fg.iwahori_eigenvectors(P, TRIPLE, (1, 3, 0)) == []


@pytest.mark.parametrize("p,char", [(7, (4, 2, 0)), (11, (6, 3, 0))])
def test_weyl_orbit_eigenspaces_are_lines(p, char):
    import itertools
    for eig in set(itertools.permutations(char)):
        assert len(fg.iwahori_eigenvectors(p, char, eig)) == 1


def test_canonical_eigenvector_support():
    # the (chi)-eigenvector of Ind(chi) is supported on the identity cell, value 1 at 1
    f = fg.canonical_eigenvector(P, TRIPLE, TRIPLE, anchor=fg.identity(P))
    X = fg.flag_space(P)
    assert [x.length for x in f.support()] == [0]
    assert f.values[X.identity_index] == 1


# ---------------------------------------------------------------- operators


def test_term_counts():
    assert len(fg.op_S(*TRIPLE, P)) == P ** 3
    assert len(fg.op_Sprime(*TRIPLE, P)) == P ** 3
    assert len(fg.op_Uprime1(P)) == P * P
    assert len(fg.op_Uprime2(P)) == P * P
    a2, a1, a0 = TRIPLE
    assert len(fg.op_remark319(*TRIPLE, P)) <= P ** 3 * (P - (a2 - a0) + 1)


def test_S_coefficient_at_x_z_one():
    S = fg.op_S(*TRIPLE, P)
    c = S.combined()
    # the term u(1, 0, 1) w0 has coefficient 1^k 1^l = 1
    g = fg.mat_mul(fg.u(1, 0, 1, P), fg.w0(P), P)
    assert c[g] == 1


def test_S_dual_triple_matches_weight_dual_display():
    # the operator for (-c,-b,-a) is op_S evaluated at that triple
    from gl3fl.combinatorics import weight_dual
    a, b, c = TRIPLE
    A = weight_dual(a, b, c)
    assert fg.op_S(*A, P).combined() == fg.op_S(-c, -b, -a, P).combined()


def test_theta_is_an_involutive_automorphism():
    rng = random.Random(2)
    for _ in range(20):
        g, h = random_gl3(rng, P), random_gl3(rng, P)
        assert fg.theta(fg.mat_mul(g, h, P), P) == fg.mat_mul(fg.theta(g, P), fg.theta(h, P), P)
        assert fg.theta(fg.theta(g, P), P) == g


def test_S_observables(s_report):
    assert s_report.ok, s_report.checks


def test_S_transport_relabeling(s_report):
    assert s_report.theta_S_is_Sprime and s_report.transport_commutes


def test_S_requires_generic_triple():
    with pytest.raises(NonGeneric):
        fg.verify_S_observables(5, 3, 0, P)


def test_S_value():
    r = fg.verify_lemma317(*TRIPLE, P)
    assert r.ok and r.value != 0
    assert r.binomial == 56 % P  # C(8, 3)
    assert r.value == r.direct_sum == r.closed_form


def test_S_value_linear_in_f():
    r1 = fg.verify_lemma317(*TRIPLE, P)
    r3 = fg.verify_lemma317(*TRIPLE, P, scale=3)
    assert r3.value == 3 * r1.value % P and r3.closed_form == 3 * r1.closed_form % P


def test_S_value_vanishes_at_neighbouring_point():
    # without the -1 entry the evaluation point misses the support and gives 0
    r = fg.verify_lemma317(*TRIPLE, P)
    assert r.value_at_alt_point == 0


def test_uprime2():
    r = fg.verify_uprime2(*TRIPLE, P)
    assert r.eigen_ok
    assert r.value_at_cycle_inverse == 1


def test_weyl_operator():
    r = fg.verify_weyl_operator(*TRIPLE, P)
    assert r.ok
    assert r.dual_dim == fg.weyl_dimension((TRIPLE[2] + P - 1, TRIPLE[1], TRIPLE[0] - P + 1)) or r.dual_dim > 0


# ---------------------------------------------------------------- spans


def test_zero_span():
    assert fg.submodule_dim([fg.PSFunction.zero(7, (4, 2, 0))]) == 0


def test_identity_indicator_generates_everything():
    p = 7
    X = fg.flag_space(p)
    f = fg.PSFunction.indicator(p, (4, 2, 0), X.points[X.identity_index])
    assert fg.submodule_dim([f]) == X.dim


def test_weyl_dimension_formula():
    assert fg.weyl_dimension((0, 0, 0)) == 1
    assert fg.weyl_dimension((1, 0, 0)) == 3
    assert fg.weyl_dimension((2, 1, 0)) == 8


def test_span_regression_values():
    a2, a1, a0 = TRIPLE
    f = fg.canonical_eigenvector(P, TRIPLE, (a1, a2, a0), anchor=fg.s1(P))
    Sf = fg.op_S(*TRIPLE, P).apply(f)
    # frozen after the first verified run; equals the Weyl dimension of (a0+p-1, a1, a2-p+1)
    assert fg.submodule_dim([Sf]) == 512 == fg.weyl_dimension((a0 + P - 1, a1, a2 - P + 1))
    assert fg.submodule_dim([f]) == 1064
