import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from gl3fl import combinatorics as cb

P = 11


def generic_triples():
    return st.tuples(st.sampled_from([11, 13, 17, 19]), st.integers(3, 8), st.integers(3, 8), st.integers(-5, 5)) \
        .map(lambda t: (t[0], (t[3] + t[1] + t[2], t[3] + t[1], t[3]))) \
        .filter(lambda x: cb.is_generic(*x[1], x[0]))


@pytest.mark.parametrize("triple,ok", [((6, 3, 0), True), ((5, 3, 0), False), ((8, 4, 0), False)])
def test_is_generic(triple, ok):
    assert cb.is_generic(*triple, P) == ok


def test_niveau1_example():
    got = cb.niveau1_allowed(6, 3, 0, P)
    assert got == {cb.InertialTypeN1.make(P, 6, 3, 0), cb.InertialTypeN1.make(P, 5, 3, 1)}


@given(generic_triples())
def test_niveau1_two_distinct_types_with_same_sum(pt):
    p, (a2, a1, a0) = pt
    got = cb.niveau1_allowed(a2, a1, a0, p)
    assert len(got) == 2
    assert all(sum(t.exps) % (p - 1) == (a2 + a1 + a0) % (p - 1) for t in got)


def test_niveau1_rejects_non_generic():
    with pytest.raises(cb.NonGeneric):
        cb.niveau1_allowed(5, 3, 0, P)


def test_niveau2_family_i_pairs():
    a, b = 6, 3
    fam = cb.niveau2_families(a, b, 0, P)["i"]
    assert sorted(fam) == sorted([(-1, a + P * b + 1), (0, a + P * b - (P - 1)), (0, a + P * b), (1, a + P * b - P)])


@given(generic_triples())
def test_niveau2_outputs_are_niveau2_and_stable(pt):
    p, t = pt
    got = cb.niveau2_allowed(*t, p)
    e = p * p - 1
    for tau in got:
        assert tau.y % (p + 1) != 0
        assert cb.InertialTypeN2.make(p, tau.x, p * tau.y % e) == tau


def test_fl_forcing_examples():
    a2, a1, a0 = 6, 3, 0
    t_inf = cb.InertialTypeN2.make(P, a0, a2 + 1 + P * (a1 - 1))
    t_zero = cb.InertialTypeN2.make(P, a2, a0 - 1 + P * (a1 + 1))
    assert cb.fl_forcing(a2, a1, a0, P, t_inf) == cb.INFINITY
    assert cb.fl_forcing(a2, a1, a0, P, t_zero) == cb.ZERO
    t00 = cb.InertialTypeN2.make(P, a0, a2 + P * a1)
    assert cb.fl_forcing(a2, a1, a0, P, t00) is None


@given(generic_triples())
def test_forced_types_are_allowed(pt):
    p, t = pt
    allowed = cb.niveau2_allowed(*t, p)
    forced = [x for x in allowed if cb.fl_forcing(*t, p, x)]
    assert sorted(cb.fl_forcing(*t, p, x) for x in forced) == [cb.INFINITY, cb.ZERO]


def test_rank1_constraints():
    got = cb.rank1_niveau2_constraints(P)
    assert (0, 0, 0) in got
    e = P * P - 1
    # oracle: brute-force double loop
    brute = sum(1 for r in range(2 * (P + 1) + 1) for k in range(e) if (k + P * r) % (P + 1) == 0)
    assert len(got) == brute


def test_family_i_r_values_contain_listed():
    a, b = 6, 3
    want = {1 + (a - b), 2 + (a - b), P + 1 + (a - b), P + 2 + (a - b)}
    assert want <= set(cb.family_i_r_values(a, b, P))


# ---------------------------------------------------------------- weights


def test_lemma443_list():
    L = cb.lemma443_list(6, 3, 0, P)
    assert len(set(L)) == 7
    assert cb.SerreWeight(5, 3, 1) in L
    assert cb.SerreWeight(0 + P, 3, 6 - P) in L
    assert all(w.restricted(P) for w in L)


def test_bounds_generic_and_infinity():
    lo, up = cb.serre_weight_bounds(6, 3, 0, P, cb.GENERIC)
    assert lo == {cb.SerreWeight(5, 3, 1)} and len(up) == 2
    lo, up = cb.serre_weight_bounds(6, 3, 0, P, cb.INFINITY)
    assert lo == {cb.SerreWeight(5, 3, 1), cb.SerreWeight(6, 0, 3 - P + 1)}


def test_bounds_zero():
    lo, up = cb.serre_weight_bounds(6, 3, 0, P, cb.ZERO)
    assert cb.SerreWeight(3 + P - 1, 6, 0) in lo and lo <= up


@given(generic_triples(), st.sampled_from([cb.GENERIC, cb.ZERO, cb.INFINITY]))
def test_bounds_contained_in_list(pt, cls):
    p, (a, b, c) = pt
    lo, up = cb.serre_weight_bounds(a, b, c, p, cls)
    assert lo <= up <= set(cb.lemma443_list(a, b, c, p))
    assert all(w.restricted(p) for w in up)


def test_weight_dual():
    assert cb.weight_dual(6, 3, 0) == (0, -3, -6)


@given(generic_triples())
def test_weight_dual_involution_and_genericity(pt):
    p, t = pt
    d = cb.weight_dual(t)
    assert cb.weight_dual(d) == t
    assert cb.is_generic(*d, p)


def test_fl_class_of():
    from gl3fl.scalars import Fq, ProjPoint
    F = Fq(P)
    assert cb.fl_class_of(ProjPoint.infinity(F)) == cb.INFINITY
    assert cb.fl_class_of(ProjPoint(F, 0)) == cb.ZERO
    assert cb.fl_class_of(ProjPoint(F, 4)) == cb.GENERIC
