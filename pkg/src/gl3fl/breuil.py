"""Rank three Breuil modules with descent data, presented by (types, V, A).

V is the matrix of Fil^2 in a framed basis (FILTRATION grading), A the matrix
of phi_2 (FROBENIUS grading). A change of basis replaces (V, A)
by (V', phi(B)) whenever A V' = V B mod u^{3e}.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg as la
from .combinatorics import require_generic
from .fontaine_laffaille import (
    FLError,
    OutOfFLRange,
    PhiPSeriesMatrix,
    combine_components,
    default_precision,
    fl_of_matrix,
    phi_matrix_normal_form,
    phi_smith_exponents,
)
from .sbar import (
    BASECHANGE,
    FILTRATION,
    FROBENIUS,
    PLAIN,
    ComponentMismatch,
    GradedMatrix,
    Series,
    inv_frob_exp,
    isotypic_check,
    phi_matrix,
    pm_adjugate,
    pm_det,
    pm_invert_unit,
    pm_map,
    pm_mul,
    pm_sub,
    pm_transpose,
    pm_truncate,
    smith_exponents,
)
from .scalars import Fq, NotAUnit, ProjPoint, ScalarError, proj_invert, specialize


class BreuilError(ArithmeticError):
    pass


class ShapeMismatch(BreuilError):
    pass


class AxiomViolation(BreuilError):
    pass


class CongruenceFailure(BreuilError):
    pass


class GradingViolation(BreuilError):
    pass


class NotUngradeable(BreuilError):
    pass


CASE_A, CASE_B, CASE_C, NIVEAU2 = "A", "B", "C", "N2"
SHAPES = (CASE_A, CASE_B, CASE_C, NIVEAU2)


# ---------------------------------------------------------------- the data


@dataclass(frozen=True)
class BreuilModuleData:
    p: int
    types: tuple  # (a_0, a_1, a_2) residues mod e
    V: GradedMatrix
    A: GradedMatrix
    r: int = 2

    @property
    def f(self):
        return self.V.f

    @property
    def e(self):
        return self.p ** self.f - 1

    @property
    def field(self) -> Fq:
        return self.V.field

    @property
    def cap(self):
        return self.e * self.p

    def validate(self) -> None:
        if not isotypic_check(self.V):
            raise GradingViolation("filtration matrix is not framed")
        if not isotypic_check(self.A):
            raise GradingViolation("Frobenius matrix is not framed")
        for C in self.A.comps:
            if pm_det(C).coeff(0) == 0:
                raise NotAUnit("Frobenius matrix is not invertible")
        ex = smith_exponents(self.V)
        if max(ex) > self.e * self.r:
            raise AxiomViolation(f"u^(er) M is not contained in Fil^r: exponents {ex}")


def _entry(F, prec, spec, comp):
    """spec: None, or list of (coeff, deg); coeff an int or a per-component tuple."""
    d = {}
    for c, deg in spec or ():
        if isinstance(c, tuple):
            c = c[comp]
        if c:
            d[deg] = F.add(d.get(deg, 0), c)
    return Series(F, prec, d)


def build_matrix(F: Fq, p: int, f: int, rows, types, rule) -> GradedMatrix:
    e = p ** f - 1
    prec = e * p
    comps = []
    for i in range(f):
        comps.append(tuple(tuple(_entry(F, prec, x, i) for x in row) for row in rows))
    types = tuple(t % e for t in types)
    return GradedMatrix(p, tuple(comps), types, types, rule)


def make_module(F, p, f, types, V_rows, A_rows, validate=True) -> BreuilModuleData:
    e = p ** f - 1
    types = tuple(t % e for t in types)
    M = BreuilModuleData(
        p,
        types,
        build_matrix(F, p, f, V_rows, types, FILTRATION),
        build_matrix(F, p, f, A_rows, types, FROBENIUS),
    )
    if validate:
        M.validate()
    return M


def diag_rows(vals):
    return [[[(vals[i], 0)] if i == j else None for j in range(3)] for i in range(3)]


# ---------------------------------------------------------------- residual filtrations


def mns_filtration(lam: int, mu: int, nu: int, triple, p: int, F: Optional[Fq] = None) -> GradedMatrix:
    """Columns f_0, f_1, f_2 of the maximally non-split filtration."""
    a2, a1, a0 = triple
    require_generic(a2, a1, a0, p)
    F = F or Fq(p)
    if F.mul(lam, mu) == 0:
        raise ValueError("lambda * mu must be nonzero")
    e = p - 1
    rows = [
        [[(1, e)], None, None],
        [[(mu, e - (a1 - a0))], [(1, e)], None],
        [[(nu, e - (a2 - a0))], [(lam, e - (a2 - a1))], [(1, e)]],
    ]
    return build_matrix(F, p, 1, rows, (a0, a1, a2), FILTRATION)


def elementary_divisor_case(lam, mu, nu, F: Fq) -> str:
    if F.mul(lam, mu) == 0:
        raise ValueError("lambda * mu must be nonzero")
    if nu == 0:
        return "iii"
    if F.sub(nu, F.mul(lam, mu)) == 0:
        return "ii"
    return "i"


def expected_smith(case: str, triple, p: int) -> list:
    a2, a1, a0 = triple
    e = p - 1
    return sorted(
        {
            "i": (e - (a2 - a0), e, e + (a2 - a0)),
            "ii": (e - (a2 - a0), e + (a2 - a1), e + (a1 - a0)),
            "iii": (e - (a2 - a1), e - (a1 - a0), e + (a2 - a0)),
        }[case]
    )


# ---------------------------------------------------------------- change of basis


def change_of_basis(M: BreuilModuleData, Vp: GradedMatrix, B: GradedMatrix) -> BreuilModuleData:
    """(V, A) -> (V', phi(B)), after checking A V' = V B mod u^{e(r+1)}."""
    n = M.e * (M.r + 1)
    for Ai, Vi, Vpi, Bi in zip(M.A.comps, M.V.comps, Vp.comps, B.comps):
        if not _pm_equal_mod(pm_mul(Ai, Vpi), pm_mul(Vi, Bi), n):
            raise CongruenceFailure("A V' and V B differ below u^{e(r+1)}")
    Vp = Vp.with_comps(Vp.comps, rule=FILTRATION, row_types=M.types, col_types=M.types)
    B = B.with_comps(B.comps, rule=BASECHANGE, row_types=M.types, col_types=M.types)
    if not isotypic_check(Vp):
        raise GradingViolation("new filtration matrix is not framed")
    if not isotypic_check(B):
        raise GradingViolation("change of basis matrix is not graded")
    for C in B.comps:
        if pm_det(C).coeff(0) == 0:
            raise NotAUnit("change of basis matrix is not invertible")
    Bfull = B.with_comps([pm_map(C, lambda s: s.with_prec(M.cap)) for C in B.comps])
    phiB = phi_matrix(Bfull)
    newA = phiB.with_comps(phiB.comps, rule=FROBENIUS)
    return BreuilModuleData(M.p, M.types, Vp, newA, M.r)


def _pm_equal_mod(X, Y, n):
    return all(a.equals(b, n) for ra, rb in zip(X, Y) for a, b in zip(ra, rb))


# ---------------------------------------------------------------- templates and diagonalization


def niveau2_exponents(a: int, b: int, p: int) -> dict:
    e = p * p - 1
    k1 = a + 1 + p * (b - 1)
    k2 = b - 1 + p * (a + 1)
    r1 = a - b + 2
    r2 = 2 * p - (a - b)
    return {"e": e, "k1": k1, "k2": k2, "r1": r1, "r2": r2}


def shape_template(shape: str, triple, p: int):
    """(fixed monomials, unknown slots) of the residual filtration shape.

    fixed: list of (i, j, deg) with coefficient 1; unknowns: list of (i, j, deg).
    """
    a2, a1, a0 = triple
    a, b = a2 - a0, a1 - a0
    if shape == NIVEAU2:
        x = niveau2_exponents(a, b, p)
        e = x["e"]
        fixed = [(0, 0, e), (1, 1, x["r1"] * (p - 1)), (2, 2, x["r2"] * (p - 1))]
        unknowns = [(2, 0, 2 * e - x["k2"]), (1, 2, 0)]
        return fixed, unknowns
    e = p - 1
    if shape == CASE_A:
        fixed = [(0, 2, e + a), (1, 1, e), (2, 0, e - a)]
        unknowns = [(0, 0, e), (0, 1, e + b), (1, 0, e - b)]
    elif shape == CASE_B:
        fixed = [(0, 1, e + b), (1, 2, e + a - b), (2, 0, e - a)]
        unknowns = [(0, 0, e), (1, 0, e - b)]
    elif shape == CASE_C:
        fixed = [(0, 2, e + a), (1, 0, e - b), (2, 1, e - (a - b))]
        unknowns = [(0, 0, e), (0, 1, e + b)]
    else:
        raise ShapeMismatch(f"unknown shape {shape!r}")
    return fixed, unknowns


def template_rows(shape, triple, p, consts) -> list:
    """Filtration rows of the shape with the given constants (one per unknown slot)."""
    fixed, unknowns = shape_template(shape, triple, p)
    rows = [[None] * 3 for _ in range(3)]
    for i, j, deg in fixed:
        rows[i][j] = [(1, deg)]
    for (i, j, deg), c in zip(unknowns, consts):
        rows[i][j] = (rows[i][j] or []) + [(c, deg)]
    return rows


def constants_admissible(shape: str, consts, F: Fq) -> bool:
    """Whether template constants keep the filtration in the declared case.

    Case A needs the elementary divisors of the generic case: c00 c01 c10 != 0 and
    c00 != c01 c10; Cases B and C need both constants to be units.  Other values
    give a module of a different shape (the pipeline then leaves the FL range).
    """
    if shape == CASE_A:
        c00, c01, c10 = consts
        return F.mul(F.mul(c00, c01), c10) != 0 and c00 != F.mul(c01, c10)
    if shape in (CASE_B, CASE_C):
        return all(c != 0 for c in consts)
    return True


def shape_types(shape, triple, p) -> tuple:
    a2, a1, a0 = triple
    if shape == NIVEAU2:
        x = niveau2_exponents(a2 - a0, a1 - a0, p)
        return (0, x["k1"], x["k2"])
    return (a0, a1, a2)


def shape_f(shape) -> int:
    return 2 if shape == NIVEAU2 else 1


@dataclass
class DiagonalizationResult:
    module: BreuilModuleData
    steps: int
    constants: list  # per component, values at the unknown slots
    diagonal: list  # per component, constant diagonal of A
    congruence_checks: int


def _is_constant_diagonal(A: GradedMatrix) -> bool:
    for C in A.comps:
        for i in range(3):
            for j in range(3):
                s = C[i][j]
                if i != j and not s.is_zero():
                    return False
                if i == j and any(d != 0 for d in s.c):
                    return False
    return True


def _read_constants(M: BreuilModuleData, shape, triple):
    fixed, unknowns = shape_template(shape, triple, M.p)
    out = []
    for C in M.V.comps:
        out.append([C[i][j].coeff(deg) for i, j, deg in unknowns])
    return out


def _matches_template(M, shape, triple) -> bool:
    fixed, unknowns = shape_template(shape, triple, M.p)
    consts = _read_constants(M, shape, triple)
    F = M.field
    for comp, C in enumerate(M.V.comps):
        want = [[{} for _ in range(3)] for _ in range(3)]
        for i, j, deg in fixed:
            want[i][j][deg] = 1
        for (i, j, deg), c in zip(unknowns, consts[comp]):
            if c:
                want[i][j][deg] = F.add(want[i][j].get(deg, 0), c)
        for i in range(3):
            for j in range(3):
                if C[i][j].c != want[i][j]:
                    return False
    return True


def diagonalization_step(M: BreuilModuleData, shape: str, triple) -> Tuple[BreuilModuleData, list]:
    """One change of basis onto the residual shape; the free constants are solved for."""
    F, p, f, e, cap = M.field, M.p, M.f, M.e, M.cap
    fixed, unknowns = shape_template(shape, triple, p)
    dets = [pm_det(C) for C in M.V.comps]
    vals = [d.val() for d in dets]
    if len(set(vals)) != 1:
        raise ComponentMismatch("determinant valuations differ across components")
    v = vals[0]
    if v != 3 * e:
        raise ShapeMismatch(f"det V has valuation {v}, expected {3 * e}")
    consts_all, Vp_comps, B_comps = [], [], []
    for comp in range(f):
        Vc, Ac = M.V.comps[comp], M.A.comps[comp]
        P = pm_truncate(pm_mul(pm_adjugate(Vc), Ac), cap)
        # base product P . V'_0 and the columns contributed by each unknown
        base = [[Series(F, cap) for _ in range(3)] for _ in range(3)]
        for i, j, deg in fixed:
            for r in range(3):
                base[r][j] = base[r][j] + P[r][i].shift(deg).truncate(cap)
        contrib = []
        for i, j, deg in unknowns:
            col = [P[r][i].shift(deg).truncate(cap) for r in range(3)]
            contrib.append((j, col))
        rows, rhs = [], []
        for r in range(3):
            for s in range(3):
                degs = {t for t in base[r][s].c if t < v}
                for j, col in contrib:
                    if j == s:
                        degs |= {t for t in col[r].c if t < v}
                for t in sorted(degs):
                    row = [col[r].coeff(t) if j == s else 0 for j, col in contrib]
                    rows.append(row)
                    rhs.append(F.neg(base[r][s].coeff(t)))
        if rows:
            sol = la.solve(F, rows, rhs)
            if sol is None:
                raise ShapeMismatch("no constants put the filtration in the residual shape")
        else:
            sol = [0] * len(unknowns)
        consts_all.append(sol)
        # V' and B
        Vp = [[Series(F, cap) for _ in range(3)] for _ in range(3)]
        for i, j, deg in fixed:
            Vp[i][j] = Vp[i][j] + Series.monomial(F, 1, deg, cap)
        for (i, j, deg), c in zip(unknowns, sol):
            if c:
                Vp[i][j] = Vp[i][j] + Series.monomial(F, c, deg, cap)
        Vp = tuple(tuple(r) for r in Vp)
        prod = pm_truncate(pm_mul(P, Vp), cap)
        w_inv = dets[comp].div_u(v).inverse()
        Bc = pm_map(prod, lambda s: s.div_u(v) * w_inv)
        Vp_comps.append(Vp)
        B_comps.append(Bc)
    Vp_m = M.V.with_comps(Vp_comps)
    B_m = GradedMatrix(p, tuple(B_comps), M.types, M.types, BASECHANGE)
    return change_of_basis(M, Vp_m, B_m), consts_all


def diagonalize_frobenius(M: BreuilModuleData, shape: str, triple, max_steps: int = 8) -> DiagonalizationResult:
    """Iterate change_of_basis until A is a constant diagonal matrix."""
    if shape == NIVEAU2:
        x = niveau2_exponents(triple[0] - triple[2], triple[1] - triple[2], M.p)
        for C in M.V.comps:
            if C[2][0].val() < 2 * x["e"] - x["k2"]:
                raise AxiomViolation("entry y'_0 is not divisible by u^e")
    steps = 0
    checks = 0
    while not (_is_constant_diagonal(M.A) and _matches_template(M, shape, triple)):
        if steps >= max_steps:
            raise ShapeMismatch(f"Frobenius not diagonal after {max_steps} steps")
        M, _ = diagonalization_step(M, shape, triple)
        steps += 1
        checks += 1
    consts = _read_constants(M, shape, triple)
    diagonal = [[C[i][i].coeff(0) for i in range(3)] for C in M.A.comps]
    return DiagonalizationResult(M, steps, consts, diagonal, checks)


CASE_PERMUTATION = {CASE_A: (0, 1, 2), CASE_B: (1, 2, 0), CASE_C: (2, 0, 1)}


def predicted_diagonal(shape: str, alphas: Sequence[int]) -> tuple:
    """Diagonal after diagonalization, from alpha_i = const term of (A_0)_ii."""
    return tuple(alphas[k] for k in CASE_PERMUTATION[shape])


# ---------------------------------------------------------------- towards FL modules


def breuil_to_phi_module(M: BreuilModuleData) -> GradedMatrix:
    """Polynomial lift of tV . tA^{-1}; entry (i, j) in class p^{-1}a_i - a_j."""
    comps = []
    for Vc, Ac in zip(M.V.comps, M.A.comps):
        comps.append(pm_truncate(pm_mul(pm_transpose(Vc), pm_transpose(pm_invert_unit(Ac))), M.cap))
    return GradedMatrix(M.p, tuple(comps), M.types, M.types, PLAIN)


def phi_module_class_ok(Phi: GradedMatrix, types) -> bool:
    p, f, e = Phi.p, Phi.f, Phi.e
    for C in Phi.comps:
        for i in range(3):
            for j in range(3):
                want = (inv_frob_exp(types[i], p, f) - types[j]) % e
                if any(d % e != want for d in C[i][j].c):
                    return False
    return True


def descent_twists(types, p: int, f: int) -> tuple:
    """t_i = p^{-1} a_i mod e, making e_i . varpi^{t_i} Galois invariant."""
    return tuple(inv_frob_exp(a, p, f) for a in types)


def ungrade_descend(Phi: GradedMatrix, twists, N: Optional[int] = None, normalize: bool = False) -> PhiPSeriesMatrix:
    """Twist by Diag(varpi^{t_i}) and substitute pbar = varpi^e.

    With normalize=True a common power of pbar (possibly negative) is divided
    out, which is a global twist and leaves the FL invariant unchanged.
    """
    p, f, e = Phi.p, Phi.f, Phi.e
    F = Phi.field
    N = default_precision(p) if N is None else N
    n = Phi.n
    terms = []
    for ci, C in enumerate(Phi.comps):
        for i in range(n):
            for j in range(n):
                for d, c in C[i][j].c.items():
                    x = d - twists[i] + p * twists[j]
                    if x % e:
                        raise NotUngradeable(f"entry ({i},{j}) has exponent {x} after twisting")
                    terms.append((ci, x // e, i, j, c))
    kmin = min((t[1] for t in terms), default=0)
    shift = kmin if normalize else min(kmin, 0)
    if shift < 0 and not normalize:
        raise NotUngradeable(f"negative pbar exponent {kmin} after twisting")
    out = PhiPSeriesMatrix.zero(F, p, f, n, N)
    for ci, k, i, j, c in terms:
        k -= shift
        if k < N:
            out.comps[ci][k][i][j] = F.add(out.comps[ci][k][i][j], c)
    return out


@dataclass
class PipelineResult:
    fl: ProjPoint
    weights: tuple
    weight_shift: int
    per_component: list
    frobenius: list  # normal form matrices per component
    lattice_offsets: tuple = (0, 0, 0)


def phi_to_fl(Phi0: PhiPSeriesMatrix) -> PipelineResult:
    shift = 0
    weights = phi_smith_exponents(Phi0)
    if max(weights) > Phi0.p - 2:
        # a global twist by pbar^{-m} does not change the FL invariant
        shift = min(weights)
        comps = [[Phi0.comps[i][d + shift] if d + shift < Phi0.N else la.zeros(Phi0.n) for d in range(Phi0.N)]
                 for i in range(Phi0.f)]
        Phi0 = PhiPSeriesMatrix(Phi0.field, Phi0.p, Phi0.N, comps)
    nf = phi_matrix_normal_form(Phi0)
    per = [fl_of_matrix(Phi0.field, Mt) for Mt in nf.module.mats]
    return PipelineResult(combine_components(per), nf.weights, shift, per, [m for m in nf.module.mats])


# offsets delta_i: the basis vector e_i is rescaled by pbar^{delta_i}; the first
# offset giving a Fontaine-Laffaille lattice is used
LATTICE_OFFSETS = sorted(
    [(0, d1, d2) for d1 in (-1, 0, 1) for d2 in (-1, 0, 1)],
    key=lambda d: (sum(map(abs, d)), [abs(x) for x in d], d),
)


def breuil_to_fl_details(M: BreuilModuleData, N: Optional[int] = None) -> PipelineResult:
    Phi = breuil_to_phi_module(M)
    base = descent_twists(M.types, M.p, M.f)
    last = None
    for delta in LATTICE_OFFSETS:
        twists = tuple(t + M.e * d for t, d in zip(base, delta))
        try:
            Phi0 = ungrade_descend(Phi, twists, N, normalize=any(delta))
            res = phi_to_fl(Phi0)
        except (FLError, NotUngradeable) as exc:
            last = exc
            continue
        res.lattice_offsets = delta
        return res
    raise last


def breuil_to_fl(M: BreuilModuleData, N: Optional[int] = None) -> ProjPoint:
    return breuil_to_fl_details(M, N).fl


# ---------------------------------------------------------------- strongly divisible case data


@dataclass(frozen=True)
class SDCase:
    case: str
    ord_alpha: Fraction
    ord_beta: Optional[Fraction] = None
    alphas: tuple = ()
    free: tuple = ()


def sd_case_valuations(case: str, ord_alpha, ord_beta=None) -> tuple:
    a = Fraction(ord_alpha)
    if case == CASE_A:
        if not 0 < a < 2:
            raise ValueError("Case A needs 0 < ord(alpha) < 2")
        return (2 - a, Fraction(1), a)
    b = Fraction(ord_beta)
    if not (0 < b < 1 and 0 < a < b + 1):
        raise ValueError("Cases B, C need 0 < ord(beta) < 1 and 0 < ord(alpha) < ord(beta) + 1")
    if case == CASE_B:
        return (2 - a, b, 1 + a - b)
    if case == CASE_C:
        return (1 + b - a, 2 - b, a)
    raise ValueError(f"unknown case {case!r}")


def theorem251_fl(ord_lambda1, p: int, unit_residue: Optional[int] = None) -> ProjPoint:
    """red(p / lambda_1); unit_residue is the residue of lambda_1 / p at valuation 1."""
    v = Fraction(ord_lambda1)
    if not 0 < v < 2:
        raise ValueError("ord(lambda_1) must lie in (0, 2)")
    if v == 1:
        if unit_residue is None or unit_residue % p == 0:
            raise ScalarError("unit residue required at valuation 1")
        return specialize(Fraction(0), residue=pow(unit_residue, -1, p), p=p)
    return specialize(1 - v, p=p)


# ---------------------------------------------------------------- niveau two and duality


def niveau2_module(lam, mu, nu, y, z, triple, p: int, F: Optional[Fq] = None) -> BreuilModuleData:
    """Diagonal-Frobenius niveau 2 module; scalars are per-component tuples over F_{p^2}."""
    a2, a1, a0 = triple
    require_generic(a2, a1, a0, p)
    F = F or Fq(p, 2)
    a, b = a2 - a0, a1 - a0
    x = niveau2_exponents(a, b, p)
    e = x["e"]
    assert x["k1"] + x["r1"] * (p - 1) == x["k2"]
    assert (p - 1) * (x["r1"] + x["r2"]) == 2 * e
    V = [
        [[(1, e)], None, None],
        [None, [(1, x["r1"] * (p - 1))], [(z, 0)]],
        [[(y, 2 * e - x["k2"])], None, [(1, x["r2"] * (p - 1))]],
    ]
    for s in (lam, mu, nu):
        if any(c == 0 for c in s):
            raise NotAUnit("diagonal Frobenius entries must be units")
    # y, z become the superdiagonal of the Frobenius on the FL module; a zero
    # component would split one of the extensions
    for s in (y, z):
        if any(c == 0 for c in s):
            raise NotAUnit("y and z must be units for a maximally non-split module")
    return make_module(F, p, 2, (0, x["k1"], x["k2"]), V, diag_rows((lam, mu, nu)))


def dual_module(M: BreuilModuleData) -> BreuilModuleData:
    """(u^{2e} tV^{-1}, tA^{-1}) of type (-a_i)."""
    e, cap, r = M.e, M.cap, M.r
    Vc, Ac = [], []
    for V, A in zip(M.V.comps, M.A.comps):
        d = pm_det(V)
        v = d.val()
        shift = v - r * e
        if shift < 0:
            raise AxiomViolation("det V has valuation below re")
        w_inv = d.div_u(v).inverse()
        adjT = pm_transpose(pm_adjugate(V))
        Vc.append(pm_map(adjT, lambda s: (s.div_u(shift) * w_inv).with_prec(cap)))
        Ac.append(pm_truncate(pm_transpose(pm_invert_unit(A)), cap))
    types = tuple((-t) % e for t in M.types)
    out = BreuilModuleData(
        M.p,
        types,
        GradedMatrix(M.p, tuple(Vc), types, types, FILTRATION),
        GradedMatrix(M.p, tuple(Ac), types, types, FROBENIUS),
        r,
    )
    out.validate()
    return out


# ---------------------------------------------------------------- random inputs


def _rand_unit(F, rng):
    return rng.randrange(1, F.q)


def _rand_elt(F, rng):
    return rng.randrange(F.q)


def _series_spec(F, rng, start, step, cap, f, unit=False):
    """Random sum_k c_k u^{start + k step} below cap, per-component coefficients."""
    out = []
    deg = start
    first = True
    while deg < cap:
        c = tuple((_rand_unit(F, rng) if (unit and first) else _rand_elt(F, rng)) for _ in range(f))
        out.append((c, deg))
        deg += step
        first = False
    return out


def random_frobenius_rows(F, p, f, types, rng, sparse_pattern=None) -> list:
    """Random element of GL^box: entries graded a_j - a_i, units on the diagonal."""
    e = p ** f - 1
    cap = e * p
    rows = []
    for i in range(3):
        row = []
        for j in range(3):
            if sparse_pattern is not None and (i, j) not in sparse_pattern and i != j:
                row.append(None)
                continue
            start = (types[j] - types[i]) % e
            row.append(_series_spec(F, rng, start, e, cap, f, unit=(i == j)))
        rows.append(row)
    return rows


@dataclass
class CaseSample:
    module: BreuilModuleData
    diagonalized: DiagonalizationResult
    alphas: tuple  # constant terms of the diagonal of A
    rejected: int  # draws discarded because they left the case


def random_case_sample(shape: str, triple, p: int, rng: random.Random, F: Optional[Fq] = None,
                       max_tries: int = 200) -> CaseSample:
    """A Case A/B/C module with a random graded Frobenius, by rejection sampling.

    A random Frobenius can move the module out of the declared case: its residual
    constants after diagonalization then fail constants_admissible.  Such draws
    are discarded and counted.
    """
    a2, a1, a0 = triple
    require_generic(a2, a1, a0, p)
    F = F or Fq(p)
    _, unknowns = shape_template(shape, triple, p)
    types = shape_types(shape, triple, p)
    for tries in range(max_tries):
        consts = [_rand_elt(F, rng) for _ in unknowns]
        if not constants_admissible(shape, consts, F):
            continue
        A = random_frobenius_rows(F, p, 1, types, rng)
        M = make_module(F, p, 1, types, template_rows(shape, triple, p, consts), A)
        R = diagonalize_frobenius(M, shape, triple)
        if constants_admissible(shape, R.constants[0], F):
            alphas = tuple(M.A.comps[0][i][i].coeff(0) for i in range(3))
            return CaseSample(M, R, alphas, tries)
    raise ShapeMismatch(f"no Case {shape} module after {max_tries} draws")


def random_case_module(shape: str, triple, p: int, rng: random.Random, F: Optional[Fq] = None):
    """The module of random_case_sample."""
    return random_case_sample(shape, triple, p, rng, F).module


def diagonal_case_module(shape, triple, p, alphas, consts, F=None) -> BreuilModuleData:
    """Residual form: template filtration and the permuted constant diagonal."""
    F = F or Fq(p)
    types = shape_types(shape, triple, p)
    V = template_rows(shape, triple, p, consts)
    return make_module(F, p, 1, types, V, diag_rows(predicted_diagonal(shape, alphas)))


def expected_case_fl(shape, alphas, F) -> ProjPoint:
    if shape == CASE_A:
        return ProjPoint(F, F.inv(alphas[1]))
    if shape == CASE_B:
        return ProjPoint(F, 0)
    if shape == CASE_C:
        return ProjPoint.infinity(F)
    raise ValueError(shape)


def random_niveau2_start(triple, p, rng, F=None) -> BreuilModuleData:
    """(V_0, A_0) of the shape preceding the niveau 2 diagonalization."""
    a2, a1, a0 = triple
    require_generic(a2, a1, a0, p)
    F = F or Fq(p, 2)
    x = niveau2_exponents(a2 - a0, a1 - a0, p)
    e, k1, k2, r1, r2 = x["e"], x["k1"], x["k2"], x["r1"], x["r2"]
    cap = e * p
    f = 2
    ser = lambda start, unit=False: _series_spec(F, rng, start, e, cap, f, unit)
    V = [
        [[(1, e)], None, None],
        [ser(e - k1), [(1, r1 * (p - 1))], ser(0, True)],
        [ser(2 * e - k2, True), None, [(1, r2 * (p - 1))]],
    ]
    A = [
        [ser(0, True), None, None],
        [ser(e - k1), ser(0, True), ser(r1 * (p - 1))],
        [ser(e - k2), None, ser(0, True)],
    ]
    return make_module(F, p, 2, (0, k1, k2), V, A)
