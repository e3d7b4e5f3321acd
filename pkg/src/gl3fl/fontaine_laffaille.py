"""Fontaine-Laffaille modules, the FL invariant, and the phi-module normal form.

A phi-matrix over (k (x) F)[[pbar]] is stored per idempotent component as a
dense list of constant matrices: comps[i][d] is the coefficient of pbar^d.
A change of basis e' = e.C acts by Phi' = C^{-1} Phi phi(C) with
phi(C)_i(pbar) = C_{i+1}(pbar^p).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from . import linalg as la
from .sbar import Series, smith_exponents_component, SingularModCap, ComponentMismatch
from .scalars import Fq, NotAUnit, ProjPoint


class FLError(ArithmeticError):
    pass


class NotMaximallyNonSplit(FLError):
    pass


class NotInvertible(FLError):
    pass


class PivotFailure(FLError):
    pass


class OutOfFLRange(FLError):
    pass


class PrecisionExhausted(FLError):
    pass


# ---------------------------------------------------------------- the invariant


def _check_upper(F: Fq, U):
    for i in range(3):
        for j in range(i):
            if U[i][j]:
                raise ValueError("matrix is not upper triangular")


def fl_invariant(F: Fq, U) -> ProjPoint:
    """(a01 a12 - a02 mu1) / (-a02), infinity when a02 = 0."""
    _check_upper(F, U)
    if any(U[i][i] == 0 for i in range(3)):
        raise NotInvertible("a diagonal entry vanishes")
    a01, a12, a02, mu1 = U[0][1], U[1][2], U[0][2], U[1][1]
    if F.mul(a01, a12) == 0:
        raise NotMaximallyNonSplit("a superdiagonal entry vanishes")
    if a02 == 0:
        return ProjPoint.infinity(F)
    num = F.sub(F.mul(a01, a12), F.mul(a02, mu1))
    return ProjPoint(F, F.div(num, F.neg(a02)))


def upper_triangularize(F: Fq, M):
    """Lower unipotent A with A.M = U upper triangular (LU without pivoting)."""
    n = len(M)
    U = la.copy(M)
    L = la.eye(n)
    for c in range(n - 1):
        if U[c][c] == 0:
            raise PivotFailure(f"pivot {c} vanishes")
        inv = F.inv(U[c][c])
        for r in range(c + 1, n):
            if U[r][c]:
                q = F.mul(U[r][c], inv)
                U[r] = [F.sub(x, F.mul(q, y)) for x, y in zip(U[r], U[c])]
                L[r][c] = q
    if U[n - 1][n - 1] == 0:
        raise NotInvertible("matrix is singular")
    return la.inverse(F, L), U


def fl_dual(F: Fq, U):
    """J . tU^{-1} . J, again upper triangular."""
    X = la.transpose(la.inverse(F, U))
    n = len(X)
    return [[X[n - 1 - i][n - 1 - j] for j in range(n)] for i in range(n)]


def fl_of_matrix(F: Fq, M) -> ProjPoint:
    """FL class of a Frobenius matrix in a filtration-compatible basis."""
    _, U = upper_triangularize(F, M)
    return fl_invariant(F, U)


def combine_components(points: Sequence[ProjPoint]) -> ProjPoint:
    """One class from per-component readings; components must agree."""
    first = points[0]
    for q in points[1:]:
        if q.value != first.value:
            raise ComponentMismatch(f"FL readings differ across components: {[str(x) for x in points]}")
    return first


# ---------------------------------------------------------------- modules and phi-matrices


@dataclass(frozen=True)
class FLModule:
    """Weights m_0 <= ... and phi_bullet matrices, one per idempotent component."""

    field: Fq
    p: int
    weights: tuple
    mats: tuple

    def __post_init__(self):
        if list(self.weights) != sorted(self.weights):
            raise ValueError("weights must be nondecreasing")
        if any(m < 0 or m > self.p - 2 for m in self.weights):
            raise OutOfFLRange(f"weights {self.weights} outside [0, p-2]")
        for M in self.mats:
            if la.det(self.field, M) == 0:
                raise NotInvertible("Frobenius matrix is singular")

    @property
    def n(self):
        return len(self.weights)

    @property
    def f(self):
        return len(self.mats)

    def fl(self) -> ProjPoint:
        return combine_components([fl_of_matrix(self.field, M) for M in self.mats])


def default_precision(p: int) -> int:
    return 3 * (p - 1)


@dataclass
class PhiPSeriesMatrix:
    field: Fq
    p: int
    N: int
    comps: list  # f lists of N constant n x n matrices

    @property
    def n(self):
        return len(self.comps[0][0])

    @property
    def f(self):
        return len(self.comps)

    @classmethod
    def zero(cls, F, p, f, n, N):
        return cls(F, p, N, [[la.zeros(n) for _ in range(N)] for _ in range(f)])

    @classmethod
    def from_constant(cls, F, p, N, mats):
        n = len(mats[0])
        return cls(F, p, N, [[la.copy(M)] + [la.zeros(n) for _ in range(N - 1)] for M in mats])

    def coeff(self, i, d):
        return self.comps[i][d]

    def entry_series(self, i, r, c) -> Series:
        return Series(self.field, self.N, {d: M[r][c] for d, M in enumerate(self.comps[i])})

    def equals(self, o, prec=None):
        n = min(self.N, o.N) if prec is None else prec
        return all(self.comps[i][d] == o.comps[i][d] for i in range(self.f) for d in range(n))


def smul(F, A: list, B: list, N: int) -> list:
    """Product of dense matrix series truncated at N."""
    n = len(A[0])
    out = [la.zeros(n) for _ in range(N)]
    for i, Ai in enumerate(A):
        if la.is_zero(Ai):
            continue
        for j, Bj in enumerate(B):
            if i + j >= N:
                break
            if la.is_zero(Bj):
                continue
            out[i + j] = la.add(F, out[i + j], la.mul(F, Ai, Bj))
    return out


def sinverse(F, A: list, N: int) -> list:
    n = len(A[0])
    inv0 = la.inverse(F, A[0])
    out = [inv0] + [la.zeros(n) for _ in range(N - 1)]
    for k in range(1, N):
        acc = la.zeros(n)
        for j in range(1, k + 1):
            if j < len(A) and not la.is_zero(A[j]):
                acc = la.add(F, acc, la.mul(F, A[j], out[k - j]))
        out[k] = la.scale(F, la.mul(F, inv0, acc), F.neg(1))
    return out


def sphi(A: list, p: int, N: int) -> list:
    n = len(A[0])
    out = [la.zeros(n) for _ in range(N)]
    for d, M in enumerate(A):
        if d * p >= N:
            break
        out[d * p] = la.copy(M)
    return out


def phi_conjugate(Phi: PhiPSeriesMatrix, C: list) -> PhiPSeriesMatrix:
    """C^{-1} Phi phi(C); C is a list (per component) of dense series."""
    F, p, N, f = Phi.field, Phi.p, Phi.N, Phi.f
    out = []
    for i in range(f):
        phiC = sphi(C[(i + 1) % f], p, N)
        out.append(smul(F, sinverse(F, C[i], N), smul(F, Phi.comps[i], phiC, N), N))
    return PhiPSeriesMatrix(F, p, N, out)


def fl_to_phi_matrix(M: FLModule, N: Optional[int] = None) -> PhiPSeriesMatrix:
    """Diag(pbar^{m_i}) . F."""
    N = default_precision(M.p) if N is None else N
    F, n = M.field, M.n
    comps = []
    for Mat in M.mats:
        series = [la.zeros(n) for _ in range(N)]
        for r, m in enumerate(M.weights):
            if m < N:
                series[m][r] = list(Mat[r])
        comps.append(series)
    return PhiPSeriesMatrix(F, M.p, N, comps)


def phi_smith_exponents(Phi: PhiPSeriesMatrix) -> list:
    per = []
    for i in range(Phi.f):
        rows = tuple(tuple(Phi.entry_series(i, r, c) for c in range(Phi.n)) for r in range(Phi.n))
        per.append(smith_exponents_component(rows, Phi.N))
    if any(x != per[0] for x in per[1:]):
        raise ComponentMismatch(f"elementary divisors differ across components: {per}")
    return per[0]


@dataclass
class NormalForm:
    weights: tuple
    module: FLModule
    C: list  # per component dense series, C[i][d]
    checked_to: int


def _level_vectors(F: Fq, Phi_i: list, weights: list, n: int):
    """Targets (columns of C(0)) and solutions y_j for one component."""
    levels = sorted(set(weights))
    m_max = max(weights)
    targets, ys = [], []
    for w in levels:
        kill = [row for d in range(w) for row in Phi_i[d]]
        fil = la.nullspace(F, kill, n) if kill else la.eye(n)
        if not fil:
            raise PrecisionExhausted(f"filtration step {w} is zero")
        B = la.columns_to_matrix(fil)
        image = la.mul(F, Phi_i[w], B)  # columns span S_w
        R, piv = la.rref(F, la.transpose(image))
        basis = [R[k] for k in range(len(piv))]
        mult = weights.count(w)
        if len(basis) != mult:
            raise PrecisionExhausted(
                f"graded piece at weight {w} has dimension {len(basis)}, expected {mult}"
            )
        extra = [la.mul(F, Phi_i[d], B) for d in range(w + 1, m_max + 1)]
        for t in basis:
            A_full = la.mul(F, Phi_i[w], B) + [r for E in extra for r in E]
            b_full = list(t) + [0] * (n * len(extra))
            c = la.solve(F, A_full, b_full)
            if c is None:
                c = la.solve(F, la.mul(F, Phi_i[w], B), list(t))
            if c is None:
                raise PrecisionExhausted("graded target not reached")
            targets.append(list(t))
            ys.append(la.matvec(F, B, c))
    return la.columns_to_matrix(targets), la.columns_to_matrix(ys)


def phi_matrix_normal_form(Phi: PhiPSeriesMatrix) -> NormalForm:
    """Find weights m, F and C with C^{-1} Phi phi(C) = Diag(pbar^m) F."""
    F, p, N, f, n = Phi.field, Phi.p, Phi.N, Phi.f, Phi.n
    try:
        weights = phi_smith_exponents(Phi)
    except SingularModCap as exc:
        raise PrecisionExhausted(str(exc)) from exc
    if max(weights) > p - 2:
        raise OutOfFLRange(f"elementary divisor exponents {weights} exceed p-2")
    m_max = max(weights)
    U, Y = [], []
    for i in range(f):
        u, y = _level_vectors(F, Phi.comps[i], weights, n)
        U.append(u)
        Y.append(y)
    Fm = []
    for i in range(f):
        try:
            Fm.append(la.mul(F, la.inverse(F, Y[i]), U[(i + 1) % f]))
        except NotAUnit as exc:
            raise PrecisionExhausted("filtration lifts are dependent") from exc
    Finv = [la.inverse(F, M) for M in Fm]
    top = N - m_max
    C = [[U[i]] + [la.zeros(n) for _ in range(top - 1)] for i in range(f)]

    def lhs_coeff(i, t):
        """Coefficient of pbar^t in Phi_i phi(C)_i, using C up to what is filled."""
        nxt = C[(i + 1) % f]
        acc = la.zeros(n)
        k = 0
        while k * p <= t and k < len(nxt):
            d = t - k * p
            if d < N and not la.is_zero(nxt[k]):
                acc = la.add(F, acc, la.mul(F, Phi.comps[i][d], nxt[k]))
            k += 1
        return acc

    for e in range(1, top):
        for i in range(f):
            col = la.zeros(n)
            for j, m in enumerate(weights):
                P = la.mul(F, lhs_coeff(i, e + m), Finv[i])
                for r in range(n):
                    col[r][j] = P[r][j]
            C[i][e] = col
    # verification: Phi phi(C) == C D F below pbar^top
    for i in range(f):
        DF = [la.zeros(n) for _ in range(top)]
        for r, m in enumerate(weights):
            if m < top:
                DF[m][r] = list(Fm[i][r])
        rhs = smul(F, C[i], DF, top)
        for t in range(top):
            if lhs_coeff(i, t) != rhs[t]:
                raise PrecisionExhausted(f"successive approximation failed at pbar^{t}")
    module = FLModule(F, p, tuple(weights), tuple(tuple(map(tuple, M)) for M in Fm))
    return NormalForm(tuple(weights), module, C, top)
