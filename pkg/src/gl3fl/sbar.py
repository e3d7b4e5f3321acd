"""Truncated power series over F, the ring S-bar = (k (x) F)[u]/u^{ep}, graded matrices.

k (x) F is split into f copies of F through the idempotents, so an element of
S-bar is an f-tuple of truncated series over F and all matrix algebra is done
componentwise. Only phi mixes components: (phi x)_i(u) = x_{i+1}(u^p).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .scalars import Fq, NotAUnit, TensorScalar


class SingularModCap(ArithmeticError):
    pass


class ComponentMismatch(ArithmeticError):
    pass


class Series:
    """sum c_k u^k + O(u^prec) over a finite field; sparse storage."""

    __slots__ = ("F", "prec", "c")

    def __init__(self, F: Fq, prec: int, c: Optional[dict] = None):
        self.F = F
        self.prec = prec
        self.c = {k: v for k, v in (c or {}).items() if v and k < prec}

    @classmethod
    def zero(cls, F, prec):
        return cls(F, prec)

    @classmethod
    def const(cls, F, value, prec):
        return cls(F, prec, {0: value})

    @classmethod
    def monomial(cls, F, coeff, deg, prec):
        return cls(F, prec, {deg: coeff})

    @classmethod
    def from_list(cls, F, coeffs: Sequence[int], prec=None):
        prec = len(coeffs) if prec is None else prec
        return cls(F, prec, {k: v for k, v in enumerate(coeffs)})

    def coeff(self, k: int) -> int:
        return self.c.get(k, 0)

    def is_zero(self) -> bool:
        return not self.c

    def val(self) -> int:
        """u-adic valuation; prec for a zero series."""
        return min(self.c) if self.c else self.prec

    def degrees(self):
        return sorted(self.c)

    def truncate(self, n: int) -> "Series":
        return Series(self.F, min(n, self.prec), self.c)

    def with_prec(self, n: int) -> "Series":
        """Treat the stored polynomial as exact and truncate/extend to precision n."""
        return Series(self.F, n, self.c)

    def __add__(self, o: "Series") -> "Series":
        F = self.F
        prec = min(self.prec, o.prec)
        out = dict(self.c)
        for k, v in o.c.items():
            out[k] = F.add(out.get(k, 0), v)
        return Series(F, prec, out)

    def __neg__(self):
        F = self.F
        return Series(F, self.prec, {k: F.neg(v) for k, v in self.c.items()})

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o: "Series") -> "Series":
        F = self.F
        prec = min(self.prec + o.val(), o.prec + self.val())
        out = {}
        for i, a in self.c.items():
            for j, b in o.c.items():
                k = i + j
                if k < prec:
                    out[k] = F.add(out.get(k, 0), F.mul(a, b))
        return Series(F, prec, out)

    def scale(self, s: int) -> "Series":
        F = self.F
        if s == 0:
            return Series(F, self.prec)
        return Series(F, self.prec, {k: F.mul(v, s) for k, v in self.c.items()})

    def shift(self, k: int) -> "Series":
        """Multiply by u^k (k >= 0)."""
        return Series(self.F, self.prec + k, {d + k: v for d, v in self.c.items()})

    def div_u(self, k: int) -> "Series":
        """Exact division by u^k."""
        if any(d < k for d in self.c):
            raise ArithmeticError(f"series not divisible by u^{k}")
        return Series(self.F, self.prec - k, {d - k: v for d, v in self.c.items()})

    def subs_power(self, m: int) -> "Series":
        """u -> u^m."""
        return Series(self.F, self.prec * m, {d * m: v for d, v in self.c.items()})

    def inverse(self) -> "Series":
        F = self.F
        c0 = self.coeff(0)
        if c0 == 0:
            raise NotAUnit("constant term vanishes")
        inv0 = F.inv(c0)
        tail = [(d, v) for d, v in self.c.items() if d > 0]
        out = {0: inv0}
        for n in range(1, self.prec):
            acc = 0
            for d, v in tail:
                if d <= n:
                    w = out.get(n - d, 0)
                    if w:
                        acc = F.add(acc, F.mul(v, w))
            if acc:
                out[n] = F.neg(F.mul(acc, inv0))
        return Series(F, self.prec, out)

    def residues(self, e: int) -> set:
        return {d % e for d in self.c}

    def equals(self, o: "Series", prec: Optional[int] = None) -> bool:
        n = min(self.prec, o.prec) if prec is None else prec
        ks = set(self.c) | set(o.c)
        return all(self.c.get(k, 0) == o.c.get(k, 0) for k in ks if k < n)

    def __eq__(self, o):
        return isinstance(o, Series) and self.equals(o)

    def __repr__(self):
        if not self.c:
            return f"O(u^{self.prec})"
        terms = " + ".join(f"{v}*u^{k}" for k, v in sorted(self.c.items()))
        return f"{terms} + O(u^{self.prec})"


# ---------------------------------------------------------------- plain matrices of series

PolyMatrix = tuple  # tuple of rows, each a tuple of Series


def pm_zero(F, n, prec):
    return tuple(tuple(Series(F, prec) for _ in range(n)) for _ in range(n))


def pm_identity(F, n, prec):
    return tuple(tuple(Series.const(F, 1 if i == j else 0, prec) for j in range(n)) for i in range(n))


def pm_from_entries(F, rows, prec):
    """rows of {deg: coeff} dicts (or Series)."""
    return tuple(
        tuple(x if isinstance(x, Series) else Series(F, prec, x) for x in row) for row in rows
    )


def pm_add(A, B):
    return tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def pm_sub(A, B):
    return tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def pm_mul(A, B):
    n, m, r = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(r):
            acc = A[i][0] * B[0][j]
            for k in range(1, m):
                acc = acc + A[i][k] * B[k][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def pm_transpose(A):
    return tuple(zip(*A))


def pm_map(A, fn):
    return tuple(tuple(fn(x) for x in row) for row in A)


def pm_minor(A, i, j):
    return tuple(tuple(x for c, x in enumerate(row) if c != j) for r, row in enumerate(A) if r != i)


def pm_det(A) -> Series:
    n = len(A)
    if n == 1:
        return A[0][0]
    if n == 2:
        return A[0][0] * A[1][1] - A[0][1] * A[1][0]
    acc = None
    for j in range(n):
        term = A[0][j] * pm_det(pm_minor(A, 0, j))
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    return acc


def pm_adjugate(A):
    n = len(A)
    if n == 1:
        F = A[0][0].F
        return ((Series.const(F, 1, A[0][0].prec),),)
    cof = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            d = pm_det(pm_minor(A, i, j))
            cof[j][i] = -d if (i + j) % 2 else d
    return tuple(tuple(r) for r in cof)


def pm_invert_unit(A):
    det = pm_det(A)
    inv = det.inverse()
    return pm_map(pm_adjugate(A), lambda x: x * inv)


def pm_truncate(A, n):
    return pm_map(A, lambda x: x.truncate(n))


def pm_equals(A, B, prec=None):
    return all(a.equals(b, prec) for ra, rb in zip(A, B) for a, b in zip(ra, rb))


def smith_exponents_component(A, cap: int) -> list:
    """Elementary divisor exponents of a square matrix over F[[u]]/u^cap."""
    M = [[x.truncate(cap) for x in row] for row in A]
    n = len(M)
    rows, cols = list(range(n)), list(range(n))
    out = []
    while rows:
        best = None
        for i in rows:
            for j in cols:
                x = M[i][j]
                if x.c:
                    v = x.val()
                    if best is None or v < best[0]:
                        best = (v, i, j)
        if best is None:
            raise SingularModCap(f"determinant vanishes modulo u^{cap}")
        v, r, c = best
        piv = M[r][c]
        unit_inv = piv.div_u(v).with_prec(cap).inverse()
        for i in rows:
            if i != r and M[i][c].c:
                q = M[i][c].div_u(v).with_prec(cap) * unit_inv
                M[i] = [(M[i][k] - q * M[r][k]).truncate(cap) for k in range(n)]
        for j in cols:
            if j != c and M[r][j].c:
                q = M[r][j].div_u(v).with_prec(cap) * unit_inv
                for i in rows:
                    M[i][j] = (M[i][j] - M[i][c] * q).truncate(cap)
        rows.remove(r)
        cols.remove(c)
        out.append(v)
    return sorted(out)


# ---------------------------------------------------------------- S-bar and graded matrices

FILTRATION = "FILTRATION"
FROBENIUS = "FROBENIUS"
PLAIN = "PLAIN"
BASECHANGE = "BASECHANGE"


def inv_frob_exp(a: int, p: int, f: int) -> int:
    """p^{-1} a mod e with e = p^f - 1."""
    e = p ** f - 1
    return (p ** (f - 1) * a) % e


@dataclass(frozen=True)
class SbarPoly:
    """Element of S-bar: one truncated series per idempotent component."""

    p: int
    comps: tuple

    @property
    def f(self):
        return len(self.comps)

    @property
    def e(self):
        return self.p ** self.f - 1

    @classmethod
    def monomial(cls, F: Fq, p: int, f: int, coeff, deg: int) -> "SbarPoly":
        prec = (p ** f - 1) * p
        cs = coeff.comps if isinstance(coeff, TensorScalar) else (coeff,) * f
        return cls(p, tuple(Series.monomial(F, c, deg, prec) for c in cs))

    def coefficient(self, k: int) -> TensorScalar:
        return TensorScalar(self.comps[0].F, [s.coeff(k) for s in self.comps])

    def __add__(self, o):
        return SbarPoly(self.p, tuple(a + b for a, b in zip(self.comps, o.comps)))

    def __mul__(self, o):
        cap = self.e * self.p
        return SbarPoly(self.p, tuple((a * b).truncate(cap) for a, b in zip(self.comps, o.comps)))

    def isotypic_residues(self) -> set:
        out = set()
        for s in self.comps:
            out |= s.residues(self.e)
        return out

    def equals(self, o) -> bool:
        return all(a.equals(b) for a, b in zip(self.comps, o.comps))


def phi_apply(x: SbarPoly) -> SbarPoly:
    """Frobenius of S-bar: coefficients through phi (x) 1, u -> u^p."""
    cap = x.e * x.p
    c = x.comps
    shifted = c[1:] + c[:1]
    return SbarPoly(x.p, tuple(s.with_prec(cap).subs_power(x.p).truncate(cap) for s in shifted))


@dataclass(frozen=True)
class GradedMatrix:
    """n x n matrix over S-bar (or over F[[u]] truncated), stored per component."""

    p: int
    comps: tuple  # f PolyMatrices
    row_types: tuple = ()
    col_types: tuple = ()
    rule: str = PLAIN

    @property
    def f(self):
        return len(self.comps)

    @property
    def e(self):
        return self.p ** self.f - 1

    @property
    def n(self):
        return len(self.comps[0])

    @property
    def field(self) -> Fq:
        return self.comps[0][0][0].F

    @property
    def cap(self):
        return self.e * self.p

    def entry(self, i, j) -> SbarPoly:
        return SbarPoly(self.p, tuple(C[i][j] for C in self.comps))

    def with_comps(self, comps, rule=None, row_types=None, col_types=None):
        return GradedMatrix(
            self.p,
            tuple(comps),
            self.row_types if row_types is None else tuple(row_types),
            self.col_types if col_types is None else tuple(col_types),
            self.rule if rule is None else rule,
        )

    def expected_class(self, i, j) -> Optional[int]:
        if self.rule == PLAIN or not self.row_types:
            return None
        a, e = None, self.e
        if self.rule == FILTRATION:
            # entry (i, j) in degrees = p^{-1} a_j - a_i
            a = inv_frob_exp(self.col_types[j], self.p, self.f) - self.row_types[i]
        elif self.rule == FROBENIUS:
            a = self.col_types[j] - self.row_types[i]
        elif self.rule == BASECHANGE:
            # entries of B in a change of basis: p^{-1}(a_j - a_i)
            a = inv_frob_exp(self.col_types[j] - self.row_types[i], self.p, self.f)
        return a % e

    def __repr__(self):
        return f"GradedMatrix(p={self.p}, f={self.f}, rule={self.rule}, types={self.row_types})"


def graded_from_rows(F: Fq, p: int, f: int, rows, types=(), rule=PLAIN, prec=None) -> GradedMatrix:
    """Build a matrix from rows of entries; an entry is a {deg: coeff} dict whose
    coefficients are ints (same in every component) or TensorScalars/tuples."""
    e = p ** f - 1
    prec = e * p if prec is None else prec
    comps = []
    for i in range(f):
        cm = []
        for row in rows:
            r = []
            for x in row:
                d = {}
                for deg, c in (x or {}).items():
                    if isinstance(c, TensorScalar):
                        c = c.comps[i]
                    elif isinstance(c, tuple):
                        c = c[i]
                    if c:
                        d[deg] = c
                r.append(Series(F, prec, d))
            cm.append(tuple(r))
        comps.append(tuple(cm))
    return GradedMatrix(p, tuple(comps), tuple(types), tuple(types), rule)


def isotypic_check(M: GradedMatrix) -> bool:
    for C in M.comps:
        for i, row in enumerate(C):
            for j, x in enumerate(row):
                want = M.expected_class(i, j)
                if want is None:
                    continue
                if any(r != want for r in x.residues(M.e)):
                    return False
    return True


def mul(A: GradedMatrix, B: GradedMatrix, rule=None) -> GradedMatrix:
    cap = A.cap
    comps = [pm_truncate(pm_mul(a, b), cap) for a, b in zip(A.comps, B.comps)]
    if rule is None:
        rule = FILTRATION if (A.rule, B.rule) == (FROBENIUS, FILTRATION) else PLAIN
    return A.with_comps(comps, rule=rule)


def add(A: GradedMatrix, B: GradedMatrix) -> GradedMatrix:
    return A.with_comps([pm_add(a, b) for a, b in zip(A.comps, B.comps)])


def det(M: GradedMatrix) -> SbarPoly:
    return SbarPoly(M.p, tuple(pm_det(C).truncate(M.cap) for C in M.comps))


def adjugate(M: GradedMatrix) -> GradedMatrix:
    return M.with_comps([pm_truncate(pm_adjugate(C), M.cap) for C in M.comps], rule=PLAIN)


def invert_unit(M: GradedMatrix) -> GradedMatrix:
    comps = []
    for C in M.comps:
        d = pm_det(C).truncate(M.cap)
        if d.coeff(0) == 0:
            raise NotAUnit("determinant is not a unit in some component")
        comps.append(pm_truncate(pm_invert_unit(C), M.cap))
    return M.with_comps(comps, rule=PLAIN)


def transpose(M: GradedMatrix) -> GradedMatrix:
    return M.with_comps([pm_transpose(C) for C in M.comps], rule=PLAIN)


def phi_matrix(M: GradedMatrix) -> GradedMatrix:
    """Entrywise phi."""
    cap, p = M.cap, M.p
    c = M.comps
    shifted = c[1:] + c[:1]
    comps = [pm_map(C, lambda s: s.with_prec(cap).subs_power(p).truncate(cap)) for C in shifted]
    return M.with_comps(comps)


def identity(F: Fq, p: int, f: int, n: int, types=()) -> GradedMatrix:
    e = p ** f - 1
    C = pm_identity(F, n, e * p)
    return GradedMatrix(p, tuple(C for _ in range(f)), tuple(types), tuple(types), FROBENIUS)


def smith_exponents(M: GradedMatrix, cap: Optional[int] = None) -> list:
    cap = M.cap if cap is None else cap
    per = [smith_exponents_component(C, cap) for C in M.comps]
    if any(x != per[0] for x in per[1:]):
        raise ComponentMismatch(f"elementary divisors differ across components: {per}")
    return per[0]


def equal_mod(A: GradedMatrix, B: GradedMatrix, n: int) -> bool:
    return all(pm_equals(a, b, n) for a, b in zip(A.comps, B.comps))
