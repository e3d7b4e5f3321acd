"""Scalar layer: finite fields, tensor scalars k (x) F, truncated p-adics.

Field elements are plain ints. For a prime field the int is the residue; for
F_{p^d} it is the base-p encoding of the coordinate vector relative to the
defining polynomial. Wrappers (FqElem, TensorScalar, PadicScalar) exist for the
public API; hot loops work on the ints directly.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence, Union

RamifiedVal = Fraction


class ScalarError(ValueError):
    pass


class NotAUnit(ScalarError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


def _poly_mulmod(a, b, mod, p):
    # a, b: coefficient lists (low degree first) of length d; mod monic of degree d
    d = len(mod) - 1
    prod = [0] * (2 * d - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(len(prod) - 1, d - 1, -1):
        c = prod[k]
        if c:
            for t in range(d + 1):
                prod[k - d + t] = (prod[k - d + t] - c * mod[t]) % p
    return prod[:d]


def _is_irreducible(mod, p):
    # brute force: no root-free factorisation needed for d <= 3; general d uses
    # the Rabin-free check x^{p^d} = x and no smaller-degree factor via gcd-less
    # enumeration of monic polynomials of degree <= d/2
    d = len(mod) - 1
    if d == 1:
        return True
    for k in range(1, d // 2 + 1):
        for coeffs in itertools.product(range(p), repeat=k):
            g = list(coeffs) + [1]
            if _poly_divides(g, mod, p):
                return False
    return True


def _poly_divides(g, f, p):
    f = list(f)
    dg = len(g) - 1
    inv_lead = pow(g[-1], -1, p)
    for k in range(len(f) - 1, dg - 1, -1):
        c = f[k] * inv_lead % p
        if c:
            for t in range(dg + 1):
                f[k - dg + t] = (f[k - dg + t] - c * g[t]) % p
    return all(x == 0 for x in f[:dg])


@lru_cache(maxsize=None)
def defining_polynomial(p: int, d: int) -> tuple:
    """Lexicographically smallest monic irreducible of degree d over F_p.

    Returned low-degree-first, leading 1 included. The order compares the
    non-leading coefficients from c_{d-1} down to c_0.
    """
    if d == 1:
        return (0, 1)
    for rev in itertools.product(range(p), repeat=d):
        mod = list(reversed(rev)) + [1]
        if mod[0] == 0:
            continue
        if _is_irreducible(mod, p):
            return tuple(mod)
    raise ScalarError(f"no irreducible polynomial of degree {d} over F_{p}")


class Fq:
    """The field F_{p^d}. Elements are ints in [0, p^d)."""

    _cache: dict = {}

    def __new__(cls, p: int, d: int = 1):
        key = (p, d)
        if key in cls._cache:
            return cls._cache[key]
        obj = super().__new__(cls)
        obj._setup(p, d)
        cls._cache[key] = obj
        return obj

    def _setup(self, p, d):
        if not is_prime(p):
            raise ScalarError(f"{p} is not prime")
        if d < 1:
            raise ScalarError("extension degree must be >= 1")
        self.p = p
        self.d = d
        self.q = p ** d
        self.modulus = defining_polynomial(p, d)
        if d == 1:
            self.gen = _primitive_root(p)
            self._exp = [pow(self.gen, k, p) for k in range(p - 1)]
        else:
            self.gen, self._exp = self._find_generator()
        self._log = [None] * self.q
        for k, x in enumerate(self._exp):
            self._log[x] = k
        if d > 1:
            q = self.q
            self._add = [[self._add_coords(a, b) for b in range(q)] for a in range(q)]
            self._neg = [self._scale_coords(a, p - 1) for a in range(q)]

    def _coords(self, a):
        out = []
        for _ in range(self.d):
            out.append(a % self.p)
            a //= self.p
        return out

    def _from_coords(self, cs):
        v = 0
        for c in reversed(cs):
            v = v * self.p + c % self.p
        return v

    def _add_coords(self, a, b):
        return self._from_coords([x + y for x, y in zip(self._coords(a), self._coords(b))])

    def _scale_coords(self, a, k):
        return self._from_coords([x * k for x in self._coords(a)])

    def _find_generator(self):
        p, d, q = self.p, self.d, self.q
        for g in range(p, q):
            powers = [1]
            x = 1
            gc = self._coords(g)
            for _ in range(q - 2):
                x = self._from_coords(_poly_mulmod(self._coords(x), gc, self.modulus, p))
                powers.append(x)
            if len(set(powers)) == q - 1 and 0 not in powers:
                return g, powers
        raise ScalarError("no generator found")

    # arithmetic on ints
    def add(self, a: int, b: int) -> int:
        if self.d == 1:
            return (a + b) % self.p
        return self._add[a][b]

    def neg(self, a: int) -> int:
        if self.d == 1:
            return (-a) % self.p
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.d == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise NotAUnit("0 is not invertible")
        if self.d == 1:
            return pow(a, -1, self.p)
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if a == 0:
            if n == 0:
                return 1
            if n < 0:
                raise NotAUnit("0 is not invertible")
            return 0
        if self.d == 1:
            return pow(a, n % (self.p - 1), self.p)
        return self._exp[(self._log[a] * n) % (self.q - 1)]

    def log(self, a: int) -> int:
        if a == 0:
            raise NotAUnit("log of 0")
        return self._log[a]

    def frob(self, a: int, k: int = 1) -> int:
        return self.pow(a, self.p ** k)

    def from_int(self, n: int) -> int:
        """Image of an integer under Z -> F_p -> F_{p^d}."""
        return n % self.p

    def elements(self) -> range:
        return range(self.q)

    def units(self) -> range:
        return range(1, self.q)

    def subfield(self, f: int) -> list:
        """Elements of the unique subfield of order p^f."""
        if self.d % f:
            raise ScalarError(f"F_{self.p}^{f} is not a subfield of F_{self.p}^{self.d}")
        return [a for a in range(self.q) if self.frob(a, f) == a]

    def sum(self, xs: Iterable[int]) -> int:
        acc = 0
        for x in xs:
            acc = self.add(acc, x)
        return acc

    def __repr__(self):
        return f"Fq({self.p}, {self.d})"

    def __reduce__(self):
        return (Fq, (self.p, self.d))


def _primitive_root(p: int) -> int:
    if p == 2:
        return 1
    factors = set()
    n, k = p - 1, 2
    while k * k <= n:
        while n % k == 0:
            factors.add(k)
            n //= k
        k += 1
    if n > 1:
        factors.add(n)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    raise ScalarError("no primitive root")


@dataclass(frozen=True)
class FqElem:
    field: Fq
    value: int

    @classmethod
    def of(cls, p: int, d: int, value: int) -> "FqElem":
        return cls(Fq(p, d), value)

    @property
    def p(self):
        return self.field.p

    @property
    def d(self):
        return self.field.d

    @property
    def coords(self):
        return tuple(self.field._coords(self.value))

    def _wrap(self, v):
        return FqElem(self.field, v)

    def _val(self, other):
        if isinstance(other, FqElem):
            return other.value
        return self.field.from_int(int(other))

    def __add__(self, o):
        return self._wrap(self.field.add(self.value, self._val(o)))

    __radd__ = __add__

    def __sub__(self, o):
        return self._wrap(self.field.sub(self.value, self._val(o)))

    def __rsub__(self, o):
        return self._wrap(self.field.sub(self._val(o), self.value))

    def __mul__(self, o):
        return self._wrap(self.field.mul(self.value, self._val(o)))

    __rmul__ = __mul__

    def __truediv__(self, o):
        return self._wrap(self.field.div(self.value, self._val(o)))

    def __neg__(self):
        return self._wrap(self.field.neg(self.value))

    def __pow__(self, n: int):
        return self._wrap(self.field.pow(self.value, n))

    def inverse(self):
        return self._wrap(self.field.inv(self.value))

    def is_zero(self):
        return self.value == 0

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        if self.field.d == 1:
            return f"{self.value} mod {self.field.p}"
        return f"F{self.field.q}<{self.coords}>"


class TensorScalar:
    """Element of k (x)_{F_p} F with k = F_{p^f}, stored via the idempotents.

    comps[i] is the component on which lambda (x) 1 acts as lambda^{p^i}.
    The Frobenius phi (x) 1 is the cyclic shift (phi x)_i = x_{i+1}.
    """

    __slots__ = ("field", "comps")

    def __init__(self, field: Fq, comps: Sequence[int]):
        self.field = field
        self.comps = tuple(comps)

    @property
    def f(self):
        return len(self.comps)

    @classmethod
    def constant(cls, field: Fq, f: int, c: int) -> "TensorScalar":
        """1 (x) c."""
        return cls(field, (c,) * f)

    @classmethod
    def embed(cls, field: Fq, f: int, lam: int) -> "TensorScalar":
        """lambda (x) 1 for lambda in the subfield k of order p^f."""
        if field.frob(lam, f) != lam:
            raise ScalarError("element is not in the residue field k")
        return cls(field, tuple(field.frob(lam, i) for i in range(f)))

    def phi(self) -> "TensorScalar":
        c = self.comps
        return TensorScalar(self.field, c[1:] + c[:1])

    def _other(self, o):
        if isinstance(o, TensorScalar):
            return o.comps
        v = o.value if isinstance(o, FqElem) else self.field.from_int(int(o))
        return (v,) * self.f

    def __add__(self, o):
        F = self.field
        return TensorScalar(F, [F.add(a, b) for a, b in zip(self.comps, self._other(o))])

    __radd__ = __add__

    def __sub__(self, o):
        F = self.field
        return TensorScalar(F, [F.sub(a, b) for a, b in zip(self.comps, self._other(o))])

    def __mul__(self, o):
        F = self.field
        return TensorScalar(F, [F.mul(a, b) for a, b in zip(self.comps, self._other(o))])

    __rmul__ = __mul__

    def __neg__(self):
        F = self.field
        return TensorScalar(F, [F.neg(a) for a in self.comps])

    def is_unit(self):
        return all(c != 0 for c in self.comps)

    def inverse(self):
        if not self.is_unit():
            raise NotAUnit("tensor scalar has a vanishing component")
        F = self.field
        return TensorScalar(F, [F.inv(a) for a in self.comps])

    def __eq__(self, o):
        return isinstance(o, TensorScalar) and self.field is o.field and self.comps == o.comps

    def __hash__(self):
        return hash((self.field.q, self.comps))

    def __repr__(self):
        return f"TensorScalar{self.comps}"


# ---------------------------------------------------------------- p-adics


def vp(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp_fraction(x: Union[int, Fraction], p: int) -> Optional[int]:
    x = Fraction(x)
    if x == 0:
        return None
    return vp(x.numerator, p) - vp(x.denominator, p)


@dataclass(frozen=True)
class PadicScalar:
    """unit * p^val + O(p^(val + N)).

    val is None for a zero known to absolute precision N (then unit == 0).
    """

    p: int
    val: Optional[int]
    unit: int
    N: int

    @classmethod
    def from_int(cls, n: int, p: int, N: int) -> "PadicScalar":
        """n taken modulo p^N (absolute precision N)."""
        n %= p ** N
        if n == 0:
            return cls(p, None, 0, N)
        v = vp(n, p)
        return cls(p, v, (n // p ** v) % p ** (N - v), N - v)

    @classmethod
    def from_fraction(cls, x, p: int, N: int) -> "PadicScalar":
        """Exact rational x with relative precision N."""
        x = Fraction(x)
        if x == 0:
            return cls(p, None, 0, N)
        v = vp_fraction(x, p)
        y = x / Fraction(p) ** v
        m = p ** N
        u = y.numerator * pow(y.denominator, -1, m) % m
        return cls(p, v, u, N)

    @classmethod
    def from_abs(cls, n: int, shift: int, p: int, N: int) -> "PadicScalar":
        """p^shift * n with n known mod p^N."""
        z = cls.from_int(n, p, N)
        if z.val is None:
            return cls(p, None, 0, N + shift)
        return cls(p, z.val + shift, z.unit, z.N)

    @property
    def is_zero(self):
        return self.val is None

    @property
    def abs_prec(self) -> int:
        return self.N if self.val is None else self.val + self.N

    def _check(self, o):
        if not isinstance(o, PadicScalar):
            o = PadicScalar.from_fraction(o, self.p, max(self.N, 1) + 40)
        if o.p != self.p:
            raise ScalarError("mixed primes")
        return o

    def __mul__(self, o):
        o = self._check(o)
        if self.is_zero and o.is_zero:
            return PadicScalar(self.p, None, 0, self.abs_prec + o.abs_prec)
        if self.is_zero or o.is_zero:
            z, x = (self, o) if self.is_zero else (o, self)
            return PadicScalar(self.p, None, 0, z.abs_prec + x.val)
        N = min(self.N, o.N)
        m = self.p ** N
        return PadicScalar(self.p, self.val + o.val, self.unit * o.unit % m, N)

    __rmul__ = __mul__

    def __neg__(self):
        if self.is_zero:
            return self
        return PadicScalar(self.p, self.val, (-self.unit) % self.p ** self.N, self.N)

    def __add__(self, o):
        o = self._check(o)
        cap = min(self.abs_prec, o.abs_prec)
        lo = min(v for v in (self.val, o.val, cap) if v is not None)
        shift = lo
        total = 0
        for x in (self, o):
            if not x.is_zero:
                total += x.unit * self.p ** (x.val - shift)
        return PadicScalar.from_abs(total, shift, self.p, cap - shift)

    __radd__ = __add__

    def __sub__(self, o):
        return self + (-self._check(o))

    def __rsub__(self, o):
        return self._check(o) + (-self)

    def inverse(self) -> "PadicScalar":
        if self.is_zero:
            raise NotAUnit("inverse of zero")
        m = self.p ** self.N
        return PadicScalar(self.p, -self.val, pow(self.unit, -1, m), self.N)

    def __truediv__(self, o):
        return self * self._check(o).inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        if self.is_zero:
            return PadicScalar(self.p, None, 0, self.abs_prec * max(n, 1)) if n else PadicScalar(self.p, 0, 1, self.N)
        m = self.p ** self.N
        return PadicScalar(self.p, self.val * n, pow(self.unit, n, m), self.N)

    def residue(self) -> int:
        """Image in F_p of an integral element."""
        if self.is_zero:
            return 0
        if self.val < 0:
            raise ScalarError("non-integral element has no residue")
        return self.unit % self.p if self.val == 0 else 0

    def to_int(self, N: Optional[int] = None) -> int:
        """Integer representative mod p^N of an integral element."""
        N = self.abs_prec if N is None else N
        if self.is_zero:
            return 0
        if self.val < 0:
            raise ScalarError("non-integral element")
        return self.unit * self.p ** self.val % self.p ** N

    def to_fraction(self) -> Fraction:
        if self.is_zero:
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.p) ** self.val

    def equals(self, o, prec: Optional[int] = None) -> bool:
        """Equality modulo p^prec (default: the joint absolute precision)."""
        d = self - self._check(o)
        cap = d.abs_prec if prec is None else min(prec, d.abs_prec)
        return d.is_zero or d.val >= cap

    def __repr__(self):
        if self.is_zero:
            return f"O({self.p}^{self.N})"
        return f"{self.unit}*{self.p}^{self.val} + O({self.p}^{self.abs_prec})"


def teichmuller_int(x: int, p: int, N: int) -> int:
    """Integer representative mod p^N of the Teichmuller lift of x mod p."""
    m = p ** N
    t = x % p
    if t == 0:
        return 0
    for _ in range(N):
        t = pow(t, p, m)
    return t


def teichmuller(x: int, p: int, N: int) -> PadicScalar:
    return PadicScalar.from_int(teichmuller_int(x, p, N), p, N)


def jacobi_sum_int(i: int, j: int, p: int, N: int) -> int:
    m = p ** N
    s = 0
    for lam in range(2, p):
        s += pow(teichmuller_int(lam, p, N), i, m) * pow(teichmuller_int(1 - lam, p, N), j, m)
    return s % m


def jacobi_sum(i: int, j: int, p: int, N: int) -> PadicScalar:
    """Sum over lambda in F_p of [lambda]^i [1 - lambda]^j, [.] the Teichmuller lift."""
    if i <= 0 or j <= 0:
        raise ScalarError("exponents must be positive")
    return PadicScalar.from_int(jacobi_sum_int(i, j, p, N), p, N)


def _fact_mod(n: int, p: int) -> int:
    r = 1
    for k in range(2, n + 1):
        r = r * k % p
    return r


def kappa_congruence_targets(a2: int, a1: int, a0: int, p: int) -> tuple:
    """Predicted unit residues (kappa_1 mod p, kappa_2/p mod p)."""
    from .combinatorics import is_generic

    if not is_generic(a2, a1, a0, p):
        raise ScalarError(f"triple {(a2, a1, a0)} is not generic for p={p}")
    a, b = a2 - a0, a1 - a0
    f = lambda n: _fact_mod(n, p)
    k1 = f(p - 1 - b) * f(p - (a - b)) * pow(f(p - a), -1, p) % p
    k2 = (-f(a - b) * f(p - a) * pow(f(p - b), -1, p)) % p
    return k1, k2


@dataclass(frozen=True)
class ProjPoint:
    """Point of P^1(F); value None stands for infinity."""

    field: Fq
    value: Optional[int]

    @classmethod
    def infinity(cls, field: Fq) -> "ProjPoint":
        return cls(field, None)

    @property
    def is_infinity(self):
        return self.value is None

    def __str__(self):
        return "inf" if self.value is None else str(self.value)

    def to_json(self):
        return "inf" if self.value is None else self.value


def proj_invert(x: ProjPoint) -> ProjPoint:
    if x.value is None:
        return ProjPoint(x.field, 0)
    if x.value == 0:
        return ProjPoint(x.field, None)
    return ProjPoint(x.field, x.field.inv(x.value))


def specialize(x, residue: Optional[int] = None, p: Optional[int] = None) -> ProjPoint:
    """red: P^1(O_E) -> P^1(F) on the point [x : 1].

    x is a PadicScalar, or a RamifiedVal (Fraction) valuation; in the latter case
    a unit residue must be supplied when the valuation is 0.
    """
    if isinstance(x, PadicScalar):
        F = Fq(x.p, 1)
        if x.is_zero or x.val > 0:
            return ProjPoint(F, 0)
        if x.val < 0:
            return ProjPoint(F, None)
        return ProjPoint(F, x.unit % x.p)
    v = Fraction(x)
    if p is None:
        raise ScalarError("prime required for a symbolic valuation")
    F = Fq(p, 1)
    if v > 0:
        return ProjPoint(F, 0)
    if v < 0:
        return ProjPoint(F, None)
    if residue is None or residue % p == 0:
        raise ScalarError("unit residue required at valuation 0")
    return ProjPoint(F, residue % p)
