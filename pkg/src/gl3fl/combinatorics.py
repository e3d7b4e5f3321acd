"""Inertial type elimination and Serre weight bounds (pure residue arithmetic)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


class NonGeneric(ValueError):
    pass


def is_generic(a2: int, a1: int, a0: int, p: int) -> bool:
    return a1 - a0 > 2 and a2 - a1 > 2 and p - 3 > a2 - a0


def require_generic(a2, a1, a0, p):
    if not is_generic(a2, a1, a0, p):
        raise NonGeneric(f"triple {(a2, a1, a0)} is not generic for p={p}")


@dataclass(frozen=True)
class InertialTypeN1:
    """Three tame characters omega^i + omega^j + omega^k, residues mod p-1 (sorted)."""

    p: int
    exps: tuple

    @classmethod
    def make(cls, p, i, j, k):
        return cls(p, tuple(sorted(x % (p - 1) for x in (i, j, k))))


@dataclass(frozen=True)
class InertialTypeN2:
    """omega^x + omega_2^y + omega_2^{py}; y canonicalised to min(y, py mod p^2-1)."""

    p: int
    x: int
    y: int

    @classmethod
    def make(cls, p, x, y):
        e = p * p - 1
        y %= e
        return cls(p, x % (p - 1), min(y, p * y % e))

    @property
    def e(self):
        return self.p * self.p - 1

    def is_niveau2(self):
        return self.y % (self.p + 1) != 0


@dataclass(frozen=True)
class SerreWeight:
    x: int
    y: int
    z: int

    def restricted(self, p: int) -> bool:
        return 0 <= self.x - self.y <= p - 1 and 0 <= self.y - self.z <= p - 1

    def __iter__(self):
        return iter((self.x, self.y, self.z))

    def __str__(self):
        return f"F({self.x},{self.y},{self.z})"


def niveau1_allowed(a2: int, a1: int, a0: int, p: int) -> set:
    require_generic(a2, a1, a0, p)
    return {InertialTypeN1.make(p, a2, a1, a0), InertialTypeN1.make(p, a2 - 1, a1, a0 + 1)}


DELTA_EPS = ((0, 0), (1, 0), (0, 1), (-1, 1))


def niveau2_families(a2: int, a1: int, a0: int, p: int) -> dict:
    """Raw (x, y) pairs per family, before canonicalisation."""
    require_generic(a2, a1, a0, p)
    seeds = {"i": (a0, a2 + p * a1), "ii": (a1, a2 + p * a0), "iii": (a2, a1 + p * a0)}
    out = {}
    for name, (x0, y0) in seeds.items():
        out[name] = [(x0 - d, y0 + d - eps * (p - 1)) for d, eps in DELTA_EPS]
    return out


def niveau2_allowed(a2: int, a1: int, a0: int, p: int) -> set:
    out = set()
    for pairs in niveau2_families(a2, a1, a0, p).values():
        for x, y in pairs:
            t = InertialTypeN2.make(p, x, y)
            if t.is_niveau2():
                out.add(t)
    return out


INFINITY = "infinity"
ZERO = "zero"
GENERIC = "generic"


def fl_forcing(a2: int, a1: int, a0: int, p: int, tau: InertialTypeN2) -> Optional[str]:
    """FL class forced by a niveau 2 type, if any."""
    require_generic(a2, a1, a0, p)
    if tau == InertialTypeN2.make(p, a0, a2 + 1 + p * (a1 - 1)):
        return INFINITY
    if tau == InertialTypeN2.make(p, a2, a0 - 1 + p * (a1 + 1)):
        return ZERO
    return None


def rank1_niveau2_constraints(p: int) -> list:
    """Admissible (k mod e, r) for rank one niveau 2 objects, with the exponent k + pr."""
    e = p * p - 1
    out = []
    for r in range(0, 2 * (p + 1) + 1):
        for k in range(e):
            if (k + p * r) % (p + 1) == 0:
                out.append((k, r, (k + p * r) % e))
    return out


def family_i_r_values(a: int, b: int, p: int) -> list:
    """r with r + s = alpha(p+1), r = alpha + (a-b) mod p-1, 0 < r, s < 2(p+1)."""
    rs = set()
    for alpha in (1, 2, 3):
        for r in range(1, 2 * (p + 1)):
            s = alpha * (p + 1) - r
            if 0 < s < 2 * (p + 1) and (r - alpha - (a - b)) % (p - 1) == 0:
                rs.add(r)
    return sorted(rs)


def weight_dual(x, y=None, z=None) -> tuple:
    """(a, b, c) -> (-c, -b, -a)."""
    if y is None:
        x, y, z = tuple(x)
    return (-z, -y, -x)


def lemma443_list(a: int, b: int, c: int, p: int) -> list:
    require_generic(a, b, c, p)
    return [
        SerreWeight(b + p - 1, a - 1, c + 1),
        SerreWeight(a - 1, c + 1, b - p + 1),
        SerreWeight(c + p, b, a - p),
        SerreWeight(b + p - 1, a, c),
        SerreWeight(a, c, b - p + 1),
        SerreWeight(c + p - 1, b, a - p + 1),
        SerreWeight(a - 1, b, c + 1),
    ]


def serre_weight_bounds(a: int, b: int, c: int, p: int, fl_class: str) -> tuple:
    """(lower, upper) sets of weights as a function of the FL class."""
    require_generic(a, b, c, p)
    base = SerreWeight(a - 1, b, c + 1)
    lower = {base}
    upper = {base, SerreWeight(c + p - 1, b, a - p + 1)}
    if fl_class == INFINITY:
        extra = SerreWeight(a, c, b - p + 1)
    elif fl_class == ZERO:
        extra = SerreWeight(b + p - 1, a, c)
    elif fl_class == GENERIC:
        extra = None
    else:
        raise ValueError(f"unknown FL class {fl_class!r}")
    if extra is not None:
        lower.add(extra)
        upper.add(extra)
    return lower, upper


def fl_class_of(point) -> str:
    """Map a ProjPoint (or None/0) to the class label used by the weight bounds."""
    v = getattr(point, "value", point)
    if v is None:
        return INFINITY
    if v == 0:
        return ZERO
    return GENERIC
