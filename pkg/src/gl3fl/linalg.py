"""Dense linear algebra over a finite field Fq (matrices are lists of lists of ints)."""
from __future__ import annotations

from typing import List, Optional, Tuple

from .scalars import Fq, NotAUnit

Mat = List[List[int]]


def zeros(n, m=None):
    m = n if m is None else m
    return [[0] * m for _ in range(n)]


def eye(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def diag(vals):
    n = len(vals)
    return [[vals[i] if i == j else 0 for j in range(n)] for i in range(n)]


def copy(A):
    return [list(r) for r in A]


def transpose(A):
    return [list(r) for r in zip(*A)]


def mul(F: Fq, A, B):
    m = len(B)
    cols = len(B[0])
    out = []
    for row in A:
        r = []
        for j in range(cols):
            acc = 0
            for k in range(m):
                if row[k] and B[k][j]:
                    acc = F.add(acc, F.mul(row[k], B[k][j]))
            r.append(acc)
        out.append(r)
    return out


def add(F, A, B):
    return [[F.add(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def sub(F, A, B):
    return [[F.sub(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def scale(F, A, s):
    return [[F.mul(a, s) for a in r] for r in A]


def matvec(F, A, v):
    return [F.sum(F.mul(a, x) for a, x in zip(row, v)) for row in A]


def is_zero(A):
    return all(x == 0 for r in A for x in r)


def rref(F: Fq, A) -> Tuple[Mat, List[int]]:
    M = copy(A)
    rows = len(M)
    cols = len(M[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = F.inv(M[r][c])
        M[r] = [F.mul(x, inv) for x in M[r]]
        for i in range(rows):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return M, pivots


def rank(F, A) -> int:
    if not A:
        return 0
    return len(rref(F, A)[1])


def nullspace(F: Fq, A, ncols: Optional[int] = None) -> List[List[int]]:
    """Basis of {x : A x = 0} as a list of vectors."""
    if not A:
        n = ncols
        return [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    R, piv = rref(F, A)
    n = len(A[0])
    free = [c for c in range(n) if c not in piv]
    basis = []
    for fc in free:
        v = [0] * n
        v[fc] = 1
        for r, pc in enumerate(piv):
            v[pc] = F.neg(R[r][fc])
        basis.append(v)
    return basis


def solve(F: Fq, A, b) -> Optional[List[int]]:
    """One solution of A x = b (free variables set to 0), or None."""
    n = len(A[0])
    aug = [list(r) + [bi] for r, bi in zip(A, b)]
    R, piv = rref(F, aug)
    if n in piv:
        return None
    x = [0] * n
    for r, pc in enumerate(piv):
        x[pc] = R[r][n]
    return x


def inverse(F: Fq, A) -> Mat:
    n = len(A)
    aug = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(A)]
    R, piv = rref(F, aug)
    if piv[:n] != list(range(n)):
        raise NotAUnit("singular matrix")
    return [r[n:] for r in R]


def det(F: Fq, A) -> int:
    M = copy(A)
    n = len(M)
    d = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            d = F.neg(d)
        d = F.mul(d, M[c][c])
        inv = F.inv(M[c][c])
        for i in range(c + 1, n):
            if M[i][c]:
                f = F.mul(M[i][c], inv)
                M[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(M[i], M[c])]
    return d


def columns_to_matrix(cols):
    return [list(r) for r in zip(*cols)]
