"""Exact integer lattice algebra.

Vectors of ``Z^r`` and covectors of ``Hom(Z^r, Z)`` are kept as distinct tuple
subclasses so that the pairing ``pair(u, v)`` is the only way to combine them.
Everything is exact: Python ints and :class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence

from .errors import PreconditionError
from .report import Report

Rational = int | Fraction


def _as_int(c) -> int:
    if isinstance(c, bool):
        raise TypeError("booleans are not lattice coordinates")
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    raise TypeError(f"non-integral lattice coordinate {c!r}")


def _as_rat(c) -> Rational:
    if isinstance(c, (int, Fraction)) and not isinstance(c, bool):
        return c
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"non-rational coordinate {c!r}")


class LatVec(tuple):
    """An element of ``Z^rank``."""

    __slots__ = ()

    def __new__(cls, coords: Iterable[int]):
        vec = super().__new__(cls, (_as_int(c) for c in coords))
        if not vec:
            raise PreconditionError("lattice vectors need positive rank")
        return vec

    @property
    def rank(self) -> int:
        return len(self)

    def is_zero(self) -> bool:
        return not any(self)

    def __add__(self, other):
        _same_rank(self, other)
        return LatVec(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        _same_rank(self, other)
        return LatVec(a - b for a, b in zip(self, other))

    def __neg__(self):
        return LatVec(-a for a in self)

    def __mul__(self, k: int):
        return LatVec(k * a for a in self)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"LatVec({tuple(self)!r})"


class Covector(tuple):
    """A rational linear form on ``Q^rank``; entries may be ints or Fractions."""

    __slots__ = ()

    def __new__(cls, coords: Iterable[Rational]):
        u = super().__new__(cls, (_as_rat(c) for c in coords))
        if not u:
            raise PreconditionError("covectors need positive rank")
        return u

    @property
    def rank(self) -> int:
        return len(self)

    def __add__(self, other):
        _same_rank(self, other)
        return Covector(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        _same_rank(self, other)
        return Covector(a - b for a, b in zip(self, other))

    def __neg__(self):
        return Covector(-a for a in self)

    def __mul__(self, k):
        return Covector(k * a for a in self)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"Covector({tuple(self)!r})"


def _same_rank(a, b) -> None:
    if len(a) != len(b):
        raise PreconditionError(f"rank mismatch: {len(a)} vs {len(b)}")


def pair(u: Covector, v: Sequence[Rational]) -> Rational:
    """The pairing <u, v> of a covector with a (lattice or rational) vector."""
    if not isinstance(u, Covector):
        raise TypeError("first argument of pair() must be a Covector")
    if isinstance(v, Covector):
        raise TypeError("cannot pair two covectors")
    _same_rank(u, v)
    return sum((a * b for a, b in zip(u, v)), 0)


def vgcd(coords: Iterable[int]) -> int:
    return reduce(gcd, coords, 0)


def primitive(v: Sequence[int]) -> LatVec:
    """Primitive generator of the ray through the nonzero vector ``v``."""
    v = LatVec(v)
    g = vgcd(v)
    if g == 0:
        raise PreconditionError("zero vector has no primitive generator")
    return LatVec(c // g for c in v)


def primitive_rational(p: Sequence[Rational]) -> LatVec:
    """Primitive lattice vector on the ray through a nonzero rational vector."""
    den = reduce(lambda a, b: a * b // gcd(a, b), (Fraction(c).denominator for c in p), 1)
    return primitive([int(Fraction(c) * den) for c in p])


def is_primitive(v: Sequence[int]) -> bool:
    return vgcd(v) == 1


@dataclass(frozen=True)
class LatticeMap:
    """Homomorphism ``Z^domain_rank -> Z^codomain_rank`` given by an integer matrix."""

    matrix: tuple[tuple[int, ...], ...]
    domain_rank: int
    codomain_rank: int

    def __post_init__(self):
        rows = tuple(tuple(_as_int(c) for c in row) for row in self.matrix)
        object.__setattr__(self, "matrix", rows)
        if self.domain_rank < 1 or self.codomain_rank < 1:
            raise PreconditionError("lattice ranks must be positive")
        if len(rows) != self.codomain_rank or any(len(r) != self.domain_rank for r in rows):
            raise PreconditionError("matrix shape does not match ranks")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "LatticeMap":
        rows = [list(r) for r in rows]
        if not rows:
            raise PreconditionError("empty matrix")
        return cls(tuple(tuple(r) for r in rows), len(rows[0]), len(rows))

    @classmethod
    def identity(cls, rank: int) -> "LatticeMap":
        return cls.from_rows([[int(i == j) for j in range(rank)] for i in range(rank)])

    def __call__(self, v: Sequence[int]) -> LatVec:
        _check_len(v, self.domain_rank)
        if isinstance(v, Covector):
            raise TypeError("lattice maps act on vectors, not covectors")
        return LatVec(sum(a * b for a, b in zip(row, v)) for row in self.matrix)

    def apply(self, p: Sequence[Rational]) -> tuple[Rational, ...]:
        """Scalar extension: apply to a rational vector."""
        _check_len(p, self.domain_rank)
        return tuple(sum((a * b for a, b in zip(row, p)), 0) for row in self.matrix)

    def columns(self) -> list[LatVec]:
        return [LatVec(row[j] for row in self.matrix) for j in range(self.domain_rank)]

    def compose(self, other: "LatticeMap") -> "LatticeMap":
        """``self ∘ other``."""
        if other.codomain_rank != self.domain_rank:
            raise PreconditionError("cannot compose: rank mismatch")
        return LatticeMap.from_rows(
            [[sum(self.matrix[i][k] * other.matrix[k][j] for k in range(self.domain_rank))
              for j in range(other.domain_rank)] for i in range(self.codomain_rank)]
        )

    def is_surjective(self) -> bool:
        sd = smith_data(self)
        return sd.rank == self.codomain_rank and all(x == 1 for x in sd.elementary_divisors)

    def to_json_obj(self) -> dict:
        return {"domain_rank": self.domain_rank, "codomain_rank": self.codomain_rank,
                "matrix": [list(r) for r in self.matrix]}

    @classmethod
    def from_json_obj(cls, obj) -> "LatticeMap":
        if isinstance(obj, list):
            return cls.from_rows(obj)
        m = cls.from_rows(obj["matrix"])
        if "domain_rank" in obj and obj["domain_rank"] != m.domain_rank:
            raise PreconditionError("domain_rank disagrees with matrix")
        if "codomain_rank" in obj and obj["codomain_rank"] != m.codomain_rank:
            raise PreconditionError("codomain_rank disagrees with matrix")
        return m


def _check_len(v, n):
    if len(v) != n:
        raise PreconditionError(f"expected a vector of length {n}, got {len(v)}")


# --- Smith normal form ------------------------------------------------------


@dataclass(frozen=True)
class SmithData:
    elementary_divisors: tuple[int, ...]
    kernel_basis: tuple[LatVec, ...]
    rank: int


def smith_normal_form(rows: Sequence[Sequence[int]], ncols: int | None = None):
    """Return ``(diag, U, V)`` with ``U @ A @ V`` diagonal, U and V unimodular.

    ``diag`` lists the nonzero diagonal entries (a divisibility chain).
    Pivoting picks the entry of minimal absolute value.
    """
    A = [[_as_int(c) for c in r] for r in rows]
    m = len(A)
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    dirty = dirty or A[t][j] != 0
            if dirty:
                # move a smaller remainder into the pivot position
                cand = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
                _, i, j = min(cand)
                if j == t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    return [A[i][i] for i in range(t)], U, V


def smith_data(M: LatticeMap) -> SmithData:
    """Elementary divisors (padded with zeros to min(rows, cols)) and a saturated kernel basis."""
    diag, _, V = smith_normal_form(M.matrix, M.domain_rank)
    r = len(diag)
    n = M.domain_rank
    kernel = tuple(LatVec(V[i][j] for i in range(n)) for j in range(r, n))
    pad = min(M.codomain_rank, n) - r
    return SmithData(tuple(diag) + (0,) * pad, kernel, r)


def lattice_index(vectors: Sequence[Sequence[int]]) -> int:
    """Index of the group generated by ``vectors`` in the saturation of their span.

    Returns 0 when the vectors are linearly dependent.
    """
    vectors = [list(v) for v in vectors]
    if not vectors:
        return 1
    diag, _, _ = smith_normal_form(vectors, len(vectors[0]))
    if len(diag) < len(vectors):
        return 0
    out = 1
    for x in diag:
        out *= x
    return out


def saturated_span_check(vectors: Sequence[Sequence[int]], M: LatticeMap) -> Report:
    """Do ``vectors`` sum to zero, generate ker(M) as a group, and number dim ker + 1?"""
    vecs = [LatVec(v) for v in vectors]
    for v in vecs:
        if not M(v).is_zero():
            raise PreconditionError(f"vector {tuple(v)} is not in the kernel")
    rep = Report("saturated_span_check")
    kdim = M.domain_rank - smith_data(M).rank
    total = [sum(v[i] for v in vecs) for i in range(M.domain_rank)]
    rep.add("vectors sum to zero", not any(total), {"sum": total})
    if vecs:
        diag, _, _ = smith_normal_form(vecs, M.domain_rank)
    else:
        diag = []
    gen = len(diag) == kdim and all(x == 1 for x in diag)
    rep.add("vectors generate the kernel as a group", gen,
            {"kernel_rank": kdim, "span_rank": len(diag), "elementary_divisors": diag})
    rep.add("vector count equals kernel rank + 1", len(vecs) == kdim + 1,
            {"count": len(vecs), "kernel_rank": kdim})
    return rep


# --- exact rational linear algebra -------------------------------------------


def row_reduce(rows: Sequence[Sequence[Rational]]):
    """Reduced row echelon form over Q. Returns (rref rows, pivot columns)."""
    R = [[Fraction(c) for c in r] for r in rows]
    if not R:
        return [], []
    ncols = len(R[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(R)) if R[i][c] != 0), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for i in range(len(R)):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == len(R):
            break
    return R[:r], pivots


def rank_q(rows: Sequence[Sequence[Rational]]) -> int:
    return len(row_reduce(rows)[1])


def nullspace_q(rows: Sequence[Sequence[Rational]], ncols: int) -> list[list[Fraction]]:
    """Basis of {x : rows @ x = 0} over Q."""
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    R, piv = row_reduce(rows)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r, p in enumerate(piv):
            x[p] = -R[r][f]
        basis.append(x)
    return basis


def solve_q(A: Sequence[Sequence[Rational]], b: Sequence[Rational]) -> list[Fraction] | None:
    """A solution of ``A x = b`` over Q, unique if A has full column rank; None if inconsistent."""
    if not A:
        return []
    ncols = len(A[0])
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, piv = row_reduce(aug)
    if ncols in piv:
        return None
    x = [Fraction(0)] * ncols
    for r, p in enumerate(piv):
        x[p] = R[r][ncols]
    return x


def coordinates_in_basis(gens: Sequence[Sequence[Rational]], p: Sequence[Rational]):
    """Coefficients of ``p`` in terms of linearly independent ``gens``; None if p not in the span."""
    n = len(p)
    if not gens:
        return [] if not any(p) else None
    A = [[g[i] for g in gens] for i in range(n)]
    return solve_q(A, p)


def determinant(rows: Sequence[Sequence[Rational]]) -> Fraction:
    M = [[Fraction(c) for c in r] for r in rows]
    n = len(M)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        inv = 1 / M[c][c]
        for i in range(c + 1, n):
            if M[i][c]:
                f = M[i][c] * inv
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return det


def inverse_q(rows: Sequence[Sequence[Rational]]) -> list[list[Fraction]]:
    n = len(rows)
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(rows)]
    R, piv = row_reduce(aug)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise PreconditionError("singular matrix")
    return [row[n:] for row in R]
