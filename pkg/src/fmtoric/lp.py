"""Exact rational linear programming.

Two independent backends: Fourier-Motzkin elimination (used for at most
``FM_MAX_VARS`` variables) and a two-phase dense-tableau simplex method with
Bland's anti-cycling rule.  Problems are stated as::

    maximize  c.x   subject to   A_ub x <= b_ub,   A_eq x = b_eq,
                                 x_j >= 0 for j not in ``free``

Strict inequalities are expressed by callers through an explicit slack
variable that is maximized.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .lattice import solve_q

FM_MAX_VARS = 8

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LinearProgram:
    num_vars: int
    objective: Sequence = ()
    A_ub: list = field(default_factory=list)
    b_ub: list = field(default_factory=list)
    A_eq: list = field(default_factory=list)
    b_eq: list = field(default_factory=list)
    free: frozenset = frozenset()

    def __post_init__(self):
        if not self.objective:
            self.objective = [0] * self.num_vars
        for rows in (self.A_ub, self.A_eq):
            for r in rows:
                if len(r) != self.num_vars:
                    raise ValueError("constraint row has wrong length")
        if len(self.A_ub) != len(self.b_ub) or len(self.A_eq) != len(self.b_eq):
            raise ValueError("constraint/rhs count mismatch")
        self.free = frozenset(self.free)

    def le(self, row, rhs):
        self.A_ub.append(list(row))
        self.b_ub.append(rhs)

    def eq(self, row, rhs):
        self.A_eq.append(list(row))
        self.b_eq.append(rhs)


@dataclass
class LPResult:
    status: str
    value: Fraction | None = None
    x: tuple | None = None
    dual: tuple | None = None

    @property
    def feasible(self) -> bool:
        return self.status != INFEASIBLE


def solve(lp: LinearProgram, method: str = "auto") -> LPResult:
    if method == "auto":
        method = "fm" if lp.num_vars <= FM_MAX_VARS else "simplex"
    if method == "fm":
        return fourier_motzkin(lp)
    if method == "simplex":
        return simplex(lp)
    raise ValueError(f"unknown LP method {method!r}")


def is_feasible(lp: LinearProgram, method: str = "auto") -> bool:
    lp0 = LinearProgram(lp.num_vars, [0] * lp.num_vars, lp.A_ub, lp.b_ub, lp.A_eq, lp.b_eq, lp.free)
    return solve(lp0, method).status != INFEASIBLE


# --- Fourier-Motzkin ---------------------------------------------------------


def _normalize(row: list[Fraction], rhs: Fraction):
    """Scale ``row.x <= rhs`` by a positive factor so the first nonzero coefficient is +-1."""
    for c in row:
        if c != 0:
            s = abs(c)
            return tuple(x / s for x in row), rhs / s
    return tuple(row), rhs


def fourier_motzkin(lp: LinearProgram) -> LPResult:
    n = lp.num_vars
    ineqs = [([Fraction(c) for c in r], Fraction(b)) for r, b in zip(lp.A_ub, lp.b_ub)]
    for j in range(n):
        if j not in lp.free:
            row = [Fraction(0)] * n
            row[j] = Fraction(-1)
            ineqs.append((row, Fraction(0)))
    eqs = [([Fraction(c) for c in r], Fraction(b)) for r, b in zip(lp.A_eq, lp.b_eq)]
    obj = [Fraction(c) for c in lp.objective]
    obj0 = Fraction(0)

    # substitute away equalities; each entry expresses x_p = rhs - coeffs.x
    subs: list[tuple[int, list[Fraction], Fraction]] = []
    while eqs:
        row, b = eqs.pop()
        p = next((j for j, c in enumerate(row) if c != 0), None)
        if p is None:
            if b != 0:
                return LPResult(INFEASIBLE)
            continue
        a = row[p]
        expr = [c / a for c in row]  # x_p + sum_{j != p} expr_j x_j = b / a
        expr[p] = Fraction(0)
        val = b / a
        subs.append((p, expr, val))

        def sub(r, rb):
            f = r[p]
            if f == 0:
                return r, rb
            r2 = [x - f * e for x, e in zip(r, expr)]
            r2[p] = Fraction(0)
            return r2, rb - f * val

        eqs = [sub(r, rb) for r, rb in eqs]
        ineqs = [sub(r, rb) for r, rb in ineqs]
        f = obj[p]
        if f:
            obj = [x - f * e for x, e in zip(obj, expr)]
            obj[p] = Fraction(0)
            obj0 += f * val

    # objective variable t (index n):  t - obj.x <= obj0
    t = n
    rows = set()
    for r, b in ineqs:
        rr, bb = _normalize(r + [Fraction(0)], b)
        if not any(rr):
            if bb < 0:
                return LPResult(INFEASIBLE)
            continue
        rows.add((rr, bb))
    rows.add(_normalize([-c for c in obj] + [Fraction(1)], obj0))

    remaining = [j for j in range(n) if any(r[j] != 0 for r, _ in rows)]
    stages = []
    while remaining:
        def cost(j):
            pos = sum(1 for r, _ in rows if r[j] > 0)
            neg = sum(1 for r, _ in rows if r[j] < 0)
            return pos * neg - pos - neg
        k = min(remaining, key=cost)
        remaining.remove(k)
        stages.append((k, list(rows)))
        pos = [(r, b) for r, b in rows if r[k] > 0]
        neg = [(r, b) for r, b in rows if r[k] < 0]
        new = {(r, b) for r, b in rows if r[k] == 0}
        for rp, bp in pos:
            for rn, bn in neg:
                fp, fn = rp[k], -rn[k]
                comb = [a / fp + c / fn for a, c in zip(rp, rn)]
                comb[k] = Fraction(0)
                cr, cb = _normalize(comb, bp / fp + bn / fn)
                if not any(cr):
                    if cb < 0:
                        return LPResult(INFEASIBLE)
                    continue
                new.add((cr, cb))
        rows = new
        remaining = [j for j in remaining if any(r[j] != 0 for r, _ in rows)]

    lo, hi = None, None
    for r, b in rows:
        a = r[t]
        others = any(r[j] != 0 for j in range(n))
        if others:
            continue
        if a > 0:
            hi = b / a if hi is None else min(hi, b / a)
        elif a < 0:
            lo = b / a if lo is None else max(lo, b / a)
    if lo is not None and hi is not None and lo > hi:
        return LPResult(INFEASIBLE)
    if hi is None:
        return LPResult(UNBOUNDED)

    values: dict[int, Fraction] = {t: hi}
    for k, srows in reversed(stages):
        klo, khi = None, None
        for r, b in srows:
            a = r[k]
            if a == 0:
                continue
            rest = b - sum((r[j] * values.get(j, Fraction(0)) for j in range(n + 1) if j != k and r[j] != 0),
                           Fraction(0))
            if a > 0:
                khi = rest / a if khi is None else min(khi, rest / a)
            else:
                klo = rest / a if klo is None else max(klo, rest / a)
        if klo is not None:
            values[k] = klo
        elif khi is not None:
            values[k] = khi
        else:
            values[k] = Fraction(0)
    x = [values.get(j, Fraction(0)) for j in range(n)]
    for p, expr, val in reversed(subs):
        x[p] = val - sum((e * xj for e, xj in zip(expr, x) if e != 0), Fraction(0))
    value = sum((Fraction(c) * xj for c, xj in zip(lp.objective, x)), Fraction(0))
    return LPResult(OPTIMAL, value, tuple(x))


# --- simplex -----------------------------------------------------------------


def simplex_standard(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LPResult:
    """Maximize c.x subject to A x = b, x >= 0.

    ``dual`` is a vector y with A^T y >= c and b.y equal to the optimum.
    """
    m = len(A)
    n = len(c)
    sign = [1 if Fraction(bi) >= 0 else -1 for bi in b]
    rows = [[Fraction(a) * s for a in r] + [Fraction(bi) * s] for r, bi, s in zip(A, b, sign)]
    # artificial columns n .. n+m-1, rhs is last
    T = [r[:n] + [Fraction(int(i == j)) for j in range(m)] + [r[n]] for i, r in enumerate(rows)]
    basis = [n + i for i in range(m)]
    width = n + m

    def pivot(r, col):
        pr = T[r]
        inv = 1 / pr[col]
        if inv != 1:
            T[r] = pr = [x * inv for x in pr]
        nz = [j for j, x in enumerate(pr) if x != 0]
        for i in range(len(T)):
            if i != r:
                f = T[i][col]
                if f != 0:
                    Ti = T[i]
                    for j in nz:
                        Ti[j] -= f * pr[j]
        basis[r] = col

    def run(cost, allowed):
        # cost: objective coefficients over columns (maximize)
        while True:
            cb = [cost[j] for j in basis]
            in_basis = set(basis)
            entering = None
            for j in allowed:
                if j in in_basis:
                    continue
                red = cost[j] - sum((cb[i] * T[i][j] for i in range(len(T)) if T[i][j] != 0), Fraction(0))
                if red > 0:
                    entering = j
                    break
            if entering is None:
                return OPTIMAL
            best = None
            for i in range(len(T)):
                a = T[i][entering]
                if a > 0:
                    ratio = T[i][-1] / a
                    if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                        best = (ratio, i)
            if best is None:
                return UNBOUNDED
            pivot(best[1], entering)

    # phase 1: maximize -sum(artificials)
    cost1 = [Fraction(0)] * n + [Fraction(-1)] * m
    run(cost1, range(width))
    if sum((T[i][-1] for i in range(m) if basis[i] >= n), Fraction(0)) != 0:
        return LPResult(INFEASIBLE)
    # drive remaining (zero-level) artificials out of the basis
    keep = []
    for i in range(len(T)):
        if basis[i] >= n:
            col = next((j for j in range(n) if T[i][j] != 0), None)
            if col is None:
                continue
            pivot(i, col)
        keep.append(i)
    T[:] = [T[i] for i in keep]
    basis[:] = [basis[i] for i in keep]
    T[:] = [r[:n] + [r[-1]] for r in T]

    cost2 = [Fraction(x) for x in c]
    status = run(cost2, range(n))
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        x[j] = T[i][-1]
    value = sum((Fraction(ci) * xi for ci, xi in zip(c, x)), Fraction(0))
    # duals: any solution of B^T y = c_B; B spans the column space of A
    B_T = [[Fraction(A[r][j]) * sign[r] for r in range(m)] for j in basis]
    y = solve_q(B_T, [Fraction(c[j]) for j in basis]) if basis else [Fraction(0)] * m
    y = [v * s for v, s in zip(y, sign)]
    return LPResult(OPTIMAL, value, tuple(x), tuple(y))


def simplex(lp: LinearProgram) -> LPResult:
    """Solve a general LinearProgram by reduction to standard form."""
    n = lp.num_vars
    cols = []  # (original var, sign)
    for j in range(n):
        cols.append((j, 1))
        if j in lp.free:
            cols.append((j, -1))
    nub = len(lp.A_ub)
    width = len(cols) + nub
    A, b = [], []
    for i, (r, bi) in enumerate(zip(lp.A_ub, lp.b_ub)):
        row = [Fraction(r[j]) * s for j, s in cols] + [Fraction(int(i == k)) for k in range(nub)]
        A.append(row)
        b.append(Fraction(bi))
    for r, bi in zip(lp.A_eq, lp.b_eq):
        A.append([Fraction(r[j]) * s for j, s in cols] + [Fraction(0)] * nub)
        b.append(Fraction(bi))
    c = [Fraction(lp.objective[j]) * s for j, s in cols] + [Fraction(0)] * nub
    if not A:
        # no constraints: bounded only if objective is zero on the cone of directions
        if any(v > 0 for v in c):
            return LPResult(UNBOUNDED)
        return LPResult(OPTIMAL, Fraction(0), tuple(Fraction(0) for _ in range(n)), ())
    res = simplex_standard(c, A, b)
    if res.status != OPTIMAL:
        return res
    x = [Fraction(0)] * n
    for (j, s), v in zip(cols, res.x):
        x[j] += s * v
    assert len(res.x) == width
    return LPResult(OPTIMAL, res.value, tuple(x), res.dual)
