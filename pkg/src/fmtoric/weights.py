"""Weight vectors, their diagonal and center sets, and the center subspaces H_I.

Index subsets are 1-based tuples, matching the labelling of the n marked
points.  Centers live in a product of d copies of P^{n-d-2} whose projective
coordinates are indexed by d+2..n.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import PreconditionError
from .lattice import nullspace_q, rank_q
from .report import Report

FM = "FM"
P = "P"

EQUAL = "equal"
DISJOINT = "disjoint"
MEETS = "meets"


@dataclass(frozen=True)
class WeightSystem:
    d: int
    n: int
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        if self.d < 1 or self.n < 2:
            raise PreconditionError("weight systems need d >= 1 and n >= 2")
        w = tuple(Fraction(a) for a in self.weights)
        if len(w) != self.n:
            raise PreconditionError(f"expected {self.n} weights, got {len(w)}")
        object.__setattr__(self, "weights", w)

    def weight(self, i: int) -> Fraction:
        """Weight of the 1-based index i."""
        return self.weights[i - 1]

    def total(self, subset: Iterable[int]) -> Fraction:
        return sum((self.weight(i) for i in subset), Fraction(0))

    def dominates(self, other: "WeightSystem") -> bool:
        return (self.d, self.n) == (other.d, other.n) and all(a >= b for a, b in zip(self.weights, other.weights))


def ones(d: int, n: int) -> WeightSystem:
    return WeightSystem(d, n, (1,) * n)


def lm_weights(d: int, n: int) -> WeightSystem:
    """1 on the first d+1 points, 1/(n-d-1) on the rest."""
    _require_range(d, n)
    return WeightSystem(d, n, (1,) * (d + 1) + (Fraction(1, n - d - 1),) * (n - d - 1))


def identification_weights(d: int, n: int) -> WeightSystem:
    """1 on the first d+1 points, 1/(n-d-2) on the rest."""
    _require_range(d, n)
    return WeightSystem(d, n, (1,) * (d + 1) + (Fraction(1, n - d - 2),) * (n - d - 1))


def _require_range(d: int, n: int) -> None:
    if d < 1 or n <= d + 2:
        raise PreconditionError(f"need d >= 1 and n > d + 2, got d={d}, n={n}")


@dataclass(frozen=True)
class ThresholdData:
    epsilon: Fraction
    epsilon_hat: Fraction
    w: tuple[Fraction, ...]
    L_exponents: tuple[int, ...]


def threshold_data(d: int, n: int) -> ThresholdData:
    _require_range(d, n)
    eps = Fraction(1, n - d)
    eps_hat = Fraction(1, (d + 1) * (n - d))
    w = (1 - eps_hat,) * d + (1 - (n - d - 1) * eps + d * eps_hat,) + (eps,) * (n - d - 1)
    scale = (d + 1) * (n - d)
    exps = tuple(scale * x for x in w)
    if any(e.denominator != 1 or e <= 0 for e in exps):
        raise PreconditionError(f"linearization exponents {exps} are not positive integers")
    return ThresholdData(eps, eps_hat, w, tuple(int(e) for e in exps))


def domain_check(ws: WeightSystem, domain: str) -> Report:
    """Membership in the FM domain (0 < a_i <= 1) or the P domain (w_i <= a_i <= 1)."""
    if domain not in (FM, P):
        raise PreconditionError(f"unknown domain {domain!r}")
    rep = Report(f"domain_check {domain}")
    lower = threshold_data(ws.d, ws.n).w if domain == P else None
    violation = None
    for i, a in enumerate(ws.weights, start=1):
        if domain == FM and a <= 0:
            violation = {"index": i, "bound": "a_i > 0", "value": a}
        elif domain == P and a < lower[i - 1]:
            violation = {"index": i, "bound": f"a_i >= {lower[i - 1]}", "value": a}
        elif a > 1:
            violation = {"index": i, "bound": "a_i <= 1", "value": a}
        if violation:
            break
    rep.add(f"weights lie in the {domain} domain", violation is None, violation)
    return rep


def in_domain(ws: WeightSystem, domain: str) -> bool:
    return domain_check(ws, domain).passed


def diagonal_set(ws: WeightSystem) -> frozenset[tuple[int, ...]]:
    """All index subsets I of {1..n} with total weight > 1."""
    if not in_domain(ws, FM):
        raise PreconditionError("weights are outside the FM domain")
    out = set()
    idx = range(1, ws.n + 1)
    for k in range(2, ws.n + 1):
        for I in combinations(idx, k):
            if ws.total(I) > 1:
                out.add(I)
    return frozenset(out)


# --- center subspaces ---------------------------------------------------------


COORDINATE = "coordinate"
DIAGONAL = "diagonal"


@dataclass(frozen=True)
class CenterSubspace:
    """H_I inside (P^{n-d-2})^d; the same equations hold in every factor."""

    d: int
    n: int
    index_subset: tuple[int, ...]

    def __post_init__(self):
        I = tuple(sorted(self.index_subset))
        object.__setattr__(self, "index_subset", I)
        allowed = set(range(self.d + 1, self.n + 1))
        if len(I) < 2 or not set(I) < allowed:
            raise PreconditionError(f"{I} is not a proper subset of {{{self.d + 1}..{self.n}}} of size >= 2")

    @property
    def kind(self) -> str:
        return COORDINATE if self.d + 1 in self.index_subset else DIAGONAL

    @property
    def coordinates(self) -> tuple[int, ...]:
        return tuple(range(self.d + 2, self.n + 1))

    @property
    def equations(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Linear forms as ((coordinate, coefficient), ...), one tuple per form, valid in each factor."""
        I = self.index_subset
        if self.kind == COORDINATE:
            return tuple(((i, 1),) for i in I if i != self.d + 1)
        return tuple(((i, 1), (j, -1)) for i, j in zip(I, I[1:]))

    @property
    def dim(self) -> int:
        return self.d * (self.n - len(self.index_subset) - self.d - 1)

    @property
    def dim_computed(self) -> int:
        """Dimension recomputed from the rank of the equations in each factor."""
        r = rank_q(self._matrix(self.equations))
        return self.d * (len(self.coordinates) - r - 1)

    def _matrix(self, forms) -> list[list[int]]:
        pos = {c: k for k, c in enumerate(self.coordinates)}
        rows = []
        for form in forms:
            row = [0] * len(self.coordinates)
            for c, a in form:
                row[pos[c]] += a
            rows.append(row)
        return rows

    def factor_point(self) -> tuple[int, ...] | None:
        """Projective point cut out in one factor when the center has dimension 0."""
        basis = nullspace_q(self._matrix(self.equations), len(self.coordinates))
        if len(basis) != 1:
            return None
        v = basis[0]
        den = lcm(*(x.denominator for x in v))
        ints = [int(x * den) for x in v]
        g = gcd(*ints)
        ints = [x // g for x in ints]
        if next(x for x in ints if x) < 0:
            ints = [-x for x in ints]
        return tuple(ints)

    def label(self) -> str:
        name = "H_{" + ",".join(map(str, self.index_subset)) + "}"
        pt = self.factor_point()
        if pt is None:
            return name
        one = "[" + ":".join(map(str, pt)) + "]"
        return f"{name} = ({','.join([one] * self.d)})"

    def to_json_obj(self) -> dict:
        return {"index_subset": list(self.index_subset), "kind": self.kind, "dim": self.dim,
                "equations": [[list(t) for t in form] for form in self.equations]}


def center_set(ws: WeightSystem) -> list[CenterSubspace]:
    """All H_I, I a proper subset of {d+1..n} with |I| >= 2 and total weight > 1, sorted by I."""
    if not in_domain(ws, P):
        raise PreconditionError("weights are outside the P domain")
    pool = range(ws.d + 1, ws.n + 1)
    out = []
    for k in range(2, len(pool)):
        for I in combinations(pool, k):
            if ws.total(I) > 1:
                out.append(CenterSubspace(ws.d, ws.n, I))
    return sorted(out, key=lambda h: h.index_subset)


def subspace_relation(h1: CenterSubspace, h2: CenterSubspace) -> str:
    if (h1.d, h1.n) != (h2.d, h2.n):
        raise PreconditionError("centers live in different ambient spaces")
    ncoords = len(h1.coordinates)
    relations = set()
    for _factor in range(h1.d):
        r1 = rank_q(h1._matrix(h1.equations))
        r2 = rank_q(h2._matrix(h2.equations))
        both = rank_q(h1._matrix(h1.equations + h2.equations))
        if both == ncoords:
            relations.add(DISJOINT)
        elif r1 == r2 == both:
            relations.add(EQUAL)
        else:
            relations.add(MEETS)
    if DISJOINT in relations:
        return DISJOINT
    if relations == {EQUAL}:
        return EQUAL
    return MEETS


def order_by_dimension(centers: Sequence[CenterSubspace]) -> list[CenterSubspace]:
    return sorted(centers, key=lambda h: (h.dim, h.index_subset))


def extends_dimension_order(order: Sequence[CenterSubspace]) -> bool:
    dims = [h.dim for h in order]
    return all(a <= b for a, b in zip(dims, dims[1:]))


# --- relations between center sets -----------------------------------------


def check_identification(d: int, n: int) -> Report:
    """G for the identification weights is G for the LM weights plus the point H_{d+2..n}."""
    _require_range(d, n)
    rep = Report(f"check_identification d={d} n={n}")
    g_lm = center_set(lm_weights(d, n))
    g_id = center_set(identification_weights(d, n))
    extra = CenterSubspace(d, n, tuple(range(d + 2, n + 1)))
    lm_sets = {h.index_subset for h in g_lm}
    id_sets = {h.index_subset for h in g_id}
    rep.add("LM centers are all of coordinate kind", all(h.kind == COORDINATE for h in g_lm),
            {"centers": len(g_lm)})
    rep.add("identification centers equal LM centers plus H_{d+2..n}",
            id_sets == lm_sets | {extra.index_subset} and extra.index_subset not in lm_sets,
            {"lm": sorted(lm_sets), "identification": sorted(id_sets)})
    pt = extra.factor_point()
    rep.add("extra center is the torus unit point", extra.dim == 0 and pt == (1,) * len(extra.coordinates),
            {"label": extra.label()})
    meeting = [h.index_subset for h in g_lm if subspace_relation(extra, h) != DISJOINT]
    rep.add("extra center is disjoint from every LM center", not meeting, {"not_disjoint": meeting} if meeting else None)
    return rep


def check_weight_reduction(A: WeightSystem, B: WeightSystem) -> Report:
    """For A >= B componentwise: G_B is contained in G_A and K_B in K_A."""
    rep = Report("check_weight_reduction")
    if (A.d, A.n) != (B.d, B.n):
        raise PreconditionError("weights have different (d, n)")
    for ws in (A, B):
        if not in_domain(ws, P):
            raise PreconditionError("weights are outside the P domain")
    comparable = A.dominates(B)
    rep.info["relation"] = "A >= B" if comparable else "not-comparable"
    rep.add("weights are comparable (A >= B)", comparable)
    if not comparable:
        return rep
    gA = {h.index_subset for h in center_set(A)}
    gB = {h.index_subset for h in center_set(B)}
    kA, kB = diagonal_set(A), diagonal_set(B)
    rep.add("center set of B is contained in that of A", gB <= gA, {"missing": sorted(gB - gA)} if gB - gA else None)
    rep.add("diagonal set of B is contained in that of A", kB <= kA, {"missing": sorted(kB - kA)} if kB - kA else None)
    chain = blowup_chain(A.d, A.n) if A.n > A.d + 2 else None
    if chain is not None:
        named = {tuple(v["weights"]): k for k, v in chain.items()}
        key = (tuple(A.weights), tuple(B.weights))
        if key[0] in named and key[1] in named:
            rep.info["chain"] = chain
    return rep


def blowup_chain(d: int, n: int) -> dict:
    """Center sets along all-ones >= identification weights >= LM weights."""
    out = {}
    prev = None
    for name, ws in (("ones", ones(d, n)), ("identification", identification_weights(d, n)),
                     ("lm", lm_weights(d, n))):
        g = sorted(h.index_subset for h in center_set(ws))
        entry = {"weights": list(ws.weights), "centers": g}
        if prev is not None:
            entry["dropped"] = sorted(set(prev) - set(g))
        out[name] = entry
        prev = g
    return out
