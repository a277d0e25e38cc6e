"""Torus-invariant divisors on complete simplicial fans and their wall numbers.

Conventions: a divisor ``D = sum a_rho D_rho`` has local data ``m_sigma`` with
``<m_sigma, u_rho> = -a_rho`` for every ray of the maximal cone sigma, and D is
ample exactly when every wall number ``D . V(tau)`` is positive.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Sequence

from .errors import ConsistencyError, PreconditionError
from .fan import Fan, cone_mult, generators_contain, is_complete, maps_onto_cones, walls
from .lattice import Covector, LatticeMap, coordinates_in_basis, pair
from .lp import OPTIMAL, FM_MAX_VARS, LinearProgram, fourier_motzkin, simplex_standard


@dataclass(frozen=True)
class TorusDivisor:
    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(Fraction(c) for c in self.coefficients))

    def __len__(self):
        return len(self.coefficients)

    def __getitem__(self, i):
        return self.coefficients[i]

    def __iter__(self):
        return iter(self.coefficients)

    def __add__(self, other: "TorusDivisor") -> "TorusDivisor":
        if len(other) != len(self):
            raise PreconditionError("divisors live on different fans")
        return TorusDivisor(a + b for a, b in zip(self, other))

    def scale(self, k) -> "TorusDivisor":
        return TorusDivisor(k * a for a in self)

    def to_json_obj(self) -> list:
        return [str(a) if a.denominator != 1 else a.numerator for a in self]

    @classmethod
    def zero(cls, n: int) -> "TorusDivisor":
        return cls((0,) * n)

    @classmethod
    def ray(cls, n: int, i: int) -> "TorusDivisor":
        return cls(int(j == i) for j in range(n))


def as_divisor(fan: Fan, D) -> TorusDivisor:
    D = D if isinstance(D, TorusDivisor) else TorusDivisor(tuple(D))
    if len(D) != len(fan.rays):
        raise PreconditionError(f"divisor has {len(D)} coefficients but the fan has {len(fan.rays)} rays")
    return D


def principal_divisor(fan: Fan, u: Sequence) -> TorusDivisor:
    """div(chi^u) = sum <u, u_rho> D_rho."""
    cov = u if isinstance(u, Covector) else Covector(u)
    return TorusDivisor(pair(cov, r) for r in fan.rays)


@dataclass(frozen=True)
class CartierData:
    cones: tuple[tuple[int, ...], ...]
    local_covectors: tuple[Covector, ...]

    def covector(self, cone) -> Covector:
        return self.local_covectors[self.cones.index(tuple(cone))]


@dataclass(frozen=True)
class Wall:
    cone: tuple[int, ...]
    left: int
    right: int


def _require_complete(fan: Fan) -> None:
    if not is_complete(fan):
        raise PreconditionError("fan is not complete")


def cartier_data(fan: Fan, D) -> CartierData:
    D = as_divisor(fan, D)
    if not fan.is_pure_full_dimensional():
        raise PreconditionError("fan is not pure full-dimensional")
    covs = []
    for c in fan.max_cones:
        basis = fan._dual_bases.get(c)
        if basis is None:
            raise PreconditionError(f"cone {c} is not simplicial")
        m = [-sum((D[i] * row[k] for i, row in zip(c, basis)), Fraction(0)) for k in range(fan.rank)]
        covs.append(Covector(m))
    return CartierData(fan.max_cones, tuple(covs))


@lru_cache(maxsize=64)
def wall_coefficients(fan: Fan) -> tuple[tuple[Wall, dict[int, Fraction]], ...]:
    """Per wall, the numbers D_rho . V(tau) for every ray rho (zero ones omitted)."""
    _require_complete(fan)
    out = []
    for tau, (left, right) in sorted(walls(fan).items()):
        sigma, sigma2 = fan.max_cones[left], fan.max_cones[right]
        (u,) = set(sigma) - set(tau)
        (u2,) = set(sigma2) - set(tau)
        m_tau = cone_mult(fan, tau)
        alpha = Fraction(m_tau, cone_mult(fan, sigma))
        alpha2 = Fraction(m_tau, cone_mult(fan, sigma2))
        target = [-(alpha * a + alpha2 * b) for a, b in zip(fan.rays[u], fan.rays[u2])]
        beta = coordinates_in_basis(fan.generators(tau), target)
        if beta is None:
            raise ConsistencyError(f"wall relation for {tau} has no solution")
        coeffs = {u: alpha, u2: alpha2}
        for rho, b in zip(tau, beta):
            if b:
                coeffs[rho] = b
        out.append((Wall(tau, left, right), coeffs))
    return tuple(out)


def wall_intersections(fan: Fan, D) -> dict[Wall, Fraction]:
    D = as_divisor(fan, D)
    return {w: sum((D[r] * c for r, c in coeffs.items()), Fraction(0)) for w, coeffs in wall_coefficients(fan)}


def is_ample(fan: Fan, D) -> bool:
    return all(v > 0 for v in wall_intersections(fan, D).values())


def is_nef(fan: Fan, D) -> bool:
    return all(v >= 0 for v in wall_intersections(fan, D).values())


def _integral_primitive(values: Sequence[Fraction]) -> list[int]:
    den = lcm(*(v.denominator for v in values)) if values else 1
    ints = [int(v * den) for v in values]
    g = gcd(*ints) if ints else 0
    return [x // g for x in ints] if g else ints


def find_ample(fan: Fan) -> TorusDivisor | None:
    """An ample divisor (primitive integral coefficients), or None when the fan is not projective.

    Solves an exact LP for a strictly convex support function.  Coefficients on
    the rays of the first maximal cone are fixed to zero, which removes the
    linear-equivalence freedom.
    """
    _require_complete(fan)
    base = set(fan.max_cones[0]) if fan.max_cones else set()
    free_rays = [i for i in range(len(fan.rays)) if i not in base]
    col = {r: j for j, r in enumerate(free_rays)}
    nv = len(free_rays)
    rows = []
    for w, _ in wall_coefficients(fan):
        sigma = fan.max_cones[w.left]
        (u2,) = set(fan.max_cones[w.right]) - set(w.cone)
        coords = fan.coefficients(sigma, fan.rays[u2])
        row = [Fraction(0)] * nv
        if u2 in col:
            row[col[u2]] += 1
        for r, x in zip(sigma, coords):
            if r in col:
                row[col[r]] -= x
        rows.append(row)
    if not rows:
        return TorusDivisor.zero(len(fan.rays))
    if nv + 1 <= FM_MAX_VARS:
        # maximize s subject to row.a >= s, s <= 1, a free
        lp = LinearProgram(nv + 1, [0] * nv + [1], free=range(nv + 1))
        for row in rows:
            lp.le([-x for x in row] + [1], 0)
        lp.le([0] * nv + [1], 1)
        res = fourier_motzkin(lp)
        if res.status != OPTIMAL or res.value <= 0:
            return None
        a = list(res.x[:nv])
    else:
        # dual: y_w >= 0, z >= 0, sum y_w row_w = 0, sum y + z = 1, maximize -z
        k = len(rows)
        A = [[rows[t][j] for t in range(k)] + [0] for j in range(nv)]
        A.append([1] * k + [1])
        res = simplex_standard([0] * k + [-1], A, [0] * nv + [1])
        if res.status != OPTIMAL or -res.value <= 0:
            return None
        a = list(res.dual[:nv])
    coeffs = [Fraction(0)] * len(fan.rays)
    for r, j in col.items():
        coeffs[r] = Fraction(a[j])
    D = TorusDivisor(_integral_primitive(coeffs))
    if not is_ample(fan, D):
        raise ConsistencyError("LP solution is not ample")
    return D


def _covector_at(target: Fan, data: CartierData, p) -> Covector | None:
    for c, m in zip(data.cones, data.local_covectors):
        if generators_contain(target.generators(c), p):
            return m
    return None


def _pullback(M: LatticeMap, source: Fan, target: Fan, A) -> TorusDivisor:
    A = as_divisor(target, A)
    data = cartier_data(target, A)
    out = []
    for r in source.rays:
        img = M(r)
        if img.is_zero():
            out.append(Fraction(0))
            continue
        m = _covector_at(target, data, img)
        if m is None:
            raise PreconditionError(f"image of ray {tuple(r)} is outside the target support")
        out.append(-pair(m, img))
    return TorusDivisor(out)


def pullback_divisor(M: LatticeMap, source: Fan, target: Fan, A) -> TorusDivisor:
    if not maps_onto_cones(M, source, target):
        raise PreconditionError("map does not send cones onto cones")
    return _pullback(M, source, target, A)


def pullback_along_refinement(fine: Fan, coarse: Fan, A) -> TorusDivisor:
    """Pullback through the identity map when every cone of ``fine`` sits inside a cone of ``coarse``."""
    if fine.rank != coarse.rank:
        raise PreconditionError("fans have different ranks")
    for c in fine.max_cones:
        gens = fine.generators(c)
        total = [sum(g[k] for g in gens) for k in range(fine.rank)]
        host = next((h for h in coarse.max_cones if generators_contain(coarse.generators(h), total)), None)
        if host is None or not all(generators_contain(coarse.generators(host), g) for g in gens):
            raise PreconditionError(f"cone {c} is not contained in a cone of the coarser fan")
    return _pullback(LatticeMap.identity(fine.rank), fine, coarse, A)


def _least_multiplier(base: dict, extra: dict) -> int:
    """Least integer k >= 1 with base[w] + k * extra[w] > 0 for every wall."""
    k = 1
    for w, b in base.items():
        e = extra[w]
        if e > 0:
            k = max(k, (-b) // e + 1)
        elif b <= 0:
            raise PreconditionError(f"no multiplier makes wall {w.cone} positive")
    # walls with negative slope only bound k from above
    for w, b in base.items():
        if b + k * extra[w] <= 0:
            raise PreconditionError(f"no multiplier makes wall {w.cone} positive")
    return k


def min_ample_multiplier(source: Fan, M: LatticeMap, target: Fan, A, base_ray: int) -> int:
    """Least m >= 1 with D_{base_ray} + m * (pullback of A) ample on source.

    Every wall number is affine in m, so the bound is computed exactly.
    """
    if target.rank == 0:
        raise PreconditionError("target is a point; it carries no ample divisor to pull back")
    if not is_ample(target, A):
        raise PreconditionError("divisor on the target is not ample")
    pulled = pullback_divisor(M, source, target, A)
    base = wall_intersections(source, TorusDivisor.ray(len(source.rays), base_ray))
    extra = wall_intersections(source, pulled)
    return _least_multiplier(base, extra)


def min_ample_twist(source: Fan, ample: TorusDivisor, negative: TorusDivisor) -> int:
    """Least k >= 1 with k * ample - negative ample on source."""
    base = {w: -v for w, v in wall_intersections(source, negative).items()}
    extra = wall_intersections(source, ample)
    return _least_multiplier(base, extra)
