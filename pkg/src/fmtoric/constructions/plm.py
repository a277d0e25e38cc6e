"""Toric Losev-Manin type fans in (Z^{n-d-2})^d and the projections between them.

Block i (1-based) of the lattice holds the vectors e^i_k, d+2 <= k <= n: the
unit vectors for k < n and (-1, ..., -1) for k = n.
"""

from __future__ import annotations

from itertools import combinations
from math import comb
from typing import Sequence

from ..errors import BudgetExceeded, ConsistencyError, PreconditionError
from ..fan import Fan, star_subdivide_cone
from ..lattice import LatticeMap, LatVec, primitive, saturated_span_check
from ..report import Report
from ..weights import CenterSubspace, center_set, extends_dimension_order, lm_weights, order_by_dimension
from .standard import product, projective_space

DEFAULT_BUDGET = 10**6
LM_BOUND = 10  # terminal Losev-Manin index from which the chain argument applies


def _check(d: int, n: int) -> None:
    if d < 1 or n <= d + 2:
        raise PreconditionError(f"need d >= 1 and n > d + 2, got d={d}, n={n}")


def block_rank(d: int, n: int) -> int:
    return n - d - 2


def e_vec(d: int, n: int, i: int, k: int) -> LatVec:
    """e^i_k for 1 <= i <= d and d+2 <= k <= n."""
    r = block_rank(d, n)
    if not (1 <= i <= d and d + 2 <= k <= n):
        raise PreconditionError(f"no vector e^{i}_{k} for d={d}, n={n}")
    block = [-1] * r if k == n else [int(j == k - d - 2) for j in range(r)]
    out = [0] * (d * r)
    out[(i - 1) * r:i * r] = block
    return LatVec(out)


def diagonal_vec(d: int, n: int, subset: Sequence[int]) -> LatVec:
    """sum over k in subset of (e^1_k + ... + e^d_k)."""
    total = [0] * (d * block_rank(d, n))
    for k in subset:
        for i in range(1, d + 1):
            total = [a + b for a, b in zip(total, e_vec(d, n, i, k))]
    return LatVec(total)


def rays_plm(d: int, n: int) -> list[LatVec]:
    """Deduplicated rays, sorted lexicographically."""
    _check(d, n)
    idx = range(d + 2, n + 1)
    rays = {e_vec(d, n, i, k) for i in range(1, d + 1) for k in idx}
    for size in range(1, n - d - 1):
        for subset in combinations(idx, size):
            rays.add(diagonal_vec(d, n, subset))
    return sorted(rays)


def rays_plm_count(d: int, n: int) -> int:
    if d == 1:
        return 2 ** (n - 2) - 2
    return d * (n - d - 1) + 2 ** (n - d - 1) - 2


# --- cone-count prediction -----------------------------------------------------


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_add(a: list[int], b: list[int]) -> list[int]:
    out = [0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] += x
    return out


def _h_polynomial(d: int, m: int, memo: dict) -> list[int]:
    """h-polynomial of the fan built from (P^m)^d by the coordinate blowups."""
    if (d, m) in memo:
        return memo[(d, m)]
    h = [1]
    for _ in range(d):
        h = _poly_mul(h, [1] * (m + 1))
    for size in range(1, m + 1):
        codim = d * size
        if codim == 1:
            continue
        gain = _poly_mul(_h_polynomial(d, m - size, memo), [0] + [1] * (codim - 1))
        h = _poly_add(h, [comb(m + 1, size) * c for c in gain])
    memo[(d, m)] = h
    return h


def plm_cone_count(d: int, n: int) -> dict[str, int]:
    """Predicted numbers of maximal cones and of all cones (faces and zero cone included)."""
    _check(d, n)
    m = block_rank(d, n)
    h = _h_polynomial(d, m, {})
    r = d * m
    return {"max_cones": sum(h), "cones": sum(c * 2 ** (r - i) for i, c in enumerate(h))}


# --- fan construction ---------------------------------------------------------


def plm_centers(d: int, n: int) -> list[CenterSubspace]:
    """Centers for the LM weights in ascending dimension, ties broken by index subset."""
    return order_by_dimension(center_set(lm_weights(d, n)))


def center_cone(fan: Fan, d: int, n: int, center: CenterSubspace) -> tuple[int, ...]:
    """Ray indices of the cone {e^i_k : k in I minus {d+1}, 1 <= i <= d}."""
    if center.kind != "coordinate":
        raise PreconditionError(f"center {center.index_subset} is not torus invariant")
    J = [k for k in center.index_subset if k != d + 1]
    return tuple(sorted(fan.ray_index[e_vec(d, n, i, k)] for k in J for i in range(1, d + 1)))


def base_fan(d: int, n: int) -> Fan:
    """(P^{n-d-2})^d with rays ordered e^1_{d+2}, ..., e^1_n, e^2_{d+2}, ..."""
    f = projective_space(block_rank(d, n))
    out = f
    for _ in range(d - 1):
        out = product(out, f)
    return out


def fan_plm(d: int, n: int, budget: int = DEFAULT_BUDGET, order: Sequence[CenterSubspace] | None = None) -> Fan:
    _check(d, n)
    predicted = plm_cone_count(d, n)["cones"]
    if predicted > budget:
        raise BudgetExceeded(predicted, budget)
    centers = plm_centers(d, n)
    if order is not None:
        order = list(order)
        if sorted(h.index_subset for h in order) != sorted(h.index_subset for h in centers):
            raise PreconditionError("order is not a permutation of the center set")
        if not extends_dimension_order(order):
            raise PreconditionError("order does not extend ascending center dimension")
        centers = order
    fan = base_fan(d, n)
    for h in centers:
        cone = center_cone(fan, d, n, h)
        if len(cone) == 1:
            continue  # divisorial center: blowup changes nothing
        fan = star_subdivide_cone(fan, cone)
    fan = fan.canonical()
    if list(fan.rays) != rays_plm(d, n):
        raise ConsistencyError(f"rays of the constructed fan differ from the expected list for d={d}, n={n}")
    return fan


# --- projections ----------------------------------------------------------------


def projection_plm(d: int, n: int) -> LatticeMap:
    """(Z^{n-d-2})^d -> (Z^{n-d-2})^{d-1}: drop the last block.

    With the index shift k -> k-1 both blocks use the same coordinates, so
    e^i_k maps to e^i_{k-1} for i < d and e^d_k maps to 0.
    """
    if d < 2:
        raise PreconditionError("the projection needs d >= 2")
    _check(d, n)
    r = block_rank(d, n)
    src, tgt = d * r, (d - 1) * r
    return LatticeMap.from_rows([[int(j == i) for j in range(src)] for i in range(tgt)])


def check_projection_hypotheses(source_rays: Sequence, target_rays: Sequence, M: LatticeMap) -> Report:
    rep = Report("check_projection_hypotheses")
    source = [LatVec(r) for r in source_rays]
    target = {LatVec(r) for r in target_rays}
    kernel, images, stray = [], set(), []
    for r in source:
        img = M(r)
        if img.is_zero():
            kernel.append(r)
            continue
        p = primitive(img)
        images.add(p)
        if p not in target:
            stray.append({"ray": list(r), "image": list(img)})
    rep.add("each source ray maps to zero or onto a target ray", not stray, {"offending": stray[:5]} if stray else None)
    missing = sorted(target - images)
    rep.add("target rays are exactly the images of source rays", not missing and images <= target,
            {"uncovered": [list(t) for t in missing]} if missing else None)
    rep.add("projection is surjective", M.is_surjective())
    expected = M.domain_rank - M.codomain_rank + 1
    rep.add("kernel ray count equals rank drop + 1", len(kernel) == expected,
            {"count": len(kernel), "expected": expected})
    rep.extend(saturated_span_check(kernel, M), prefix="kernel rays: ")
    rep.info["kernel_rays"] = [list(k) for k in kernel]
    return rep


def kernel_rays_factor(d: int, n: int) -> dict:
    """Which block of e-vectors spans the rays in the kernel of projection_plm(d, n)."""
    M = projection_plm(d, n)
    zero = {r for r in rays_plm(d, n) if M(r).is_zero()}
    last = {e_vec(d, n, d, k) for k in range(d + 2, n + 1)}
    first = {e_vec(d, n, 1, k) for k in range(d + 2, n + 1)}
    return {"last_block": zero == last, "first_block": zero == first}


def chain_check(d: int, n: int) -> Report:
    _check(d, n)
    rep = Report(f"check_chain d={d} n={n}")
    for k in range(d, 1, -1):
        nk = n - d + k
        M = projection_plm(k, nk)
        stage = check_projection_hypotheses(rays_plm(k, nk), rays_plm(k - 1, nk - 1), M)
        label = f"stage ({k},{nk}) -> ({k - 1},{nk - 1}): "
        rep.extend(stage, prefix=label)
        zero = {LatVec(v) for v in stage.info["kernel_rays"]}
        last = {e_vec(k, nk, k, j) for j in range(k + 2, nk + 1)}
        rep.add(label + "kernel rays are the last-block vectors e^d_k", zero == last,
                {"count": len(zero), "expected": nk - k - 1})
    terminal = (1, n - d + 1)
    rep.info["terminal_stage"] = list(terminal)
    rep.info["bound_met"] = terminal[1] >= LM_BOUND
    if d >= 2:
        rep.info["kernel_rays_in_block"] = kernel_rays_factor(d, n)
    return rep
