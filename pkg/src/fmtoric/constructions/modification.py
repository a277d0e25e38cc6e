"""The blowup fan of A^m x P^n at a torus-fixed point and the P^n-bundle fan over Bl_0 A^m.

Both fans live in R^m x R^n and share the ray order
x_1..x_m, y_0..y_n, w = x + y, where x = x_1 + ... + x_m and
y = y_1 + ... + y_n, y_0 = -y.
"""

from __future__ import annotations

from ..errors import PreconditionError
from ..fan import Fan, SupportSpec, cone_projection_meets_interior, support_report, validate_fan
from ..lattice import LatticeMap
from ..report import Report


def _check(m: int, n: int) -> None:
    if m < 2:
        raise PreconditionError("the base dimension m must be at least 2 (for m = 1, x equals x_1)")
    if n < 1:
        raise PreconditionError("the fiber dimension n must be at least 1")


def _rays(m: int, n: int) -> list[list[int]]:
    dim = m + n
    xs = [[int(k == i) for k in range(dim)] for i in range(m)]
    y0 = [0] * m + [-1] * n
    ys = [[int(k == m + j) for k in range(dim)] for j in range(n)]
    w = [1] * dim
    return xs + [y0] + ys + [w]


class _Index:
    def __init__(self, m: int, n: int):
        self.x = list(range(m))
        self.y = list(range(m, m + n + 1))  # y_0 .. y_n
        self.w = m + n + 1


def blowup_fan(m: int, n: int) -> Fan:
    _check(m, n)
    ix = _Index(m, n)
    ys = ix.y[1:]
    cones = []
    for i in range(m):
        cones.append([x for x in ix.x if x != ix.x[i]] + ys + [ix.w])
    for j in range(1, n + 1):
        cones.append(ix.x + [y for y in ys if y != ix.y[j]] + [ix.w])
    for j in range(1, n + 1):
        cones.append(ix.x + [ix.y[0]] + [y for y in ys if y != ix.y[j]])
    return Fan.make(_rays(m, n), cones)


def bundle_fan(m: int, n: int) -> Fan:
    _check(m, n)
    ix = _Index(m, n)
    cones = []
    for i in range(m):
        for j in range(n + 1):
            cones.append([x for x in ix.x if x != ix.x[i]] + [y for y in ix.y if y != ix.y[j]] + [ix.w])
    return Fan.make(_rays(m, n), cones)


def base_projection(m: int, n: int) -> LatticeMap:
    return LatticeMap.from_rows([[int(k == i) for k in range(m + n)] for i in range(m)])


def check_small_modification(m: int, n: int, fan_b: Fan | None = None, fan_p: Fan | None = None) -> Report:
    """Certify that the two fans differ only in cones lying over the interior of the base orthant."""
    _check(m, n)
    fan_b = blowup_fan(m, n) if fan_b is None else fan_b
    fan_p = bundle_fan(m, n) if fan_p is None else fan_p
    rep = Report(f"check_sqm m={m} n={n}")
    for name, f in (("blowup fan", fan_b), ("bundle fan", fan_p)):
        rep.add(f"{name} is a valid simplicial fan", validate_fan(f).valid)
    rays_b, rays_p = set(fan_b.rays), set(fan_p.rays)
    rep.add("ray sets are equal", rays_b == rays_p,
            {"only_blowup": sorted(map(list, rays_b - rays_p)), "only_bundle": sorted(map(list, rays_p - rays_b))}
            if rays_b != rays_p else {"rays": len(rays_b)})

    # compare cones as sets of ray vectors, independent of index order
    def as_sets(f: Fan, cones):
        return {frozenset(f.rays[i] for i in c) for c in cones}

    all_b, all_p = as_sets(fan_b, fan_b.cones()), as_sets(fan_p, fan_p.cones())
    max_b, max_p = as_sets(fan_b, fan_b.max_cones), as_sets(fan_p, fan_p.max_cones)
    divergent = all_b ^ all_p
    M = base_projection(m, n)
    spec = SupportSpec(range(m))
    bad = [sorted(map(list, c)) for c in divergent if not cone_projection_meets_interior(M, list(c), spec)]
    rep.add("divergent cones project into the interior of the base orthant", not bad,
            {"failing": bad[:5]} if bad else {"divergent_max_cones": len(max_b ^ max_p),
                                              "divergent_cones": len(divergent)})
    ray_w = tuple([1] * (m + n))
    ray_x = {tuple(int(k == i) for k in range(m + n)) for i in range(m)}
    boundary = [c for c in all_b | all_p if ray_w not in {tuple(v) for v in c}
                and not ray_x <= {tuple(v) for v in c}]
    missing = [sorted(map(list, c)) for c in boundary if not (c in all_b and c in all_p)]
    rep.add("cones avoiding w and not containing every x_i lie in both fans", not missing,
            {"failing": missing[:5]} if missing else {"checked": len(boundary)})
    for name, f in (("blowup fan", fan_b), ("bundle fan", fan_p)):
        sup = support_report(f, spec)
        rep.add(f"{name} has support equal to the base orthant times R^{n}", sup.passed,
                [c.to_json_obj() for c in sup.failures()] or None)
    rep.info["divergent_max_cones"] = sorted(sorted(map(list, c)) for c in max_b ^ max_p)
    return rep
