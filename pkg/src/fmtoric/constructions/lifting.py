"""Lift a complete simplicial fan along a surjective lattice map.

Given the target fan, the map, a set ``gamma`` of primitive vectors whose images
span the target rays, and a set ``gamma_k`` of kernel vectors summing to zero
and generating the kernel, build a complete simplicial fan on gamma and
gamma_k whose cones map onto target cones.  Each construction stage carries
an ampleness certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import ConsistencyError, PreconditionError
from ..fan import (Fan, cone_mult, is_complete, maps_onto_cones, ray_preimage_is_cone_union, star_subdivision,
                   validate_fan, walls)
from ..intersection import (TorusDivisor, find_ample, is_ample, min_ample_multiplier, min_ample_twist,
                            pullback_along_refinement, pullback_divisor, wall_intersections)
from ..lattice import LatticeMap, LatVec, is_primitive, primitive, saturated_span_check
from ..report import Report


@dataclass(frozen=True)
class LiftInput:
    target_fan: Fan
    projection: LatticeMap
    gamma: tuple[LatVec, ...]
    gamma_k: tuple[LatVec, ...]

    def __post_init__(self):
        object.__setattr__(self, "gamma", tuple(LatVec(g) for g in self.gamma))
        object.__setattr__(self, "gamma_k", tuple(LatVec(a) for a in self.gamma_k))

    def validate(self) -> None:
        M, target = self.projection, self.target_fan
        if M.codomain_rank != target.rank:
            raise PreconditionError("projection codomain does not match the target fan")
        if not M.is_surjective():
            raise PreconditionError("projection is not surjective")
        if len(set(self.gamma)) != len(self.gamma):
            raise PreconditionError("gamma contains repeated vectors")
        for g in self.gamma:
            if len(g) != M.domain_rank:
                raise PreconditionError(f"gamma vector {tuple(g)} has the wrong length")
            if not is_primitive(g):
                raise PreconditionError(f"gamma vector {tuple(g)} is not primitive")
            if M(g).is_zero():
                raise PreconditionError(f"gamma vector {tuple(g)} lies in the kernel")
        for a in self.gamma_k:
            if len(a) != M.domain_rank or not M(a).is_zero():
                raise PreconditionError(f"kernel vector {tuple(a)} is not in the kernel")
        rep = saturated_span_check(self.gamma_k, M)
        if not rep.passed:
            failed = ", ".join(c.name for c in rep.failures())
            raise PreconditionError(f"gamma_k is not a saturated kernel frame: {failed}")
        images = {primitive(M(g)) for g in self.gamma}
        if images != set(target.rays):
            raise PreconditionError("primitive images of gamma are not exactly the target rays")
        if not validate_fan(target).valid or not is_complete(target):
            raise PreconditionError("target fan is not a complete simplicial fan")


@dataclass
class LiftResult:
    fan: Fan
    certificates: Report
    stages: list[Fan] = field(default_factory=list)
    ample: TorusDivisor | None = None


def _duplicates(M: LatticeMap, gamma) -> list[LatVec]:
    images: dict[LatVec, list[LatVec]] = {}
    for g in gamma:
        images.setdefault(primitive(M(g)), []).append(g)
    return [g for group in images.values() if len(group) > 1 for g in group]


def lift_order(inp: LiftInput) -> tuple[list[LatVec], list[LatVec]]:
    """Split gamma into the base set (distinct images) and the subdivision sequence."""
    base = list(inp.gamma)
    removed = []
    while True:
        dup = _duplicates(inp.projection, base)
        if not dup:
            break
        g = max(dup)
        base.remove(g)
        removed.append(g)
    return base, removed[::-1]


def base_lift(inp: LiftInput, base: list[LatVec]) -> Fan:
    """Cones of one lift of each maximal target cone together with gamma_k minus one vector."""
    M, target = inp.projection, inp.target_fan
    lift = {primitive(M(g)): g for g in base}
    rays = list(base) + list(inp.gamma_k)
    index = {r: i for i, r in enumerate(rays)}
    k_idx = [index[a] for a in inp.gamma_k]
    cones = []
    for c in target.max_cones:
        ys = [index[lift[target.rays[i]]] for i in c]
        for j in range(len(k_idx)):
            cones.append(ys + k_idx[:j] + k_idx[j + 1:])
    return Fan.make(rays, cones, rank=M.domain_rank)


def _stage_checks(rep: Report, label: str, fan: Fan, inp: LiftInput) -> None:
    v = validate_fan(fan)
    rep.add(f"{label}: fan is valid and simplicial", v.valid,
            [c.to_json_obj() for c in v.report.failures()] or None)
    rep.add(f"{label}: fan is complete", is_complete(fan))
    rep.add(f"{label}: cones map onto cones of the target", maps_onto_cones(inp.projection, fan, inp.target_fan).passed)
    for r in inp.target_fan.rays:
        pre = ray_preimage_is_cone_union(inp.projection, fan, r)
        rep.add(f"{label}: preimage of target ray {list(r)} is a union of cones", pre.passed,
                pre.checks[0].witness)


def classify_base_walls(fan: Fan, inp: LiftInput, pulled: TorusDivisor, base_ray: int) -> Report:
    """Sort the walls of the base lift into the four shapes and check each shape's intersection pattern.

    With y = lifted rays in the wall and a = kernel rays in the wall:
    shape 1: d-1 y's, all kernel rays but a_0;   D_0.C = 0 and the curve maps to a curve
    shape 2: d y's, missing a_0 and one a_j;      D_0.C = mult ratio, curve maps to a point
    shape 3: d-1 y's, a_0 present, missing a_j;   curve maps to a curve
    shape 4: d y's, a_0 present, missing a_j, a_l; D_0.C = D_j.C, curve maps to a point
    """
    rep = Report("base wall shapes")
    d = inp.target_fan.rank
    kernel = set(range(len(fan.rays) - len(inp.gamma_k), len(fan.rays)))
    a0 = base_ray
    counts = {1: 0, 2: 0, 3: 0, 4: 0}
    problems = []
    D0 = wall_intersections(fan, TorusDivisor.ray(len(fan.rays), a0))
    P = wall_intersections(fan, pulled)
    by_cone = {w.cone: w for w in D0}
    for tau, owners in sorted(walls(fan).items()):
        w = by_cone[tau]
        ys = [i for i in tau if i not in kernel]
        missing = sorted(kernel - set(tau))
        shape = None
        if len(ys) == d - 1 and missing == [a0]:
            shape = 1
            ok = D0[w] == 0 and P[w] > 0
        elif len(ys) == d and len(missing) == 2 and a0 in missing:
            shape = 2
            sigma = tuple(sorted(tau + (a0,)))
            ok = D0[w] == cone_mult(fan, tau) / cone_mult(fan, sigma) and P[w] == 0
        elif len(ys) == d - 1 and len(missing) == 1:
            shape = 3
            ok = P[w] > 0
        elif len(ys) == d and len(missing) == 2:
            shape = 4
            j = missing[0]
            Dj = wall_intersections(fan, TorusDivisor.ray(len(fan.rays), j))[w]
            ok = D0[w] == Dj and P[w] == 0
        else:
            ok = False
        if shape:
            counts[shape] += 1
        if not ok:
            problems.append({"wall": list(tau), "shape": shape})
    rep.add("every wall has one of the four shapes with the expected intersections", not problems,
            {"problems": problems[:5]} if problems else {"shape_counts": counts})
    return rep


def default_ample(target: Fan) -> TorusDivisor:
    A = find_ample(target)
    if A is None:
        raise PreconditionError("target fan is not projective")
    return A


def build_lifted_fan(inp: LiftInput, ample: TorusDivisor | None = None) -> LiftResult:
    inp.validate()
    M, target = inp.projection, inp.target_fan
    A = default_ample(target) if ample is None else TorusDivisor(tuple(ample))
    if not is_ample(target, A):
        raise PreconditionError("supplied target divisor is not ample")
    base, sequence = lift_order(inp)
    rep = Report("build_lifted_fan")
    fan = base_lift(inp, base)
    stages = [fan]
    _stage_checks(rep, "base stage", fan, inp)

    a0 = fan.ray_index[inp.gamma_k[0]]
    m = min_ample_multiplier(fan, M, target, A, a0)
    pulled = pullback_divisor(M, fan, target, A)
    current = TorusDivisor.ray(len(fan.rays), a0) + pulled.scale(m)
    rep.add("base stage: D_0 + m * pullback(A) is ample", is_ample(fan, current), {"m": m})
    rep.extend(classify_base_walls(fan, inp, pulled, a0), prefix="base stage: ")

    for step, g in enumerate(sequence, start=1):
        new = star_subdivision(fan, g)
        label = f"stage {step} (subdivide at {list(g)})"
        _stage_checks(rep, label, new, inp)
        pulled_prev = pullback_along_refinement(new, fan, current)
        E = TorusDivisor.ray(len(new.rays), new.ray_index[g])
        witness: dict = {}
        try:
            k = min_ample_twist(new, pulled_prev, E)
            current = pulled_prev.scale(k) + E.scale(-1)
            witness = {"k": k}
        except PreconditionError:
            found = find_ample(new)
            if found is None:
                raise ConsistencyError(f"no ample divisor after subdividing at {tuple(g)}")
            current = found
            witness = {"fallback": "support-function LP"}
        rep.add(f"{label}: k * pullback - E is ample", is_ample(new, current), witness)
        fan = new
        stages.append(fan)

    expected = set(inp.gamma) | set(inp.gamma_k)
    rep.add("rays are exactly gamma and gamma_k", set(fan.rays) == expected and len(fan.rays) == len(expected))
    return LiftResult(fan, rep, stages, current)
