"""Simplicial rational fans.

A :class:`Fan` stores its maximal cones only, each as a sorted tuple of indices
into the ray list.  Faces of a simplicial cone are its generator subsets, so
the full cone poset is available on demand via :meth:`Fan.cones`.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations
from math import lcm
from typing import Iterable, Sequence

from .errors import NotSimplicialError, PreconditionError
from .lattice import LatticeMap, LatVec, inverse_q, is_primitive, primitive, rank_q, smith_normal_form, solve_q
from .lp import LinearProgram, OPTIMAL, solve
from .report import Report

Cone = tuple  # sorted tuple of ray indices; () is the zero cone


def _cone(indices: Iterable[int]) -> Cone:
    return tuple(sorted(indices))


@dataclass(frozen=True)
class Fan:
    rank: int
    rays: tuple[LatVec, ...]
    max_cones: tuple[Cone, ...]

    def __post_init__(self):
        if not isinstance(self.rank, int) or self.rank < 0:
            raise PreconditionError("fan rank must be a nonnegative integer")
        rays = tuple(LatVec(r) for r in self.rays)
        for r in rays:
            if len(r) != self.rank:
                raise PreconditionError(f"ray {tuple(r)} does not have length {self.rank}")
        cones = tuple(_cone(c) for c in self.max_cones)
        for c in cones:
            if len(set(c)) != len(c):
                raise PreconditionError(f"cone {c} repeats a ray index")
            if any(not isinstance(i, int) or i < 0 or i >= len(rays) for i in c):
                raise PreconditionError(f"cone {c} references a missing ray")
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "max_cones", cones)

    @classmethod
    def make(cls, rays: Sequence[Sequence[int]], cones: Iterable[Iterable[int]], rank: int | None = None) -> "Fan":
        rays = [LatVec(r) for r in rays]
        if rank is None:
            if not rays:
                raise PreconditionError("rank is required for a fan without rays")
            rank = len(rays[0])
        return cls(rank, tuple(rays), tuple(_cone(c) for c in cones))

    # -- derived data ----------------------------------------------------------

    def generators(self, cone: Cone) -> list[LatVec]:
        return [self.rays[i] for i in cone]

    @cached_property
    def ray_index(self) -> dict[LatVec, int]:
        return {r: i for i, r in enumerate(self.rays)}

    def cones(self) -> set[Cone]:
        """Every cone of the fan, faces and the zero cone included."""
        out: set[Cone] = set()
        for c in self.max_cones:
            for k in range(len(c) + 1):
                out.update(combinations(c, k))
        return out

    def is_pure_full_dimensional(self) -> bool:
        return all(len(c) == self.rank for c in self.max_cones)

    @cached_property
    def _dual_bases(self) -> dict[Cone, list[list[Fraction]]]:
        """For full-dimensional simplicial maximal cones: rows f_i with f_i(g_j) = delta_ij."""
        out = {}
        for c in self.max_cones:
            if len(c) != self.rank or self.rank == 0:
                continue
            G = [list(self.rays[i]) for i in c]
            try:
                inv = inverse_q(G)
            except PreconditionError:
                continue
            out[c] = [[inv[a][i] for a in range(self.rank)] for i in range(len(c))]
        return out

    @cached_property
    def _scaled_ray_coordinates(self) -> dict[Cone, list[tuple[int, ...]]]:
        """Per full-dimensional cone, coordinates of every ray in its dual basis times a positive integer."""
        out = {}
        for c, basis in self._dual_bases.items():
            scale = lcm(*(x.denominator for row in basis for x in row))
            rows = [[int(x * scale) for x in row] for row in basis]
            out[c] = [tuple(sum(f * x for f, x in zip(row, r)) for row in rows) for r in self.rays]
        return out

    def coefficients(self, cone: Cone, p: Sequence) -> list[Fraction] | None:
        """Coordinates of p in the generators of a simplicial cone; None if p is off its span."""
        basis = self._dual_bases.get(cone)
        if basis is not None:
            return [sum((f * x for f, x in zip(row, p)), Fraction(0)) for row in basis]
        gens = self.generators(cone)
        _require_simplicial(gens, cone)
        return _span_coords(gens, p)

    # -- canonical form and serialization -------------------------------------

    def canonical(self) -> "Fan":
        order = sorted(range(len(self.rays)), key=lambda i: tuple(self.rays[i]))
        new_index = {old: new for new, old in enumerate(order)}
        cones = sorted(_cone(new_index[i] for i in c) for c in self.max_cones)
        return Fan(self.rank, tuple(self.rays[i] for i in order), tuple(cones))

    def same_as(self, other: "Fan") -> bool:
        return self.canonical() == other.canonical()

    def to_json_obj(self) -> dict:
        f = self.canonical()
        return {"rank": f.rank, "rays": [list(r) for r in f.rays], "max_cones": [list(c) for c in f.max_cones]}

    @classmethod
    def from_json_obj(cls, obj) -> "Fan":
        if not isinstance(obj, dict) or not {"rank", "rays", "max_cones"} <= obj.keys():
            raise PreconditionError("fan object needs rank, rays and max_cones")
        try:
            return cls(obj["rank"], tuple(LatVec(r) for r in obj["rays"]),
                       tuple(tuple(c) for c in obj["max_cones"]))
        except TypeError as exc:
            raise PreconditionError(f"malformed fan object: {exc}") from exc


@dataclass(frozen=True)
class SupportSpec:
    """The region {x : x_i >= 0 for i in orthant_coords} (0-based indices)."""

    orthant_coords: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "orthant_coords", frozenset(self.orthant_coords))

    def contains(self, v: Sequence) -> bool:
        return all(v[i] >= 0 for i in self.orthant_coords)


# --- linear algebra on generators -------------------------------------------


@lru_cache(maxsize=None)
def _rank_of(gens: tuple) -> int:
    return rank_q([list(g) for g in gens]) if gens else 0


def _require_simplicial(gens, cone=None) -> None:
    if _rank_of(tuple(gens)) != len(gens):
        raise NotSimplicialError(f"cone {cone if cone is not None else gens} has linearly dependent generators")


def _span_coords(gens, p) -> list[Fraction] | None:
    if not gens:
        return [] if not any(p) else None
    A = [[g[i] for g in gens] for i in range(len(p))]
    return solve_q(A, p)


def generators_contain(gens: Sequence[Sequence[int]], p: Sequence) -> bool:
    """Is p a nonnegative rational combination of gens?  Decided by exact LP."""
    if not any(p):
        return True
    if not gens:
        return False
    gens = [tuple(g) for g in gens]
    if _rank_of(tuple(gens)) == len(gens):
        lam = _span_coords(gens, p)
        return lam is not None and all(x >= 0 for x in lam)
    k, n = len(gens), len(p)
    lp = LinearProgram(k, [0] * k, [], [], [[g[i] for g in gens] for i in range(n)], list(p))
    return solve(lp).status == OPTIMAL


def cone_mult(fan: Fan, cone: Cone) -> int:
    """Index of the group generated by the cone's rays in the saturation of their span."""
    gens = tuple(fan.rays[i] for i in cone)
    return generator_mult(gens)


@lru_cache(maxsize=None)
def generator_mult(gens: tuple) -> int:
    if not gens:
        return 1
    _require_simplicial(gens)
    diag, _, _ = smith_normal_form([list(g) for g in gens], len(gens[0]))
    out = 1
    for x in diag:
        out *= x
    return out


def cone_contains(fan: Fan, cone: Cone, p: Sequence) -> bool:
    if len(p) != fan.rank:
        raise PreconditionError(f"point must have length {fan.rank}")
    return generators_contain(fan.generators(cone), p)


# --- validation --------------------------------------------------------------


@dataclass
class FanValidation:
    report: Report
    smooth: bool

    @property
    def valid(self) -> bool:
        return self.report.passed

    def __bool__(self) -> bool:
        return self.valid


def _overlap_witness(fan: Fan, c1: Cone, c2: Cone):
    """A point of c1 ∩ c2 outside their common face, or None if there is none."""
    common = set(c1) & set(c2)
    own = [i for i in c1 if i not in common]
    if not own:
        return None
    # cheap certificate: sum of the dual functionals of the non-shared rays of one
    # cone is <= 0 on the other cone
    coords = fan._scaled_ray_coordinates
    for a_cone, b_cone in ((c1, c2), (c2, c1)):
        table = coords.get(a_cone)
        if table is None:
            continue
        pos = [a for a, i in enumerate(a_cone) if i not in common]
        if all(sum(table[j][a] for a in pos) <= 0 for j in b_cone):
            return None
    if c1 in coords and c2 in coords:
        # coordinates lambda of c1; membership in c2 is B2 G1 lambda >= 0.  A shared ray
        # has a unit coordinate row in c2, so its lambda can absorb that row: only the
        # non-shared rays of c1 and the non-shared rows of c2 remain.
        table = coords[c2]
        other_rows = [a for a, i in enumerate(c2) if i not in common]
        # single-row Farkas certificate: one coordinate of c2 is negative on all of them
        if any(all(table[g][row] < 0 for g in own) for row in other_rows):
            return None
        lp = LinearProgram(len(own))
        for row in other_rows:
            lp.le([-table[g][row] for g in own], 0)
        lp.eq([1] * len(own), 1)
        res = solve(lp)
        if res.status != OPTIMAL:
            return None
        # lift back: take the shared coordinates just large enough for c2
        point = [sum((l * fan.rays[g][r] for l, g in zip(res.x, own)), Fraction(0)) for r in range(fan.rank)]
        c2_coords = fan.coefficients(c2, point)
        for a, i in enumerate(c2):
            if i in common and c2_coords[a] < 0:
                point = [x - c2_coords[a] * y for x, y in zip(point, fan.rays[i])]
        return tuple(point)
    g1, g2 = fan.generators(c1), fan.generators(c2)
    k1, k2 = len(g1), len(g2)
    A_eq = [[g[r] for g in g1] + [-g[r] for g in g2] for r in range(fan.rank)]
    A_eq.append([int(i in own) for i in c1] + [0] * k2)
    lp = LinearProgram(k1 + k2, [0] * (k1 + k2), [], [], A_eq, [0] * fan.rank + [1])
    res = solve(lp)
    if res.status != OPTIMAL:
        return None
    lam = res.x[:k1]
    return tuple(sum((l * g[r] for l, g in zip(lam, g1)), Fraction(0)) for r in range(fan.rank))


def validate_fan(fan: Fan) -> FanValidation:
    rep = Report("validate_fan")
    bad = [tuple(r) for r in fan.rays if not is_primitive(r)]
    rep.add("rays are primitive", not bad, {"non_primitive": bad} if bad else None)
    dup = sorted({tuple(r) for r in fan.rays if list(fan.rays).count(r) > 1})
    rep.add("rays are distinct", not dup, {"repeated": dup} if dup else None)
    non_simplicial = [c for c in fan.max_cones if _rank_of(tuple(fan.generators(c))) != len(c)]
    rep.add("maximal cones are simplicial", not non_simplicial,
            {"cones": non_simplicial} if non_simplicial else None)
    cone_set = set(fan.max_cones)
    nested = [(a, b) for a in cone_set for b in cone_set if a != b and set(a) <= set(b)]
    rep.add("no maximal cone is a face of another", not nested and len(cone_set) == len(fan.max_cones),
            {"pairs": sorted(nested)} if nested else None)
    overlap = None
    if not non_simplicial and not dup:
        cones = list(fan.max_cones)
        for a in range(len(cones)):
            for b in range(a + 1, len(cones)):
                # a point outside the common face has a positive non-shared coefficient
                # in both cones, so one direction suffices
                w = _overlap_witness(fan, cones[a], cones[b])
                if w is not None:
                    overlap = {"cones": [list(cones[a]), list(cones[b])], "point": list(w)}
                    break
            if overlap:
                break
        rep.add("cone intersections are common faces", overlap is None, overlap)
    else:
        rep.add("cone intersections are common faces", False, "skipped: cones not simplicial or rays repeated")
    smooth = not non_simplicial and all(cone_mult(fan, c) == 1 for c in fan.max_cones)
    return FanValidation(rep, smooth)


def is_smooth(fan: Fan) -> bool:
    return all(cone_mult(fan, c) == 1 for c in fan.max_cones)


# --- completeness and support ------------------------------------------------


def walls(fan: Fan) -> dict[Cone, list[int]]:
    """Codimension-one faces of maximal cones mapped to the maximal cones containing them."""
    out: dict[Cone, list[int]] = defaultdict(list)
    for k, c in enumerate(fan.max_cones):
        for i in range(len(c)):
            out[c[:i] + c[i + 1:]].append(k)
    return dict(out)


def _connected(n: int, edges: Iterable[tuple[int, int]]) -> bool:
    if n == 0:
        return False
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        parent[find(a)] = find(b)
    return len({find(x) for x in range(n)}) == 1


def _require_pure(fan: Fan) -> None:
    if not fan.is_pure_full_dimensional():
        raise PreconditionError("fan is not pure full-dimensional")
    for c in fan.max_cones:
        _require_simplicial(fan.generators(c), c)


def is_complete(fan: Fan) -> bool:
    if fan.rank == 0:
        return fan.max_cones == ((),)
    _require_pure(fan)
    w = walls(fan)
    if any(len(v) != 2 for v in w.values()):
        return False
    return _connected(len(fan.max_cones), (tuple(v) for v in w.values()))


def support_report(fan: Fan, spec: SupportSpec) -> Report:
    """Does |fan| equal the region described by spec?  Failures name the offending cone or wall."""
    rep = Report("support_equals")
    if any(i < 0 or i >= fan.rank for i in spec.orthant_coords):
        raise PreconditionError("support region references a coordinate outside the fan's rank")
    _require_pure(fan)
    outside = next((c for c in fan.max_cones if not all(spec.contains(fan.rays[i]) for i in c)), None)
    rep.add("maximal cones lie in the region", outside is None,
            {"cone": list(outside), "rays": [list(fan.rays[i]) for i in outside]} if outside else None)
    w = walls(fan)
    stray = None
    for wall, owners in sorted(w.items()):
        if len(owners) == 2:
            continue
        if len(owners) == 1 and any(all(fan.rays[r][i] == 0 for r in wall) for i in spec.orthant_coords):
            continue
        stray = {"wall": list(wall), "owners": owners}
        break
    rep.add("each wall is interior or on the region boundary", stray is None, stray)
    rep.add("wall adjacency is connected",
            _connected(len(fan.max_cones), (tuple(v) for v in w.values() if len(v) == 2)))
    return rep


def support_equals(fan: Fan, spec: SupportSpec) -> bool:
    return support_report(fan, spec).passed


# --- star subdivision ----------------------------------------------------------


def _replace_star(fan: Fan, v: LatVec, tau: Iterable[int], containing: Iterable[Cone]) -> Fan:
    tau = set(tau)
    containing = set(containing)
    new = len(fan.rays)
    cones = []
    for c in fan.max_cones:
        if c not in containing:
            cones.append(c)
            continue
        for rho in c:
            if rho in tau:
                cones.append(_cone([i for i in c if i != rho] + [new]))
    return Fan(fan.rank, fan.rays + (v,), tuple(cones))


def star_subdivision(fan: Fan, v: Sequence[int]) -> Fan:
    v = LatVec(v)
    if len(v) != fan.rank:
        raise PreconditionError(f"subdivision vector must have length {fan.rank}")
    if not is_primitive(v):
        raise PreconditionError(f"subdivision vector {tuple(v)} is not primitive")
    if v in fan.ray_index:
        return fan
    tau = None
    containing = []
    for c in fan.max_cones:
        lam = fan.coefficients(c, v)
        if lam is None or any(x < 0 for x in lam):
            continue
        support = {i for i, x in zip(c, lam) if x > 0}
        if tau is None:
            tau = support
        elif tau != support:
            raise PreconditionError("vector lies in cones whose minimal faces disagree; fan is not valid")
        containing.append(c)
    if tau is None:
        raise PreconditionError(f"vector {tuple(v)} is outside the support of the fan")
    return _replace_star(fan, v, tau, containing)


def star_subdivide_cone(fan: Fan, tau: Iterable[int]) -> Fan:
    """Star subdivision at the primitive barycenter of the cone ``tau`` of the fan."""
    tau = _cone(tau)
    if len(tau) == 1:
        return fan
    if not tau:
        raise PreconditionError("cannot subdivide the zero cone")
    total = [sum(fan.rays[i][k] for i in tau) for k in range(fan.rank)]
    v = primitive(total)
    if v in fan.ray_index:
        raise PreconditionError(f"barycenter {tuple(v)} is already a ray")
    containing = [c for c in fan.max_cones if set(tau) <= set(c)]
    if not containing:
        raise PreconditionError(f"{tau} is not a cone of the fan")
    return _replace_star(fan, v, tau, containing)


# --- fan morphisms -------------------------------------------------------------


def _minimal_target_cone(target: Fan, p: Sequence) -> Cone | None:
    """The cone of target containing p in its relative interior, or None if p is outside |target|."""
    if not any(p):
        return ()
    for c in target.max_cones:
        lam = target.coefficients(c, p)
        if lam is not None and all(x >= 0 for x in lam):
            return _cone(i for i, x in zip(c, lam) if x > 0)
    return None


def image_cone(M: LatticeMap, source: Fan, cone: Cone, target: Fan) -> Cone | None:
    """The cone of target equal to M(cone), or None if the image is not a cone of target."""
    images = [M(source.rays[i]) for i in cone]
    images = [g for g in images if not g.is_zero()]
    total = [sum(g[k] for g in images) for k in range(M.codomain_rank)]
    cand = _minimal_target_cone(target, total)
    if cand is None:
        return None
    cand_gens = target.generators(cand)
    if not all(generators_contain(cand_gens, g) for g in images):
        return None
    if not all(generators_contain(images, g) for g in cand_gens):
        return None
    return cand


def maps_onto_cones(M: LatticeMap, source: Fan, target: Fan) -> Report:
    if M.domain_rank != source.rank or M.codomain_rank != target.rank:
        raise PreconditionError("lattice map ranks do not match the fans")
    rep = Report("maps_onto_cones")
    mapping = []
    failure = None
    for c in sorted(source.cones(), key=lambda c: (len(c), c)):
        t = image_cone(M, source, c, target)
        if t is None:
            failure = {"cone": list(c), "image_generators": [list(M(source.rays[i])) for i in c]}
            break
        mapping.append([list(c), list(t)])
    rep.add("every cone maps onto a cone of the target", failure is None,
            failure if failure else {"cones_checked": len(mapping)})
    if failure is None:
        rep.info["mapping"] = mapping
    return rep


def _on_ray(img: Sequence[int], ray: Sequence[int]) -> bool:
    """Is img a nonnegative multiple of ray?"""
    k = next((i for i, x in enumerate(ray) if x), None)
    if k is None:
        return not any(img)
    t = Fraction(img[k], ray[k])
    return t >= 0 and all(a == t * b for a, b in zip(img, ray))


def ray_preimage_is_cone_union(M: LatticeMap, source: Fan, target_ray: Sequence[int]) -> Report:
    """Is M^{-1}(ray) ∩ |source| the union of the cones whose generators all map into the ray?"""
    ray = LatVec(target_ray)
    if not is_primitive(ray):
        raise PreconditionError(f"target ray {tuple(ray)} is not primitive")
    rep = Report("ray_preimage_is_cone_union")
    failure = None
    for c in source.max_cones:
        gens = source.generators(c)
        imgs = [M(g) for g in gens]
        inside = [_on_ray(im, ray) for im in imgs]
        if all(inside):
            continue
        k = len(gens)
        # variables: lambda_1..lambda_k >= 0, s >= 0 with M(sum lambda g) = s * ray
        A_eq = [[im[r] for im in imgs] + [-ray[r]] for r in range(M.codomain_rank)]
        A_eq.append([0 if ins else 1 for ins in inside] + [0])
        lp = LinearProgram(k + 1, [0] * (k + 1), [], [], A_eq, [0] * M.codomain_rank + [1])
        res = solve(lp)
        if res.status == OPTIMAL:
            lam = res.x[:k]
            point = [sum((l * g[r] for l, g in zip(lam, gens)), Fraction(0)) for r in range(source.rank)]
            failure = {"cone": list(c), "point": point}
            break
    rep.add(f"preimage of ray {list(ray)} is a union of cones", failure is None, failure)
    return rep


def cone_projection_meets_interior(M: LatticeMap, generators: Sequence[Sequence[int]], spec: SupportSpec) -> bool:
    """Does the image cone of ``generators`` under M meet the interior of the orthant described by spec?"""
    coords = sorted(spec.orthant_coords)
    if not coords:
        raise PreconditionError("support region has no orthant coordinates")
    if any(i < 0 or i >= M.codomain_rank for i in coords):
        raise PreconditionError("support region references a coordinate outside the target rank")
    imgs = [M(g) for g in generators]
    k = len(imgs)
    if k == 0:
        return False
    # maximize s subject to (sum lambda img)_i >= s, s <= 1, 0 <= lambda <= 1
    lp = LinearProgram(k + 1, [0] * k + [1])
    for i in coords:
        lp.le([-im[i] for im in imgs] + [1], 0)
    lp.le([0] * k + [1], 1)
    for j in range(k):
        lp.le([int(a == j) for a in range(k)] + [0], 1)
    res = solve(lp)
    return res.status == OPTIMAL and res.value > 0
