"""Small named fans used as building blocks and test fixtures."""

from __future__ import annotations

from itertools import combinations

from ..errors import PreconditionError
from ..fan import Fan


def _unit(n: int, i: int) -> list[int]:
    return [int(k == i) for k in range(n)]


def projective_space(r: int) -> Fan:
    """Rays e_1..e_r and -(e_1+...+e_r); maximal cones omit one ray each."""
    if r < 1:
        raise PreconditionError("projective space needs positive dimension")
    rays = [_unit(r, i) for i in range(r)] + [[-1] * r]
    return Fan.make(rays, combinations(range(r + 1), r))


def affine_space(m: int) -> Fan:
    if m < 1:
        raise PreconditionError("affine space needs positive dimension")
    return Fan.make([_unit(m, i) for i in range(m)], [range(m)])


def product(first: Fan, second: Fan) -> Fan:
    """Rays of ``first`` (padded with zeros) followed by those of ``second``."""
    r1, r2 = first.rank, second.rank
    rays = [list(r) + [0] * r2 for r in first.rays] + [[0] * r1 + list(r) for r in second.rays]
    off = len(first.rays)
    cones = [c1 + tuple(off + i for i in c2) for c1 in first.max_cones for c2 in second.max_cones]
    return Fan(r1 + r2, tuple(map(tuple, rays)), tuple(cones))


def blowup_affine_origin(m: int) -> Fan:
    """Rays e_1..e_m and x = e_1+...+e_m; cones replace one e_i by x."""
    if m < 1:
        raise PreconditionError("affine space needs positive dimension")
    rays = [_unit(m, i) for i in range(m)] + [[1] * m]
    return Fan.make(rays, [[j for j in range(m) if j != i] + [m] for i in range(m)])


def p1() -> Fan:
    return projective_space(1)


def p1_x_p1() -> Fan:
    return product(p1(), p1())


def blowup_point_p2() -> Fan:
    """Rays e1, e2, e1+e2, -e1-e2; the exceptional ray is index 2."""
    return Fan.make([(1, 0), (0, 1), (1, 1), (-1, -1)], [(0, 2), (2, 1), (1, 3), (3, 0)])


def hexagon() -> Fan:
    """The toric del Pezzo surface of degree 6."""
    rays = [(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)]
    return Fan.make(rays, [(i, (i + 1) % 6) for i in range(6)])


def hirzebruch(a: int) -> Fan:
    rays = [(1, 0), (0, 1), (-1, a), (0, -1)]
    return Fan.make(rays, [(i, (i + 1) % 4) for i in range(4)])


def weighted_p112() -> Fan:
    """Weighted projective plane P(1,1,2); the cone of rays 0 and 1 has multiplicity 2."""
    return Fan.make([(-1, -2), (1, 0), (0, 1)], [(0, 1), (1, 2), (0, 2)])


def twisted_prism() -> Fan:
    """A complete simplicial 3-dimensional fan with no strictly convex support function.

    Rays a_i = (p_i, 1) and b_i = (p_i, -1) over the triangle p = (1,0), (0,1),
    (-1,-1); each side quad is split along the diagonal a_i b_{i+1}.  The
    relation a_i + b_{i+1} = a_{i+1} + b_i on each quad makes the three
    convexity inequalities telescope to 0 > 0.
    """
    p = [(1, 0), (0, 1), (-1, -1)]
    rays = [(x, y, 1) for x, y in p] + [(x, y, -1) for x, y in p]
    a = [0, 1, 2]
    b = [3, 4, 5]
    cones = [a, b]
    for i in range(3):
        j = (i + 1) % 3
        cones.append([a[i], a[j], b[j]])
        cones.append([a[i], b[i], b[j]])
    return Fan.make(rays, cones)


def catalog() -> dict[str, Fan]:
    """Complete projective fans of small rank."""
    return {
        "P1": p1(),
        "P2": projective_space(2),
        "P3": projective_space(3),
        "P1xP1": p1_x_p1(),
        "Bl_pt_P2": blowup_point_p2(),
        "hexagon": hexagon(),
        "F1": hirzebruch(1),
        "F2": hirzebruch(2),
        "F3": hirzebruch(3),
        "P(1,1,2)": weighted_p112(),
        "P2xP1": product(projective_space(2), p1()),
        "P1xP1xP1": product(p1_x_p1(), p1()),
    }
