import random

import pytest
from hypothesis import given, settings, strategies as st

from fmtoric.constructions.plm import (base_fan, chain_check, check_projection_hypotheses, e_vec, fan_plm,
                                       kernel_rays_factor, plm_centers, plm_cone_count, projection_plm, rays_plm,
                                       rays_plm_count)
from fmtoric.constructions.standard import hexagon, p1
from fmtoric.errors import BudgetExceeded, PreconditionError
from fmtoric.fan import is_complete, validate_fan
from fmtoric.intersection import find_ample, is_ample
from fmtoric.lattice import LatticeMap, LatVec

IN_BUDGET = [(1, 4), (1, 5), (1, 6), (1, 7), (2, 5), (2, 6), (2, 7), (3, 6), (3, 7), (4, 7)]


def as_set(vectors):
    return {tuple(v) for v in vectors}


# --- rays ------------------------------------------------------------------------


def test_rays_d2_n5():
    assert as_set(rays_plm(2, 5)) == {(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1)}


def test_rays_d1_n5_are_hexagon():
    assert as_set(rays_plm(1, 5)) == as_set(hexagon().rays)


def test_rays_d2_n6_count():
    # d(n-d-1) + 2^(n-d-1) - 2 = 6 + 6
    assert len(rays_plm(2, 6)) == 12 == rays_plm_count(2, 6)


@pytest.mark.parametrize("d, n", [(d, n) for d in range(1, 5) for n in range(d + 3, d + 9)])
def test_ray_count_formula(d, n):
    assert len(rays_plm(d, n)) == rays_plm_count(d, n)


def test_rays_sorted():
    rays = rays_plm(3, 7)
    assert rays == sorted(rays)


def test_e_vec_last_index_is_minus_sum():
    assert e_vec(2, 6, 1, 6) == LatVec((-1, -1, 0, 0))
    assert e_vec(2, 6, 2, 4) == LatVec((0, 0, 1, 0))


@pytest.mark.parametrize("d, n", [(0, 4), (2, 4), (1, 3)])
def test_invalid_range(d, n):
    with pytest.raises(PreconditionError):
        rays_plm(d, n)


# --- fans ------------------------------------------------------------------------


def test_fan_d1_n5_is_hexagon():
    fan = fan_plm(1, 5)
    assert fan.same_as(hexagon())
    assert len(fan.max_cones) == 6


def test_fan_d2_n5():
    fan = fan_plm(2, 5)
    assert len(fan.rays) == 6 and len(fan.max_cones) == 6
    v = validate_fan(fan)
    assert v.valid and v.smooth and is_complete(fan)


def test_fan_d1_n4_is_p1():
    assert fan_plm(1, 4).same_as(p1())


@pytest.mark.parametrize("d, n", IN_BUDGET)
def test_fan_properties(d, n):
    fan = fan_plm(d, n)
    assert list(fan.rays) == rays_plm(d, n)
    v = validate_fan(fan) if d * (n - d - 2) <= 6 else None
    if v is not None:
        assert v.valid and v.smooth
    assert is_complete(fan)
    D = find_ample(fan)
    assert D is not None and is_ample(fan, D)


@pytest.mark.parametrize("d, n", IN_BUDGET)
def test_cone_count_prediction(d, n):
    fan = fan_plm(d, n)
    predicted = plm_cone_count(d, n)
    assert len(fan.max_cones) == predicted["max_cones"]
    assert len(fan.cones()) == predicted["cones"]


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded) as info:
        fan_plm(2, 9)
    assert info.value.predicted == 1639213


def test_budget_override():
    with pytest.raises(BudgetExceeded):
        fan_plm(2, 6, budget=100)
    assert len(fan_plm(2, 6, budget=169).max_cones) == 36


def test_base_fan_is_product_of_projective_spaces():
    fan = base_fan(2, 6)
    assert len(fan.rays) == 6 and len(fan.max_cones) == 9


def test_centers_ascend_in_dimension():
    dims = [h.dim for h in plm_centers(2, 7)]
    assert dims == sorted(dims)


def test_order_must_extend_dimension_order():
    centers = plm_centers(1, 6)
    with pytest.raises(PreconditionError):
        fan_plm(1, 6, order=centers[::-1])
    with pytest.raises(PreconditionError):
        fan_plm(1, 6, order=centers[:-1])


def shuffled_admissible(centers, rng):
    by_dim = {}
    for h in centers:
        by_dim.setdefault(h.dim, []).append(h)
    out = []
    for dim in sorted(by_dim):
        group = by_dim[dim][:]
        rng.shuffle(group)
        out += group
    return out


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_order_independence_sampled(seed):
    rng = random.Random(seed)
    reference = fan_plm(1, 7).to_json_obj()
    order = shuffled_admissible(plm_centers(1, 7), rng)
    assert fan_plm(1, 7, order=order).to_json_obj() == reference


# --- projections ------------------------------------------------------------------


def test_projection_d2_n5():
    M = projection_plm(2, 5)
    assert M.to_json_obj()["matrix"] == [[1, 0]]
    assert M((1, 0)) == LatVec((1,))
    assert M((1, 1)) == LatVec((1,))
    assert LatVec((1,)) in rays_plm(1, 4)


def test_projection_requires_d2():
    with pytest.raises(PreconditionError):
        projection_plm(1, 5)


def test_projection_hypotheses_d2_n5():
    rep = check_projection_hypotheses(rays_plm(2, 5), rays_plm(1, 4), projection_plm(2, 5))
    assert rep.passed
    assert as_set(rep.info["kernel_rays"]) == {(0, 1), (0, -1)}


def test_projection_hypotheses_d3_n12():
    rep = check_projection_hypotheses(rays_plm(3, 12), rays_plm(2, 11), projection_plm(3, 12))
    assert rep.passed
    assert as_set(rep.info["kernel_rays"]) == as_set(e_vec(3, 12, 3, k) for k in range(5, 13))


def test_projection_hypotheses_stray_image_fails():
    M = LatticeMap.from_rows([[2, 0]])
    rep = check_projection_hypotheses([(1, 0), (1, 1), (0, 1), (0, -1)], [(1,), (-1,)], M)
    assert not rep["projection is surjective"].passed
    M = LatticeMap.from_rows([[1, 1]])
    rep = check_projection_hypotheses([(1, 0), (0, 1), (-1, -1), (1, 1)], [(1,), (-1,)], M)
    assert not rep["kernel ray count equals rank drop + 1"].passed


def test_projection_hypotheses_uncovered_target_ray():
    rep = check_projection_hypotheses([(1, 0), (0, 1), (0, -1)], [(1,), (-1,)], LatticeMap.from_rows([[1, 0]]))
    assert not rep["target rays are exactly the images of source rays"].passed


@pytest.mark.parametrize("d, n", [(2, 5), (2, 7), (3, 8), (4, 9)])
def test_kernel_rays_are_last_block(d, n):
    assert kernel_rays_factor(d, n) == {"last_block": True, "first_block": False}


# --- chains -----------------------------------------------------------------------


@pytest.mark.parametrize("d, n", [(2, 11), (4, 13)])
def test_chain_check_passes(d, n):
    rep = chain_check(d, n)
    assert rep.passed
    assert rep.info["terminal_stage"] == [1, 10]
    assert rep.info["bound_met"] is True


def test_chain_check_bound_not_met():
    rep = chain_check(2, 10)
    assert rep.passed
    assert rep.info["terminal_stage"] == [1, 9]
    assert rep.info["bound_met"] is False


def test_chain_check_d1_has_no_stages():
    rep = chain_check(1, 10)
    assert rep.checks == [] and rep.info["terminal_stage"] == [1, 10]
