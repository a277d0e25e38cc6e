import pytest
from hypothesis import given, settings, strategies as st

from fmtoric.constructions.modification import blowup_fan
from fmtoric.constructions.standard import (affine_space, blowup_point_p2, catalog, hexagon, p1, p1_x_p1,
                                            projective_space, twisted_prism)
from fmtoric.errors import PreconditionError
from fmtoric.fan import (Fan, SupportSpec, cone_contains, cone_mult, cone_projection_meets_interior, is_complete,
                         is_smooth, maps_onto_cones, ray_preimage_is_cone_union, star_subdivide_cone,
                         star_subdivision, support_equals, support_report, validate_fan, walls)
from fmtoric.lattice import LatticeMap, LatVec, primitive

FIRST = LatticeMap.from_rows([[1, 0]])


def single_cone_fan(rays, rank=None):
    return Fan.make(rays, [range(len(rays))], rank=rank)


# --- cone_mult / cone_contains ---------------------------------------------------


@pytest.mark.parametrize("rays, expected", [
    ([(1, 0), (0, 1)], 1),
    ([(1, 0), (1, 2)], 2),
    ([(1, 0, 0), (1, 2, 0), (0, 0, 1)], 2),
    ([(1, 1, 0), (1, -1, 0)], 2),
])
def test_cone_mult(rays, expected):
    fan = single_cone_fan(rays)
    assert cone_mult(fan, fan.max_cones[0]) == expected


def test_cone_mult_zero_cone():
    assert cone_mult(projective_space(2), ()) == 1


def test_cone_mult_rejects_dependent_generators():
    fan = Fan(2, (LatVec((1, 0)), LatVec((0, 1)), LatVec((1, 1))), ((0, 1, 2),))
    with pytest.raises(PreconditionError):
        cone_mult(fan, (0, 1, 2))


@pytest.mark.parametrize("rays, point, expected", [
    ([(1, 0), (0, 1)], (1, 1), True),
    ([(1, 0), (0, 1)], (1, -1), False),
    ([(1, 0, 0), (1, 2, 0)], (1, 1, 1), False),
    ([(1, 0, 0), (1, 2, 0)], (1, 1, 0), True),
    ([(1, 0), (0, 1)], (0, 0), True),
])
def test_cone_contains(rays, point, expected):
    fan = single_cone_fan(rays, rank=len(rays[0]))
    assert cone_contains(fan, fan.max_cones[0], point) is expected


def test_smooth_faces_have_multiplicity_one():
    fan = projective_space(3)
    for c in fan.cones():
        assert cone_mult(fan, c) == 1


# --- validate_fan -----------------------------------------------------------------


def test_p2_valid_and_smooth():
    v = validate_fan(projective_space(2))
    assert v.valid and v.smooth


def test_overlapping_cones_invalid():
    fan = Fan.make([(1, 0), (1, 2), (1, 1), (0, 1)], [(0, 1), (2, 3)])
    v = validate_fan(fan)
    assert not v.valid
    failed = v.report["cone intersections are common faces"]
    assert not failed.passed
    assert failed.witness["point"] == [1, 1]


def test_non_primitive_ray_invalid():
    fan = Fan.make([(2, 4), (0, 1)], [(0, 1)])
    v = validate_fan(fan)
    assert not v.report["rays are primitive"].passed
    assert not v.valid


def test_non_simplicial_cone_invalid():
    fan = Fan.make([(1, 0), (0, 1), (1, 1)], [(0, 1, 2)])
    assert not validate_fan(fan).report["maximal cones are simplicial"].passed


def test_cone_face_of_other_invalid():
    fan = Fan.make([(1, 0), (0, 1)], [(0, 1), (0,)])
    assert not validate_fan(fan).report["no maximal cone is a face of another"].passed


def test_weighted_projective_plane_valid_not_smooth():
    fan = catalog()["P(1,1,2)"]
    v = validate_fan(fan)
    assert v.valid and not v.smooth
    assert not is_smooth(fan)


@pytest.mark.parametrize("name", sorted(catalog()))
def test_catalog_fans_valid_and_complete(name):
    fan = catalog()[name]
    assert validate_fan(fan).valid
    assert is_complete(fan)


# --- completeness and support --------------------------------------------------------


def test_completeness_examples():
    assert is_complete(projective_space(2))
    assert not is_complete(affine_space(2))
    assert is_complete(hexagon())
    assert is_complete(twisted_prism())


def test_complete_requires_pure_fan():
    fan = Fan.make([(1, 0), (0, 1), (-1, -1)], [(0, 1), (2,)])
    with pytest.raises(PreconditionError):
        is_complete(fan)


def test_p2_walls_each_shared_twice():
    w = walls(projective_space(2))
    assert sorted(w) == [(0,), (1,), (2,)]
    assert all(len(owners) == 2 for owners in w.values())


def test_support_equals_examples():
    assert support_equals(affine_space(2), SupportSpec((0, 1)))
    assert support_equals(blowup_fan(2, 1), SupportSpec((0, 1)))
    assert not support_equals(p1(), SupportSpec((0,)))


def test_support_report_names_offending_cone():
    rep = support_report(p1(), SupportSpec((0,)))
    failed = rep["maximal cones lie in the region"]
    assert not failed.passed
    assert failed.witness["cone"] == [1]


def test_support_missing_cone_fails():
    # the positive quadrant with one of the two cones of its subdivision removed
    fan = Fan.make([(1, 0), (1, 1), (0, 1)], [(0, 1)])
    assert not support_equals(fan, SupportSpec((0, 1)))


def test_whole_space_support():
    assert support_equals(projective_space(2), SupportSpec(()))


# --- star subdivision -------------------------------------------------------------


def test_subdivide_single_cone():
    fan = star_subdivision(affine_space(2), (1, 1))
    assert fan.canonical().to_json_obj() == {"rank": 2, "rays": [[0, 1], [1, 0], [1, 1]],
                                             "max_cones": [[0, 2], [1, 2]]}


def test_subdivide_p2_gives_blowup():
    fan = star_subdivision(projective_space(2), (1, 1))
    assert fan.same_as(blowup_point_p2())


def test_subdivide_at_existing_ray_is_identity():
    fan = projective_space(2)
    assert star_subdivision(fan, (1, 0)) == fan


def test_subdivide_rejects_non_primitive():
    with pytest.raises(PreconditionError):
        star_subdivision(projective_space(2), (2, 2))


def test_subdivide_rejects_outside_support():
    with pytest.raises(PreconditionError):
        star_subdivision(affine_space(2), (-1, 1))


def test_subdivide_on_wall():
    # v on the wall between two cones replaces both
    fan = star_subdivision(p1_x_p1(), (1, 0))
    assert fan == p1_x_p1()
    fan = star_subdivision(hexagon(), (2, 1))
    assert len(fan.max_cones) == 7 and validate_fan(fan).valid and is_complete(fan)


def test_star_subdivide_cone_uses_barycenter():
    fan = star_subdivide_cone(projective_space(3), (0, 1, 2))
    assert LatVec((1, 1, 1)) in fan.rays
    assert len(fan.max_cones) == 6


complete_fans = st.sampled_from(sorted(catalog().items()) + [("prism", twisted_prism())])
small_vectors = st.lists(st.integers(-3, 3), min_size=3, max_size=3)


@settings(max_examples=60, deadline=None)
@given(complete_fans, small_vectors)
def test_star_subdivision_properties(named, coords):
    _, fan = named
    coords = coords[:fan.rank]
    if not any(coords):
        return
    v = primitive(coords)
    new = star_subdivision(fan, v)
    v_old = validate_fan(fan)
    v_new = validate_fan(new)
    assert v_new.valid == v_old.valid
    assert is_complete(new)
    expected = set(fan.rays) | {v}
    assert set(new.rays) == expected and len(new.rays) == len(expected)
    assert star_subdivision(new, v).same_as(new)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 4), min_size=2, max_size=2).filter(any))
def test_star_subdivision_preserves_orthant_support(coords):
    v = primitive(coords)
    fan = star_subdivision(affine_space(2), v)
    assert support_equals(fan, SupportSpec((0, 1)))


# --- fan morphisms --------------------------------------------------------------


def test_maps_onto_cones_examples():
    assert maps_onto_cones(FIRST, p1_x_p1(), p1())
    blown = star_subdivision(p1_x_p1(), (1, 1))
    assert maps_onto_cones(FIRST, blown, p1())
    rep = maps_onto_cones(FIRST, projective_space(2), p1())
    assert not rep
    assert rep.checks[0].witness["cone"] == [0, 2]


def test_ray_preimage_examples():
    assert ray_preimage_is_cone_union(FIRST, p1_x_p1(), (1,))
    assert not ray_preimage_is_cone_union(FIRST, blowup_point_p2(), (1,))
    # nothing but the origin maps into the ray (0, 1) under the first projection of P^1
    to_plane = LatticeMap.from_rows([[1], [0]])
    assert ray_preimage_is_cone_union(to_plane, p1(), (0, 1))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(1, 1), (1, -1), (-1, 1), (-1, -1), (1, 2), (2, -1), (-1, 3)]),
       st.sampled_from([(1, 1), (-1, -2), (1, -1)]))
def test_maps_onto_cones_implies_ray_images(v1, v2):
    fan = star_subdivision(star_subdivision(p1_x_p1(), v1), v2)
    rep = maps_onto_cones(FIRST, fan, p1())
    if rep:
        for r in fan.rays:
            img = FIRST(r)
            assert img.is_zero() or primitive(img) in p1().rays


def test_cone_projection_meets_interior_examples():
    to_base = LatticeMap.from_rows([[1, 0, 0], [0, 1, 0]])
    orthant = SupportSpec((0, 1))
    assert cone_projection_meets_interior(to_base, [(1, 0, 0), (0, 1, 0), (1, 1, 1)], orthant)
    assert not cone_projection_meets_interior(to_base, [(0, 0, -1), (0, 0, 1)], orthant)
    assert not cone_projection_meets_interior(to_base, [(1, 0, 0)], orthant)


def test_cone_projection_requires_nonempty_orthant():
    with pytest.raises(PreconditionError):
        cone_projection_meets_interior(FIRST, [(1, 0)], SupportSpec(()))


# --- serialization --------------------------------------------------------------


def test_canonical_serialization_sorted():
    obj = hexagon().to_json_obj()
    assert obj["rays"] == sorted(obj["rays"])
    assert obj["max_cones"] == sorted(obj["max_cones"])
    assert all(c == sorted(c) for c in obj["max_cones"])


@pytest.mark.parametrize("name", sorted(catalog()))
def test_json_round_trip(name):
    fan = catalog()[name]
    back = Fan.from_json_obj(fan.to_json_obj())
    assert back.to_json_obj() == fan.to_json_obj()
    assert back.same_as(fan)


def test_from_json_rejects_bad_index():
    with pytest.raises(PreconditionError):
        Fan.from_json_obj({"rank": 1, "rays": [[1]], "max_cones": [[3]]})
