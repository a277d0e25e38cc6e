from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fmtoric.errors import PreconditionError
from fmtoric.lattice import (
    Covector,
    LatticeMap,
    LatVec,
    determinant,
    lattice_index,
    pair,
    primitive,
    saturated_span_check,
    smith_data,
    smith_normal_form,
)


@pytest.mark.parametrize("v, expected", [
    ((2, 4), (1, 2)),
    ((1, 0, 0), (1, 0, 0)),
    ((-3, 6, 9), (-1, 2, 3)),
])
def test_primitive(v, expected):
    assert primitive(v) == LatVec(expected)


def test_primitive_zero():
    with pytest.raises(PreconditionError, match="zero vector has no primitive generator"):
        primitive((0, 0))


nonzero_vecs = st.lists(st.integers(-50, 50), min_size=1, max_size=5).filter(any)


@given(nonzero_vecs)
def test_primitive_idempotent(v):
    p = primitive(v)
    assert primitive(p) == p
    # same ray: v is a positive multiple of p
    k = next(a // b for a, b in zip(v, p) if b)
    assert k > 0 and LatVec(v) == p * k


def test_vector_covector_separation():
    v = LatVec((1, 2))
    u = Covector((3, Fraction(1, 2)))
    assert pair(u, v) == 4
    with pytest.raises(TypeError):
        pair(v, v)
    with pytest.raises(TypeError):
        pair(u, u)
    assert v + v == LatVec((2, 4))


def test_smith_identity():
    sd = smith_data(LatticeMap.identity(2))
    assert sd.elementary_divisors == (1, 1)
    assert sd.kernel_basis == ()


def test_smith_projection():
    sd = smith_data(LatticeMap.from_rows([[1, 0]]))
    assert sd.elementary_divisors == (1,)
    assert [tuple(map(abs, v)) for v in sd.kernel_basis] == [(0, 1)]


def _hand_snf_2x2(a, b, c, d):
    # oracle: d1 = gcd of entries, d1*d2 = |det|
    from math import gcd
    g = gcd(gcd(a, b), gcd(c, d))
    det = abs(a * d - b * c)
    return (g, det // g) if g else (0, 0)


def test_smith_diag_2_3():
    sd = smith_data(LatticeMap.from_rows([[2, 0], [0, 3]]))
    assert sd.elementary_divisors == _hand_snf_2x2(2, 0, 0, 3) == (1, 6)


matrices = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 5).flatmap(
        lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=m, max_size=m)))


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_smith_properties(rows):
    M = LatticeMap.from_rows(rows)
    diag, U, V = smith_normal_form(rows)
    m, n = len(rows), len(rows[0])
    prod = [[sum(U[i][k] * rows[k][l] * V[l][j] for k in range(m) for l in range(n))
             for j in range(n)] for i in range(m)]
    for i in range(m):
        for j in range(n):
            assert prod[i][j] == (diag[i] if i == j and i < len(diag) else 0)
    assert abs(determinant(U)) == 1 and abs(determinant(V)) == 1
    for a, b in zip(diag, diag[1:]):
        assert b % a == 0
    sd = smith_data(M)
    assert len(sd.kernel_basis) == n - sd.rank
    for v in sd.kernel_basis:
        assert M(v).is_zero()
    if sd.kernel_basis:
        # saturated: the kernel basis has lattice index 1
        assert lattice_index(sd.kernel_basis) == 1


def test_saturated_span_examples():
    M = LatticeMap.from_rows([[1, 0]])
    assert saturated_span_check([(0, 1), (0, -1)], M)
    bad = saturated_span_check([(0, 2), (0, -2)], M)
    assert not bad
    assert not bad["vectors generate the kernel as a group"].passed
    assert bad["vectors sum to zero"].passed
    one = saturated_span_check([(0, 1)], M)
    assert not one["vectors sum to zero"].passed
    assert not one["vector count equals kernel rank + 1"].passed


def test_saturated_span_outside_kernel():
    with pytest.raises(PreconditionError, match=r"\(1, 1\)"):
        saturated_span_check([(1, 1)], LatticeMap.from_rows([[1, 0]]))


@given(st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=2, max_size=2))
def test_corank_one_pair_is_saturated(rows):
    M = LatticeMap.from_rows(rows)
    sd = smith_data(M)
    if len(sd.kernel_basis) != 1:
        return
    b = sd.kernel_basis[0]
    assert saturated_span_check([b, -b], M)


def test_lattice_map_rejects_bad_shape():
    with pytest.raises(PreconditionError):
        LatticeMap(((1, 0),), 3, 1)
    M = LatticeMap.from_rows([[1, 0, 0], [0, 1, 0]])
    assert M.is_surjective()
    assert not LatticeMap.from_rows([[2, 0]]).is_surjective()
