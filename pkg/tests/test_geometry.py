import pytest
from hypothesis import given, settings, strategies as st

from monofact.geometry import (
    ContractError,
    DegenerateConeError,
    Ordering,
    cramer_decompose,
    det2,
    hilbert_basis_2d,
    projection_weight,
    slope_cmp,
)

from oracles import brute_hilbert, cone_points, naive_factorizations

vec = st.tuples(st.integers(0, 60), st.integers(0, 60))
nonzero = vec.filter(any)
positive = st.tuples(st.integers(1, 60), st.integers(1, 60))


@pytest.mark.parametrize("u,v,expected", [((1, 0), (0, 1), 1), ((2, 1), (1, 2), 3), ((3, 1), (6, 2), 0)])
def test_det2_examples(u, v, expected):
    assert det2(u, v) == expected


def test_det2_rejects_wrong_dimension():
    with pytest.raises(ContractError):
        det2((1, 2, 3), (1, 0))


@given(vec, vec)
def test_det2_antisymmetric(u, v):
    assert det2(u, v) == -det2(v, u)


@pytest.mark.parametrize(
    "u,v,expected",
    [((2, 1), (1, 2), Ordering.LESS), ((3, 6), (1, 2), Ordering.EQUAL), ((0, 1), (5, 1), Ordering.GREATER)],
)
def test_slope_cmp_examples(u, v, expected):
    assert slope_cmp(u, v) is expected


def test_slope_cmp_zero_vector():
    with pytest.raises(ContractError):
        slope_cmp((0, 0), (1, 1))


@given(positive, positive)
def test_slope_cmp_matches_fraction_order(u, v):
    from fractions import Fraction

    a, b = Fraction(u[1], u[0]), Fraction(v[1], v[0])
    expected = Ordering.LESS if a < b else Ordering.GREATER if a > b else Ordering.EQUAL
    assert slope_cmp(u, v) is expected
    assert (slope_cmp(u, v) is Ordering.LESS) == (det2(u, v) > 0)


@pytest.mark.parametrize(
    "x,a,y,expected",
    [
        ((1, 0), (1, 1), (0, 1), (1, 1, 1)),
        ((2, 1), (1, 1), (1, 2), (1, 1, 3)),
        ((3, 1), (2, 3), (1, 4), (5, 7, 11)),
    ],
)
def test_cramer_examples(x, a, y, expected):
    assert cramer_decompose(x, a, y) == expected


def test_cramer_names_bad_pair():
    with pytest.raises(ContractError, match=r"a, y"):
        cramer_decompose((3, 1), (1, 2), (2, 3))


@settings(max_examples=300)
@given(nonzero, nonzero, nonzero)
def test_cramer_identity(p, q, r):
    x, a, y = sorted((p, q, r), key=lambda v: (v[0] == 0, v[1] / v[0] if v[0] else 0))
    if not (det2(x, a) > 0 and det2(a, y) > 0):
        return
    cx, cy, ca = cramer_decompose(x, a, y)
    assert min(cx, cy, ca) >= 1
    assert tuple(cx * i + cy * j for i, j in zip(x, y)) == tuple(ca * k for k in a)


@pytest.mark.parametrize("n", [1, 2, 7, 100])
def test_projection_weight_unit_offset(n):
    assert projection_weight((1, 1), (n, n + 1)) == 1


def test_projection_weight_examples():
    assert projection_weight((1, 1), (2, 5)) == 3
    assert projection_weight((1, 2), (2, 4)) == 0


@given(nonzero, vec)
def test_projection_weight_zero_iff_on_ray(v, a):
    assert (projection_weight(v, a) == 0) == (det2(v, a) == 0)


@pytest.mark.parametrize(
    "r1,r2,expected",
    [
        ((1, 0), (0, 1), [(1, 0), (0, 1)]),
        ((1, 0), (1, 2), [(1, 0), (1, 1), (1, 2)]),
        ((1, 0), (1, 3), [(1, 0), (1, 1), (1, 2), (1, 3)]),
    ],
)
def test_hilbert_examples(r1, r2, expected):
    assert hilbert_basis_2d(r1, r2) == expected
    assert hilbert_basis_2d(r2, r1) == expected


def test_hilbert_colinear():
    with pytest.raises(DegenerateConeError):
        hilbert_basis_2d((1, 2), (2, 4))


@settings(max_examples=60, deadline=None)
@given(st.tuples(st.integers(0, 5), st.integers(0, 5)).filter(any), st.tuples(st.integers(0, 5), st.integers(0, 5)).filter(any))
def test_hilbert_against_exhaustive_oracle(r1, r2):
    if det2(r1, r2) == 0:
        return
    if det2(r1, r2) < 0:
        r1, r2 = r2, r1
    basis = hilbert_basis_2d(r1, r2)
    # summands are coordinatewise smaller, so irreducibility inside a box is exact
    top = max(max(b) for b in basis)
    assert set(basis) <= set(brute_hilbert(r1, r2, top))
    assert set(brute_hilbert(r1, r2, 10)) <= set(basis)
    for p in cone_points(r1, r2, 10):
        assert naive_factorizations(basis, p), p
