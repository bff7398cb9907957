"""Exact lattice geometry in the plane (and a little beyond).

Everything here works on plain tuples of Python ints, so results are exact
for arbitrarily large coordinates.  Angles never appear: the quantities the
trigonometric arguments care about are signed areas, i.e. 2x2 determinants.
"""
from __future__ import annotations

import enum
import itertools
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence, Tuple

IntVec = Tuple[int, ...]


class ContractError(ValueError):
    """Raised when an argument violates an operation's precondition."""


class DegenerateConeError(ContractError):
    pass


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def as_vec(v: Sequence[int]) -> IntVec:
    return tuple(int(c) for c in v)


def _check2(*vs: Sequence[int]) -> None:
    for v in vs:
        if len(v) != 2:
            raise ContractError(f"expected a 2-dimensional vector, got {tuple(v)!r}")


def det2(u: Sequence[int], v: Sequence[int]) -> int:
    """Signed area ``u1*v2 - u2*v1`` of the parallelogram spanned by u and v."""
    _check2(u, v)
    return u[0] * v[1] - u[1] * v[0]


def norm_sq(v: Sequence[int]) -> int:
    return sum(c * c for c in v)


def slope(v: Sequence[int]) -> Optional[Fraction]:
    """Slope q/p of (p, q); ``None`` stands for the vertical slope."""
    _check2(v)
    if v[0] == 0:
        if v[1] == 0:
            raise ContractError("the zero vector has no slope")
        return None
    return Fraction(v[1], v[0])


def slope_cmp(u: Sequence[int], v: Sequence[int]) -> Ordering:
    """Compare slope(u) with slope(v) for nonzero vectors of the first quadrant."""
    _check2(u, v)
    if not any(u) or not any(v):
        raise ContractError("slope_cmp needs nonzero vectors")
    d = det2(u, v)
    if d > 0:
        return Ordering.LESS
    if d < 0:
        return Ordering.GREATER
    return Ordering.EQUAL


def cramer_decompose(x: Sequence[int], a: Sequence[int], y: Sequence[int]) -> Tuple[int, int, int]:
    """Integer coefficients with ``c_x*x + c_y*y == c_a*a``.

    Requires slope(x) < slope(a) < slope(y).  The coefficients are the areas
    det(a, y), det(x, a) and det(x, y), all positive under that ordering.
    """
    _check2(x, a, y)
    for name, (p, q) in (("x, a", (x, a)), ("a, y", (a, y))):
        if not any(p) or not any(q) or det2(p, q) <= 0:
            raise ContractError(f"slope ordering violated for ({name}) = ({tuple(p)}, {tuple(q)})")
    return det2(a, y), det2(x, a), det2(x, y)


def projection_weight(v: Sequence[int], a: Sequence[int]) -> int:
    """|det(v, a)|: the length of a's component orthogonal to v, scaled by |v|."""
    _check2(v, a)
    if not any(v):
        raise ContractError("projection direction must be nonzero")
    return abs(det2(v, a))


def _in_cone(r1: IntVec, r2: IntVec, p: IntVec) -> bool:
    return det2(r1, p) >= 0 and det2(p, r2) >= 0


def hilbert_basis_2d(r1: Sequence[int], r2: Sequence[int]) -> list:
    """Hilbert basis of the lattice points of cone(r1, r2), sorted by slope.

    Candidates are the cone's lattice points in the bounding box of the
    fundamental parallelogram of the primitive ray generators; any candidate
    that is a sum of two nonzero cone points is dropped.
    """
    r1, r2 = as_vec(r1), as_vec(r2)
    _check2(r1, r2)
    if min(r1 + r2) < 0 or not any(r1) or not any(r2):
        raise ContractError("rays must be nonzero vectors of the first quadrant")
    d = det2(r1, r2)
    if d == 0:
        raise DegenerateConeError(f"rays {r1} and {r2} are colinear")
    if d < 0:
        r1, r2 = r2, r1
    p1, p2 = _primitive(r1), _primitive(r2)

    cands = {p1, p2}
    xs = (0, p1[0], p2[0], p1[0] + p2[0])
    ys = (0, p1[1], p2[1], p1[1] + p2[1])
    for p in itertools.product(range(min(xs), max(xs) + 1), range(min(ys), max(ys) + 1)):
        if any(p) and _in_cone(p1, p2, p):
            cands.add(p)
    # every cone point is a candidate plus an N-combination of p1, p2, so the
    # candidates generate; irreducibility is tested against candidates only
    basis = []
    for c in cands:
        reducible = any(
            b != c and _in_cone(p1, p2, (c[0] - b[0], c[1] - b[1])) and (c[0] - b[0], c[1] - b[1]) != (0, 0)
            for b in cands
        )
        if not reducible:
            basis.append(c)
    basis.sort(key=_slope_key)
    return basis


def _primitive(v: IntVec) -> IntVec:
    g = gcd(*v)
    return tuple(c // g for c in v)


def _slope_key(v: Sequence[int]):
    # vertical vectors sort last
    return (v[0] == 0, Fraction(v[1], v[0]) if v[0] else 0)
