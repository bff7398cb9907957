"""Factorizations, sets of lengths and generalized lengths.

An atom list is any sequence of nonzero vectors of a common dimension; a
factorization of ``x`` is an exponent tuple ``c`` with ``sum(c[i]*atoms[i]) == x``.
Non-members simply have no factorizations.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .geometry import ContractError, IntVec, as_vec, det2, norm_sq

Factorization = Tuple[int, ...]
LengthSet = Tuple[int, ...]


class DomainError(ValueError):
    """The element is outside the domain of the invariant (zero or non-member)."""


def _prepare(atoms: Sequence[Sequence[int]], x: Sequence[int]):
    atoms = [as_vec(a) for a in atoms]
    x = as_vec(x)
    d = len(x)
    for a in atoms:
        if len(a) != d:
            raise ContractError(f"atom {a} has dimension {len(a)}, element {x} has {d}")
        if not any(a) or min(a) < 0:
            raise ContractError(f"atoms must be nonzero vectors of N^d, got {a}")
    if min(x, default=0) < 0:
        raise ContractError(f"element {x} has a negative coordinate")
    return atoms, x


class _Search:
    """Backtracking over exponents with exact feasibility pruning.

    Only atoms that fit under ``x`` coordinatewise can appear.  Coordinates
    where ``x`` vanishes are dropped; when two coordinates remain the atoms
    are processed by increasing slope and each exponent is restricted to the
    interval keeping the remainder inside the cone of the atoms still to
    come.  Otherwise a coordinate-support test and a memo of dead states
    prune the tree.
    """

    def __init__(self, atoms: List[IntVec], x: IntVec):
        self.k = len(atoms)
        self.x = x
        keep = [j for j, c in enumerate(x) if c > 0]
        idx = [i for i, a in enumerate(atoms) if all(aj <= xj for aj, xj in zip(a, x))]
        self.vecs = [tuple(atoms[i][j] for j in keep) for i in idx]
        self.idx = idx
        self.target = tuple(x[j] for j in keep)
        self.planar = len(keep) == 2
        if self.planar:
            order = sorted(range(len(idx)), key=lambda t: _slope_key(self.vecs[t]))
            self.vecs = [self.vecs[t] for t in order]
            self.idx = [idx[t] for t in order]
        else:
            # suffix supports: which coordinates the remaining atoms can still fill
            n = len(self.vecs)
            self.support = [frozenset()] * (n + 1)
            for t in range(n - 1, -1, -1):
                self.support[t] = self.support[t + 1] | {j for j, c in enumerate(self.vecs[t]) if c}
            self.dead = set()

    def run(self) -> Iterator[Factorization]:
        exps = [0] * len(self.vecs)
        if not any(self.target):
            yield (0,) * self.k
            return
        if not self.vecs:
            return
        rec = self._planar if self.planar else self._general
        for _ in rec(0, self.target, exps):
            out = [0] * self.k
            for t, c in enumerate(exps):
                out[self.idx[t]] = c
            yield tuple(out)

    def _bound(self, a, r) -> int:
        return min(rj // aj for aj, rj in zip(a, r) if aj)

    def _planar(self, t, r, exps):
        a = self.vecs[t]
        last = len(self.vecs) - 1
        if t == last:
            if det2(a, r) == 0:
                j = 0 if a[0] else 1
                c, rem = divmod(r[j], a[j])
                if rem == 0 and c * a[1 - j] == r[1 - j]:
                    exps[t] = c
                    yield True
                    exps[t] = 0
            return
        lo_v, hi_v = self.vecs[t + 1], self.vecs[last]
        lo, hi = 0, self._bound(a, r)
        # remainder must satisfy det(lo_v, r') >= 0 and det(r', hi_v) >= 0
        A, B = det2(lo_v, r), det2(lo_v, a)
        if B < 0:
            lo = max(lo, -(A // -B) if A < 0 else 0)
        elif A < 0:
            return
        C, D = det2(r, hi_v), det2(a, hi_v)
        if D > 0:
            hi = min(hi, C // D) if C >= 0 else -1
        elif C < 0:
            return
        for c in range(lo, hi + 1):
            exps[t] = c
            yield from self._planar(t + 1, (r[0] - c * a[0], r[1] - c * a[1]), exps)
        exps[t] = 0

    def _general(self, t, r, exps):
        if not any(r):
            yield True
            return
        if t == len(self.vecs):
            return
        key = (t, r)
        if key in self.dead:
            return
        if any(rj and j not in self.support[t] for j, rj in enumerate(r)):
            self.dead.add(key)
            return
        a = self.vecs[t]
        found = False
        for c in range(self._bound(a, r), -1, -1):
            exps[t] = c
            for hit in self._general(t + 1, tuple(rj - c * aj for rj, aj in zip(r, a)), exps):
                found = True
                yield hit
        exps[t] = 0
        if not found:
            self.dead.add(key)


def _slope_key(v):
    return (v[0] == 0, Fraction(v[1], v[0]) if v[0] else 0)


def factorizations(atoms: Sequence[Sequence[int]], x: Sequence[int]) -> List[Factorization]:
    """All factorizations of x, as exponent tuples in lexicographic order."""
    atoms, x = _prepare(atoms, x)
    return sorted(_Search(atoms, x).run())


def find_factorization(atoms: Sequence[Sequence[int]], x: Sequence[int]) -> Optional[Factorization]:
    atoms, x = _prepare(atoms, x)
    return next(iter(_Search(atoms, x).run()), None)


def is_member(atoms: Sequence[Sequence[int]], x: Sequence[int]) -> bool:
    return find_factorization(atoms, x) is not None


def length_set(atoms: Sequence[Sequence[int]], x: Sequence[int]) -> LengthSet:
    atoms, x = _prepare(atoms, x)
    return tuple(sorted({sum(z) for z in _Search(atoms, x).run()}))


def elasticity_of_element(atoms: Sequence[Sequence[int]], x: Sequence[int]) -> Fraction:
    if not any(as_vec(x)):
        raise DomainError("elasticity is undefined at 0")
    lengths = length_set(atoms, x)
    if not lengths:
        raise DomainError(f"{tuple(x)} is not in the monoid")
    return Fraction(lengths[-1], lengths[0])


def lattice_points(dim: int, norm_sq_bound: int) -> List[IntVec]:
    """Points of N^dim with squared norm at most the bound, in canonical order."""
    r = isqrt(max(norm_sq_bound, 0))
    pts = []

    def rec(prefix, budget):
        if len(prefix) == dim:
            pts.append(tuple(prefix))
            return
        for c in range(isqrt(budget) + 1):
            prefix.append(c)
            rec(prefix, budget - c * c)
            prefix.pop()

    if norm_sq_bound >= 0 and r >= 0:
        rec([], norm_sq_bound)
    pts.sort(key=lambda p: (norm_sq(p), p))
    return pts


def system_sample(atoms: Sequence[Sequence[int]], norm_sq_bound: int, jobs: int = 1) -> Dict[IntVec, LengthSet]:
    """L(x) for every member x with squared norm <= bound.

    Sets of lengths are built by dynamic programming in canonical order
    (``x - a`` always precedes ``x``), with lengths packed into int bitsets.
    With ``jobs > 1`` each point is instead solved independently in a process
    pool; the result is identical.
    """
    atoms = [as_vec(a) for a in atoms]
    if not atoms:
        return {}
    dim = len(atoms[0])
    pts = lattice_points(dim, norm_sq_bound)
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            sets = list(pool.map(length_set, itertools.repeat(atoms), pts, chunksize=64))
        return {p: s for p, s in zip(pts, sets) if s}
    bits: Dict[IntVec, int] = {}
    out = {}
    for p in pts:
        if not any(p):
            b = 1
        else:
            b = 0
            for a in atoms:
                q = tuple(pj - aj for pj, aj in zip(p, a))
                if min(q) >= 0:
                    b |= bits.get(q, 0) << 1
        if b:
            bits[p] = b
            out[p] = _bits_to_set(b)
    return out


def _bits_to_set(b: int) -> LengthSet:
    out = []
    i = 0
    while b:
        if b & 1:
            out.append(i)
        b >>= 1
        i += 1
    return tuple(out)


# -- generalized lengths over distinguished generators of a submonoid of N --


@dataclass(frozen=True)
class GenLengthSet:
    values: Tuple[int, ...]
    generators: Tuple[int, ...]


def _check_gens(gens: Sequence[int]) -> Tuple[int, ...]:
    gens = tuple(sorted(int(g) for g in gens))
    if not gens or gens[0] <= 0 or len(set(gens)) != len(gens):
        raise ContractError(f"distinguished generators must be distinct positive integers, got {gens}")
    return gens


def generalized_length_set(gens: Sequence[int], x: int) -> GenLengthSet:
    gens = _check_gens(gens)
    x = int(x)
    if x <= 0:
        raise ContractError("x must be a positive integer")
    bits = [0] * (x + 1)
    bits[0] = 1
    for v in range(1, x + 1):
        b = 0
        for g in gens:
            if g > v:
                break
            b |= bits[v - g] << 1
        bits[v] = b
    return GenLengthSet(_bits_to_set(bits[x]), gens)


def _min_max_tables(gens: Tuple[int, ...], x_max: int):
    INF = None
    lo: List[Optional[int]] = [INF] * (x_max + 1)
    hi: List[Optional[int]] = [INF] * (x_max + 1)
    lo[0] = hi[0] = 0
    for v in range(1, x_max + 1):
        for g in gens:
            if g > v:
                break
            if lo[v - g] is not None:
                cand_lo, cand_hi = lo[v - g] + 1, hi[v - g] + 1
                if lo[v] is None or cand_lo < lo[v]:
                    lo[v] = cand_lo
                if hi[v] is None or cand_hi > hi[v]:
                    hi[v] = cand_hi
    return lo, hi


@dataclass(frozen=True)
class GenElasticityScan:
    generators: Tuple[int, ...]
    values: Tuple[Tuple[int, Fraction], ...]
    max_observed: Fraction
    bound: Fraction
    tail_mean_gap: Fraction

    @property
    def within_bound(self) -> bool:
        return self.max_observed <= self.bound


def generalized_elasticity_scan(gens: Sequence[int], x_max: int) -> GenElasticityScan:
    """rho_g(x) for every representable 0 < x <= x_max.

    ``tail_mean_gap`` is the mean of ``bound - rho_g(x)`` over the representable
    x in the last window of width n_1*n_k below x_max.
    """
    gens = _check_gens(gens)
    if len(gens) < 2 or x_max < gens[-1]:
        raise ContractError("need at least two generators and x_max >= largest generator")
    lo, hi = _min_max_tables(gens, x_max)
    values = tuple((x, Fraction(hi[x], lo[x])) for x in range(1, x_max + 1) if lo[x] is not None)
    bound = Fraction(gens[-1], gens[0])
    width = gens[0] * gens[-1]
    tail = [bound - r for x, r in values if x > x_max - width]
    gap = sum(tail, Fraction(0)) / len(tail) if tail else Fraction(0)
    return GenElasticityScan(gens, values, max(r for _, r in values), bound, gap)


@dataclass(frozen=True)
class AffineCheck:
    generators: Tuple[int, ...]
    period: int
    threshold: int
    # residue -> (max L_g(x) - m*n_k, min L_g(x) - m*n_1), constant for x >= threshold
    offsets: Dict[int, Tuple[int, int]]
    holds: bool
    windows_checked: int


def check_eventual_affine(gens: Sequence[int], x_max: int) -> AffineCheck:
    """Check that max/min generalized lengths become affine along x + m*n_1*n_k.

    Past ``threshold = (k-1) * n_k**2`` an extreme-length representation
    contains at least n_k copies of n_1 (max) and n_1 copies of n_k (min), so
    adding the period shifts max by n_k and min by n_1.
    """
    gens = _check_gens(gens)
    n1, nk, k = gens[0], gens[-1], len(gens)
    period = n1 * nk
    threshold = max((k - 1) * nk * nk, 1)
    lo, hi = _min_max_tables(gens, x_max)
    offsets: Dict[int, Tuple[int, int]] = {}
    holds = True
    checked = 0
    for x in range(threshold, x_max + 1):
        r, m = x % period, x // period
        if lo[x] is None:
            # representability is also periodic past the threshold
            if x - period >= threshold and lo[x - period] is not None:
                holds = False
            continue
        pair = (hi[x] - m * nk, lo[x] - m * n1)
        checked += 1
        if r in offsets and offsets[r] != pair:
            holds = False
        offsets.setdefault(r, pair)
    return AffineCheck(gens, period, threshold, offsets, holds, checked)
