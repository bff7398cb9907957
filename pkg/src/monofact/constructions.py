"""Finite truncations of monoids whose systems of sets of lengths are full.

Every finite set S in P_fin is realized as L(x) in some submonoid of N.
Copies of those submonoids are laid along rays of slowly converging slopes,
each rescaled so that its atoms are longer than everything in earlier blocks.
Builds are verified by exhaustive factorization before they are returned.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

from .elasticity import ResourceError, _cone_coords
from .factorization import find_factorization, length_set
from .geometry import ContractError, IntVec, as_vec, det2, norm_sq
from .lp import rank
from .monoid import AtomSequence, MonoidSpec, atoms_of, canonical, primitive

FiniteSet = Tuple[int, ...]


# -- P_fin --


def iter_pfin() -> Iterator[FiniteSet]:
    """{0}, {1}, then finite subsets of Z>=2 by (max, size, lex)."""
    yield (0,)
    yield (1,)
    for top in itertools.count(2):
        below = range(2, top)
        for size in range(0, top - 1):
            for rest in itertools.combinations(below, size):
                yield rest + (top,)


def enumerate_pfin(m: int) -> List[FiniteSet]:
    if m < 1:
        raise ContractError("m must be >= 1")
    return list(itertools.islice(iter_pfin(), m))


def _check_pfin(S) -> FiniteSet:
    S = tuple(sorted(set(int(s) for s in S)))
    if S in ((0,), (1,)):
        return S
    if not S or S[0] < 2:
        raise ContractError(f"{set(S) or '{}'} is not in P_fin: sets other than {{0}}, {{1}} must lie in Z>=2")
    return S


# -- realizing a single length set --


@dataclass(frozen=True)
class Realization:
    generators: Tuple[int, ...]
    element: int
    target: FiniteSet


def _length_bits(gens: Sequence[int], x_max: int) -> List[int]:
    bits = [0] * (x_max + 1)
    bits[0] = 1
    for x in range(1, x_max + 1):
        b = 0
        for g in gens:
            if g <= x:
                b |= bits[x - g] << 1
        bits[x] = b
    return bits


def _minimal(gens: Tuple[int, ...]) -> bool:
    # no generator is a sum of the smaller ones
    for i, g in enumerate(gens):
        reach = [True] + [False] * g
        for v in range(1, g + 1):
            reach[v] = any(reach[v - h] for h in gens[:i] if h <= v)
        if reach[g]:
            return False
    return True


def realize_length_set(S, max_generator: int = 40) -> Realization:
    """Smallest (generators, element) found by deepening the largest generator B.

    For each B, generator sets G in [2, B] containing B are tried by (size,
    lex) and elements x <= B * max(S) in increasing order; the first x with
    L(x) = S is returned.
    """
    S = _check_pfin(S)
    if S == (0,):
        return Realization((2,), 0, S)
    if S == (1,):
        return Realization((2,), 2, S)
    target = sum(1 << s for s in S)
    for B in range(2, max_generator + 1):
        x_max = B * S[-1]
        for size in range(0, B - 1):
            for rest in itertools.combinations(range(2, B), size):
                gens = rest + (B,)
                if not _minimal(gens):
                    continue
                bits = _length_bits(gens, x_max)
                for x in range(1, x_max + 1):
                    if bits[x] == target:
                        return Realization(gens, x, S)
    raise ResourceError(f"no realization of {set(S)} with generators <= {max_generator}")


# -- slope profiles --


@dataclass(frozen=True)
class Profile:
    kind: str  # "two-limit" or "one-limit"
    low: Fraction = Fraction(1)
    high: Fraction = Fraction(2)

    def __post_init__(self):
        if self.kind not in ("two-limit", "one-limit"):
            raise ContractError(f"unknown profile {self.kind!r}")
        if self.low <= 0 or (self.kind == "two-limit" and self.low >= self.high):
            raise ContractError("need 0 < low < high")

    def slope(self, n: int) -> Fraction:
        lo, hi = self.low, self.high
        if self.kind == "one-limit":
            return lo + Fraction(1, n + 1)
        if n % 2:
            return lo + (hi - lo) / (2 * (n + 1))
        return hi - (hi - lo) / (n + 2)

    def direction(self, n: int) -> IntVec:
        s = self.slope(n)
        return (s.denominator, s.numerator)

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "low": _q(self.low), "high": _q(self.high)}

    @classmethod
    def from_dict(cls, doc) -> "Profile":
        return cls(doc["kind"], Fraction(doc["low"]), Fraction(doc["high"]))


def _q(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def slope_family(profile: Profile) -> MonoidSpec:
    """The direction vectors of a profile, written as an atom family.

    Only the default profiles (low 1, high 2) have closed forms here.
    """
    if (profile.low, profile.high) != (1, 2):
        raise ContractError("slope_family is available for the default profiles only")
    if profile.kind == "one-limit":
        return MonoidSpec.family([], [AtomSequence((1, 2), (1, 1), (0, 0))])
    # n = 2k - 1 has slope 1 + 1/(4k); n = 2k has slope (4k + 3)/(2k + 2)
    return MonoidSpec.family([], [AtomSequence((0, 1), (4, 4), (0, 0)), AtomSequence((2, 3), (2, 4), (0, 0))])


# -- full-system builds --


@dataclass(frozen=True)
class Block:
    target: FiniteSet
    generators: Tuple[int, ...]  # realization in N
    element: int
    direction: IntVec
    scale: int

    @property
    def atoms(self) -> Tuple[IntVec, ...]:
        return tuple(tuple(self.scale * g * c for c in self.direction) for g in self.generators)

    @property
    def x(self) -> IntVec:
        return tuple(self.scale * self.element * c for c in self.direction)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "set": list(self.target),
            "generators": list(self.generators),
            "element": self.element,
            "direction": list(self.direction),
            "scale": self.scale,
            "x": list(self.x),
        }


@dataclass(frozen=True)
class FullSystemBuild:
    profile: Profile
    blocks: Tuple[Block, ...]
    verified: bool = False
    notes: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def monoid(self) -> MonoidSpec:
        return MonoidSpec.finite(canonical(a for b in self.blocks for a in b.atoms))

    @property
    def targets(self) -> List[Tuple[IntVec, FiniteSet]]:
        return [(b.x, b.target) for b in self.blocks]

    @property
    def scales(self) -> List[int]:
        return [b.scale for b in self.blocks]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "profile": self.profile.to_dict(),
            "blocks": [b.to_dict() for b in self.blocks],
            "verified": self.verified,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_dict(cls, doc) -> "FullSystemBuild":
        try:
            blocks = tuple(
                Block(tuple(b["set"]), tuple(b["generators"]), int(b["element"]), as_vec(b["direction"]), int(b["scale"]))
                for b in doc["blocks"]
            )
            return cls(Profile.from_dict(doc["profile"]), blocks, False)
        except (KeyError, TypeError, ValueError) as exc:
            raise ContractError(f"malformed build manifest: {exc}") from None

    @classmethod
    def loads(cls, text: str) -> "FullSystemBuild":
        return cls.from_dict(json.loads(text))


def _min_scale(block_min_sq: int, floor_sq: int) -> int:
    """Least lam >= 1 with lam^2 * block_min_sq > floor_sq."""
    lam = max(1, math.isqrt(floor_sq // block_min_sq))
    while lam > 1 and (lam - 1) ** 2 * block_min_sq > floor_sq:
        lam -= 1
    while lam * lam * block_min_sq <= floor_sq:
        lam += 1
    return lam


class BuildVerificationError(AssertionError):
    pass


def verify_build(build: FullSystemBuild) -> List[str]:
    """Re-check every invariant of a build; returns a list of failures."""
    problems = []
    blocks = build.blocks
    for i in range(len(blocks) - 1):
        prev, nxt = blocks[i], blocks[i + 1]
        floor = max([norm_sq(prev.x)] + [norm_sq(a) for a in prev.atoms])
        if min(norm_sq(a) for a in nxt.atoms) <= floor:
            problems.append(f"block {i + 2}: rescaling inequality fails")
    atoms = build.monoid.generators
    if tuple(atoms_of(atoms)) != tuple(atoms):
        problems.append("some generator of the union is not an atom")
    for n, b in enumerate(blocks, 1):
        # L over the block's own scaled copy must match the realization in N
        own = length_set([(b.scale * g,) for g in b.generators], (b.scale * b.element,))
        if own != length_set([(g,) for g in b.generators], (b.element,)):
            problems.append(f"block {n}: scaling changed a set of lengths")
        got = length_set(atoms, b.x)
        if got != b.target:
            problems.append(f"block {n}: L(x_{n}) = {list(got)} but expected {list(b.target)}")
        for a in dividing_atoms(atoms, b.x):
            if det2(a, b.x) != 0:
                problems.append(f"block {n}: atom {a} divides x_{n} off its ray")
    return problems


def dividing_atoms(atoms: Sequence[IntVec], x: IntVec) -> List[IntVec]:
    out = []
    for a in atoms:
        r = tuple(xj - aj for xj, aj in zip(x, a))
        if min(r) >= 0 and find_factorization(atoms, r) is not None:
            out.append(a)
    return out


def build_full_system(m: int, profile: Profile | str = "two-limit", retries: int = 8) -> FullSystemBuild:
    """Realize the first m sets of P_fin on separate rays and verify the union."""
    if m < 1:
        raise ContractError("m must be >= 1")
    if isinstance(profile, str):
        profile = Profile(profile)
    blocks: List[Block] = []
    floor_sq = 0
    for n, S in enumerate(enumerate_pfin(m), 1):
        r = realize_length_set(S)
        a = profile.direction(n)
        base_min = min(r.generators) ** 2 * norm_sq(a)
        lam = _min_scale(base_min, floor_sq) if blocks else 1
        for attempt in range(retries + 1):
            block = Block(S, r.generators, r.element, a, lam)
            trial = FullSystemBuild(profile, tuple(blocks) + (block,))
            problems = verify_build(trial)
            if not problems:
                break
            lam *= 2
        else:
            raise BuildVerificationError(f"block {n} still fails after {retries} rescalings: {problems[0]}")
        blocks.append(block)
        floor_sq = max([norm_sq(block.x)] + [norm_sq(v) for v in block.atoms])
    return FullSystemBuild(profile, tuple(blocks), True)


def reverify(build: FullSystemBuild) -> FullSystemBuild:
    problems = verify_build(build)
    if problems:
        raise BuildVerificationError(problems[0])
    return FullSystemBuild(build.profile, build.blocks, True)


def realized_elasticities(build: FullSystemBuild) -> List[Fraction]:
    """max S / min S for each nonzero target set of a build, sorted and deduplicated."""
    return sorted({Fraction(b.target[-1], b.target[0]) for b in build.blocks if b.target != (0,)})


# -- higher rank --


def lift_rank(build, d: int, ray_multiples: Sequence[int] = (1,)) -> MonoidSpec:
    """Embed a rank-2 monoid in N^d and add generators along e_3, ..., e_d.

    ``ray_multiples`` lists the multiples of each new unit vector used as
    generators; the default gives plain unit vectors.
    """
    if d < 3:
        raise ContractError("lift_rank needs d >= 3")
    spec = build.monoid if isinstance(build, FullSystemBuild) else build
    if spec.is_family or spec.dim != 2:
        raise ContractError("lift_rank takes a rank-2 finite spec or build")
    mults = sorted(set(int(k) for k in ray_multiples))
    if not mults or mults[0] < 1:
        raise ContractError("ray multiples must be positive")
    gens = [tuple(g) + (0,) * (d - 2) for g in spec.generators]
    for i in range(2, d):
        for k in mults:
            e = [0] * d
            e[i] = k
            gens.append(tuple(e))
    return MonoidSpec.finite(canonical(gens))


def embed(x: Sequence[int], d: int) -> IntVec:
    return tuple(x) + (0,) * (d - len(x))


# -- primary monoids --


@dataclass(frozen=True)
class PrimaryReport:
    primary: bool
    explanation: str
    witness: Optional[Any] = None


def _slope(v) -> Tuple[bool, Fraction]:
    return (v[0] == 0, Fraction(v[1], v[0]) if v[0] else Fraction(0))


def is_primary_family(spec: MonoidSpec) -> PrimaryReport:
    """Rank-2: primary iff no atom attains the infimum or supremum of the atom slopes."""
    if spec.dim == 1:
        return PrimaryReport(True, "every nontrivial submonoid of N is primary")
    if not spec.is_family:
        return _finite_not_primary(spec)
    if spec.dim != 2:
        raise ContractError("is_primary_family handles rank-2 families")
    # candidates: (slope key, attained?, atom)
    cands = [(_slope(a), True, a) for a in spec.finite_atoms]
    for s in spec.sequences:
        first, nxt = s(s.n_start), s(s.n_start + 1)
        d = det2(first, nxt)
        lead = _slope(s.leading)
        if d == 0:
            cands.append((_slope(first), True, first))
        else:
            cands.append((_slope(first), True, first))
            cands.append((lead, False, None))
    lo = min(c[0] for c in cands)
    hi = max(c[0] for c in cands)
    for bound, name in ((lo, "infimum"), (hi, "supremum")):
        hit = next((c[2] for c in cands if c[0] == bound and c[1]), None)
        if hit is not None:
            return PrimaryReport(False, f"atom {hit} attains the slope {name}", hit)
    return PrimaryReport(True, f"slope infimum {_fmt(lo)} and supremum {_fmt(hi)} are not attained")


def _fmt(key) -> str:
    return "infinity" if key[0] else _q(key[1])


def _finite_not_primary(spec: MonoidSpec) -> PrimaryReport:
    gens = list(spec.generators)
    d = spec.dim
    for j in range(d):
        zero = [g for g in gens if g[j] == 0]
        if zero and len(zero) < len(gens):
            return PrimaryReport(
                False,
                f"elements with coordinate {j + 1} equal to 0 form a proper divisor-closed submonoid",
                {"coordinate": j + 1, "generators": zero},
            )
    ray = extreme_rays(gens)
    if ray and len(ray) < len(gens):
        return PrimaryReport(False, f"the atoms on the extreme ray of {ray[0][0]} form a divisor-closed submonoid", ray[0])
    return PrimaryReport(False, "a finitely generated monoid of rank >= 2 has a closed cone")


def extreme_rays(gens: Sequence[IntVec]) -> List[List[IntVec]]:
    """Group generators by ray and keep the rays not in the cone of the others."""
    rays: Dict[IntVec, List[IntVec]] = {}
    for g in canonical(gens):
        rays.setdefault(primitive(g), []).append(g)
    out = []
    for p, members in sorted(rays.items()):
        others = [q for q in rays if q != p]
        if not others or _cone_coords(others, p) is None:
            out.append(members)
    return out


# -- isomorphism invariants --


@dataclass(frozen=True)
class NonIsoReport:
    verdict: str  # "not isomorphic" or "inconclusive"
    invariants: Tuple[Dict[str, Any], Dict[str, Any]]
    differing: Tuple[str, ...]


def _invariants(spec: MonoidSpec) -> Dict[str, Any]:
    if spec.is_family:
        sample = list(spec.finite_atoms) + [s(s.n_start + i) for s in spec.sequences for i in range(spec.dim + 1)]
        limits = len({primitive(s.leading) for s in spec.sequences})
        return {"rank": rank(sample), "limit_slopes": limits, "atoms_per_extreme_ray": None}
    atoms = atoms_of(spec.generators)
    return {
        "rank": rank(atoms) if atoms else 0,
        "limit_slopes": 0,
        "atoms_per_extreme_ray": sorted(len(r) for r in extreme_rays(atoms)),
    }


def noniso_witness(a: MonoidSpec, b: MonoidSpec) -> NonIsoReport:
    ia, ib = _invariants(a), _invariants(b)
    diff = tuple(k for k in ia if ia[k] is not None and ib[k] is not None and ia[k] != ib[k])
    return NonIsoReport("not isomorphic" if diff else "inconclusive", (ia, ib), diff)
