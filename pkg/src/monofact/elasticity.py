"""Elasticity of monoids in N^d, with checkable certificates.

Finitely generated monoids get their exact elasticity from a rational linear
program.  Rank-2 atom families are sorted into the rational/infinite cases by
their limit slopes; every infinite verdict carries an explicit element with
two factorizations whose length ratio exceeds a target.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .factorization import find_factorization
from .geometry import ContractError, IntVec, as_vec, cramer_decompose, det2, norm_sq
from .lp import feasible_point, linprog_max
from .monoid import (
    AtomList,
    AtomSequence,
    MonoidSpec,
    canonical,
    canonical_key,
    primitive,
    validate_family_atoms,
)

INFINITE = math.inf
DEFAULT_RATIO = Fraction(10)


class UnsupportedConfiguration(ContractError):
    pass


class FamilyValidationError(ContractError):
    def __init__(self, report):
        self.report = report
        super().__init__(f"family members are not atoms: {report.violations[0]}" if report.violations
                         else "sequence slopes are not strictly monotone")


class ResourceError(RuntimeError):
    """A bounded search ran out of room before finding what it needed."""


# -- certificates --


@dataclass(frozen=True)
class RatioWitness:
    element: IntVec
    atoms: AtomList
    short: Tuple[int, ...]
    long: Tuple[int, ...]

    @property
    def ratio(self) -> Fraction:
        return Fraction(sum(self.long), sum(self.short))

    def to_dict(self) -> Dict[str, Any]:
        r = self.ratio
        return {
            "type": "ratio-witness",
            "element": list(self.element),
            "atoms": [list(a) for a in self.atoms],
            "short": list(self.short),
            "long": list(self.long),
            "ratio": f"{r.numerator}/{r.denominator}",
        }

    @classmethod
    def from_dict(cls, doc: Dict[str, Any]) -> "RatioWitness":
        try:
            return cls(
                as_vec(doc["element"]),
                tuple(as_vec(a) for a in doc["atoms"]),
                tuple(int(c) for c in doc["short"]),
                tuple(int(c) for c in doc["long"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ContractError(f"malformed certificate: {exc}") from None


@dataclass(frozen=True)
class LPWitness:
    u: Tuple[Fraction, ...]
    v: Tuple[Fraction, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {"type": "lp-witness", "u": [_q(x) for x in self.u], "v": [_q(x) for x in self.v]}


@dataclass(frozen=True)
class CaseTag:
    case: str
    data: Dict[str, Any] = field(default_factory=dict)
    witness: Optional[RatioWitness] = None

    def to_dict(self) -> Dict[str, Any]:
        out = {"type": "case", "case": self.case, "data": self.data}
        if self.witness is not None:
            out["witness"] = self.witness.to_dict()
        return out


Certificate = Union[RatioWitness, LPWitness, CaseTag]


@dataclass(frozen=True)
class ElasticityResult:
    value: Union[Fraction, float]
    attained: Optional[bool]
    certificate: Certificate

    @property
    def is_infinite(self) -> bool:
        return self.value == INFINITE

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": "infinite" if self.is_infinite else _q(self.value),
            "attained": self.attained,
            "certificate": self.certificate.to_dict(),
        }


def _q(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    ratio: Optional[Fraction]
    message: str = ""


def verify_certificate(cert: RatioWitness, claimed_ratio: Optional[Fraction] = None) -> VerificationReport:
    """Recompute both exponent-weighted sums and the length ratio."""
    atoms = cert.atoms
    for name, exps in (("short", cert.short), ("long", cert.long)):
        if len(exps) != len(atoms):
            return VerificationReport(False, None, f"{name}: {len(exps)} exponents for {len(atoms)} atoms")
        if any(c < 0 for c in exps):
            return VerificationReport(False, None, f"{name}: negative exponent")
        for j, target in enumerate(cert.element):
            got = sum(c * a[j] for c, a in zip(exps, atoms))
            if got != target:
                return VerificationReport(False, None, f"{name}: coordinate {j} sums to {got}, element has {target}")
        if sum(exps) <= 0:
            return VerificationReport(False, None, f"{name}: empty factorization")
    ratio = cert.ratio
    if claimed_ratio is not None and Fraction(claimed_ratio) != ratio:
        return VerificationReport(False, ratio, f"claimed ratio {_q(claimed_ratio)} but lengths give {_q(ratio)}")
    return VerificationReport(True, ratio, "ok")


def load_certificate(doc: Dict[str, Any]) -> Tuple[RatioWitness, Optional[Fraction]]:
    """Accept a bare certificate, a case tag carrying one, or a result document."""
    if isinstance(doc.get("result"), dict):
        doc = doc["result"]
    if "certificate" in doc and isinstance(doc["certificate"], dict):
        doc = doc["certificate"]
    if doc.get("type") == "case":
        doc = doc.get("witness") or {}
    claimed = Fraction(doc["ratio"]) if isinstance(doc.get("ratio"), str) else None
    return RatioWitness.from_dict(doc), claimed


def verify_certificate_text(text: str) -> VerificationReport:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ContractError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    cert, claimed = load_certificate(doc)
    return verify_certificate(cert, claimed)


# -- finitely generated monoids --


def elasticity_fg(atoms: Sequence[Sequence[int]]) -> ElasticityResult:
    """Exact elasticity of a finitely generated monoid.

    Solves  max sum(u)  s.t.  sum(v) = 1,  A u = A v,  u, v >= 0.  A rational
    optimum scales to two factorizations of one element, so the optimum is
    attained.
    """
    atoms = [as_vec(a) for a in atoms]
    if not atoms:
        raise ContractError("elasticity of the trivial monoid is undefined")
    k, d = len(atoms), len(atoms[0])
    rows = [[a[j] for a in atoms] + [-a[j] for a in atoms] for j in range(d)]
    rows.append([0] * k + [1] * k)
    rhs = [0] * d + [1]
    sol = linprog_max([1] * k + [0] * k, rows, rhs)
    return ElasticityResult(sol.value, True, LPWitness(sol.x[:k], sol.x[k:]))


def lp_witness_to_ratio(atoms: Sequence[Sequence[int]], w: LPWitness) -> RatioWitness:
    """Scale an optimal LP pair to integer factorizations of one element."""
    atoms = tuple(as_vec(a) for a in atoms)
    den = 1
    for q in w.u + w.v:
        den = den * q.denominator // math.gcd(den, q.denominator)
    long = tuple(int(q * den) for q in w.u)
    short = tuple(int(q * den) for q in w.v)
    element = tuple(sum(c * a[j] for c, a in zip(short, atoms)) for j in range(len(atoms[0])))
    return RatioWitness(element, atoms, short, long)


# -- rank-2 families --


def _slope_lt(u, v) -> bool:
    return det2(u, v) > 0


@dataclass(frozen=True)
class LimitSlopeProfile:
    limits: Tuple[IntVec, ...]  # primitive directions, increasing slope
    sides: Dict[IntVec, Tuple[bool, bool]]  # limit -> (atoms below, atoms above)
    weights: Optional[Tuple[int, ...]]  # S_l when there is one limit and it is finite
    weights_infinite: bool = False

    @property
    def limit_slopes(self) -> Tuple[Optional[Fraction], ...]:
        return tuple(Fraction(v[1], v[0]) if v[0] else None for v in self.limits)


def _sequence_side(s: AtomSequence, v: IntVec) -> int:
    """+1 if the members lie above the ray of v, -1 below, 0 on it."""
    d = det2(v, s(s.n_start))
    return (d > 0) - (d < 0)


def limit_slope_profile(spec: MonoidSpec) -> LimitSlopeProfile:
    if not spec.is_family or spec.dim != 2:
        raise ContractError("limit slopes are defined for rank-2 atom families")
    limits = sorted({primitive(s.leading) for s in spec.sequences}, key=lambda v: (v[0] == 0, Fraction(v[1], v[0]) if v[0] else 0))
    sides = {}
    for v in limits:
        below = any(det2(v, a) < 0 for a in spec.finite_atoms) or any(_sequence_side(s, v) < 0 for s in spec.sequences)
        above = any(det2(v, a) > 0 for a in spec.finite_atoms) or any(_sequence_side(s, v) > 0 for s in spec.sequences)
        sides[v] = (below, above)
    weights = None
    infinite = False
    if len(limits) == 1:
        v = limits[0]
        if any(det2(v, s.c1) or det2(v, s.c2) for s in spec.sequences):
            infinite = True
        else:
            ws = {abs(det2(v, a)) for a in spec.finite_atoms} | {abs(det2(v, s.c0)) for s in spec.sequences}
            weights = tuple(sorted(ws))
    return LimitSlopeProfile(tuple(limits), sides, weights, infinite)


def _case_of(spec: MonoidSpec, profile: LimitSlopeProfile) -> Tuple[str, Optional[IntVec]]:
    """Return the case id and, for case 1.1, an atom strictly between the extreme limits."""
    if len(profile.limits) >= 2:
        lo, hi = profile.limits[0], profile.limits[-1]
        between = [a for a in spec.finite_atoms if _slope_lt(lo, a) and _slope_lt(a, hi)]
        for s in spec.sequences:
            # monotone slopes converging to the sequence's limit: scan until inside or past
            for n in range(s.n_start, s.n_start + 64):
                a = s(n)
                if _slope_lt(lo, a) and _slope_lt(a, hi):
                    between.append(a)
                    break
        if between:
            return "1.1", min(between, key=canonical_key)
        return "1.2", None
    below, above = profile.sides[profile.limits[0]]
    if below and above:
        return "2.1", None
    return ("2.2.1" if profile.weights_infinite else "2.2.2"), None


def _triple_ratio(p, q, r):
    """Sort three atoms by slope; if strictly ordered, return the relation."""
    lo, mid, hi = sorted((p, q, r), key=lambda v: (v[0] == 0, Fraction(v[1], v[0]) if v[0] else 0))
    if not (_slope_lt(lo, mid) and _slope_lt(mid, hi)):
        return None
    c_lo, c_hi, c_mid = cramer_decompose(lo, mid, hi)
    outer = c_lo + c_hi
    ratio = Fraction(max(outer, c_mid), min(outer, c_mid))
    return ratio, (lo, mid, hi), (c_lo, c_mid, c_hi)


def _witness_from(triple, coeffs) -> RatioWitness:
    lo, mid, hi = triple
    c_lo, c_mid, c_hi = coeffs
    atoms = canonical((lo, mid, hi))
    element = tuple(c_mid * m for m in mid)
    mid_side = tuple(c_mid if a == mid else 0 for a in atoms)
    outer_side = tuple(c_lo if a == lo else c_hi if a == hi else 0 for a in atoms)
    if sum(outer_side) >= sum(mid_side):
        return RatioWitness(element, atoms, mid_side, outer_side)
    return RatioWitness(element, atoms, outer_side, mid_side)


ANCHORS_PER_SEQUENCE = 4


def _search_witness(spec: MonoidSpec, case: str, pivot: Optional[IntVec], target: Fraction, max_index: int) -> RatioWitness:
    """Scan growing family members for a relation with length ratio > target.

    Step t adds member t of every sequence.  Which triples are tried mirrors
    the case: a fixed atom between the limits against two growing members
    (1.1), a growing member between two small anchors (1.2, 2.1), or a
    growing member beyond a pool member and an anchor (2.2.1).
    """
    target = Fraction(target)
    anchors = list(spec.finite_atoms)
    for s in spec.sequences:
        anchors += [s(s.n_start + i) for i in range(ANCHORS_PER_SEQUENCE)]
    anchors = list(canonical(anchors))
    pool = list(canonical(spec.finite_atoms))
    for t in range(max_index):
        new = [s(s.n_start + t) for s in spec.sequences]
        best = None
        for w in new:
            if case == "1.1":
                partners = ((pivot, p) for p in pool + new if p != w)
            elif case in ("1.2", "2.1"):
                partners = ((x, y) for i, x in enumerate(anchors) for y in anchors[i + 1:])
            else:
                partners = ((p, x) for p in pool for x in anchors)
            for p, q in partners:
                if w in (p, q) or p == q:
                    continue
                hit = _triple_ratio(w, p, q)
                if hit and hit[0] > target and (best is None or hit[0] > best[0]):
                    best = hit
        if best is not None:
            cert = _witness_from(best[1], best[2])
            report = verify_certificate(cert)
            if not report.ok or report.ratio <= target:
                raise AssertionError(f"internal witness failed verification: {report.message}")
            return cert
        pool = list(canonical(pool + new))
    raise ResourceError(f"no witness with ratio > {_q(target)} among the first {max_index} members of each sequence")


def classify_rank2(
    spec: MonoidSpec,
    validation_window: int = 12,
    target_ratio: Fraction = DEFAULT_RATIO,
    max_index: int = 5000,
) -> ElasticityResult:
    """Decide whether a rank-2 atom family has rational or infinite elasticity."""
    if not spec.is_family or spec.dim != 2 or not spec.sequences:
        raise ContractError("classify_rank2 needs a rank-2 family with at least one sequence")
    report = validate_family_atoms(spec, validation_window)
    if not report.ok:
        raise FamilyValidationError(report)
    profile = limit_slope_profile(spec)
    case, pivot = _case_of(spec, profile)
    data = {"limit_slopes": [_slope_str(s) for s in profile.limit_slopes]}
    if case != "2.2.2":
        cert = _search_witness(spec, case, pivot, target_ratio, max_index)
        return ElasticityResult(INFINITE, False, CaseTag(case, data, cert))
    v = profile.limits[0]
    zero = [a for a in spec.finite_atoms if det2(v, a) == 0] + [s(s.n_start) for s in spec.sequences if det2(v, s.c0) == 0]
    if zero:
        raise UnsupportedConfiguration(f"atom {zero[0]} lies on the limit ray {v}: projection weight 0")
    w = profile.weights
    data["weights"] = list(w)
    return ElasticityResult(Fraction(w[-1], w[0]), None, CaseTag(case, data))


def _slope_str(s: Optional[Fraction]) -> str:
    return "infinity" if s is None else _q(s)


def unbounded_certificate(spec: MonoidSpec, target_ratio: Fraction = DEFAULT_RATIO, max_index: int = 5000) -> RatioWitness:
    if not spec.is_family or spec.dim != 2 or not spec.sequences:
        raise ContractError("unbounded_certificate needs a rank-2 family with at least one sequence")
    profile = limit_slope_profile(spec)
    case, pivot = _case_of(spec, profile)
    if case == "2.2.2":
        raise ContractError("the family has rational elasticity (case 2.2.2); no unbounded certificate exists")
    return _search_witness(spec, case, pivot, target_ratio, max_index)


# -- polyhedral cones in higher rank --


def _cone_coords(extreme: List[IntVec], v: IntVec) -> Optional[Tuple[Fraction, ...]]:
    d = len(v)
    rows = [[a[j] for a in extreme] for j in range(d)]
    return feasible_point(rows, list(v))


def _parallelepiped_points(extreme: List[IntVec], max_points: int) -> List[IntVec]:
    n, d = len(extreme), len(extreme[0])
    top = [sum(a[j] for a in extreme) for j in range(d)]
    size = 1
    for t in top:
        size *= t + 1
    if size > max_points:
        raise ResourceError(f"fundamental parallelepiped box has {size} points (> {max_points})")
    # z in Pi  <=>  z = sum alpha_i a_i with 0 <= alpha_i <= 1 (slacks make it an equality system)
    rows = [[a[j] for a in extreme] + [0] * n for j in range(d)]
    rows += [[1 if i == r else 0 for i in range(n)] + [1 if i == r else 0 for i in range(n)] for r in range(n)]
    pts = []
    import itertools

    for z in itertools.product(*(range(t + 1) for t in top)):
        if feasible_point(rows, list(z) + [1] * n) is not None:
            pts.append(tuple(z))
    return pts


def scaling_constant(extreme: Sequence[Sequence[int]], max_points: int = 200_000, max_multiple: int = 10_000) -> int:
    """Least N0 with N0*z an N-combination of the extreme atoms for every z in the parallelepiped."""
    extreme = [as_vec(a) for a in extreme]
    n0 = 1
    for z in _parallelepiped_points(extreme, max_points):
        if not any(z):
            continue
        for k in range(1, max_multiple + 1):
            if find_factorization(extreme, tuple(k * c for c in z)) is not None:
                n0 = n0 * k // math.gcd(n0, k)
                break
        else:
            raise ResourceError(f"no multiple <= {max_multiple} of {z} is representable")
    return n0


def polyhedral_certificate(spec: MonoidSpec, N: int, max_index: int = 100_000) -> RatioWitness:
    """Witness rho(H) >= N + 1 for a polyhedral family with declared extreme atoms.

    The family's finite atoms are the declared extreme-ray atoms a_1..a_n.  A
    member a is split as v + sum c_i a_i with v in the fundamental
    parallelepiped; N0*a then has the short factorization N0*a and the long one
    N0*v + sum N0 c_i a_i.  Members are scanned until the ratio reaches N + 1,
    which the norm condition |a| > (N+1) sum |a_i| is guaranteed to deliver.
    """
    if not spec.is_family or not spec.sequences or not spec.finite_atoms:
        raise ContractError("need a family with declared extreme atoms and at least one sequence")
    extreme = list(spec.finite_atoms)
    for s in spec.sequences:
        if _cone_coords(extreme, s.leading) is None:
            raise ContractError(f"sequence direction {s.leading} leaves the declared cone")
    n0 = scaling_constant(extreme)
    # |a|^2 > (N+1)^2 * n * sum |a_i|^2 implies |a| > (N+1) * sum |a_i|
    norm_cut = (N + 1) ** 2 * len(extreme) * sum(norm_sq(a) for a in extreme)
    for t in range(max_index):
        for s in spec.sequences:
            a = s(s.n_start + t)
            lam = _cone_coords(extreme, a)
            if lam is None:
                raise ContractError(f"member {a} lies outside the declared cone")
            c = [int(math.floor(x)) for x in lam]
            v = tuple(aj - sum(ci * e[j] for ci, e in zip(c, extreme)) for j, aj in enumerate(a))
            rep = find_factorization(extreme, tuple(n0 * x for x in v))
            if rep is None:
                raise AssertionError(f"N0 = {n0} does not clear {v}")
            long = tuple(r + n0 * ci for r, ci in zip(rep, c)) + (0,)
            short = (0,) * len(extreme) + (n0,)
            if Fraction(sum(long), n0) >= N + 1 or norm_sq(a) > norm_cut:
                cert = RatioWitness(tuple(n0 * x for x in a), tuple(extreme) + (a,), short, long)
                report = verify_certificate(cert)
                if not report.ok:
                    raise AssertionError(report.message)
                return cert
    raise ResourceError(f"no member among the first {max_index} of each sequence gives ratio >= {N + 1}")
