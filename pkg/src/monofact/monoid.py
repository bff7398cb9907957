"""Monoids inside N^d: finitely generated ones and infinite atom families.

An infinite family is a finite list of atoms plus polynomial atom sequences
``a(n) = c0 + n*c1 + n**2*c2`` (n >= n_start).  Degree two is enough for every
configuration the elasticity classifier distinguishes.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import gcd
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .factorization import find_factorization
from .geometry import ContractError, IntVec, as_vec, det2, norm_sq

AtomList = Tuple[IntVec, ...]

_INT64 = 2**63 - 1


class SpecError(ContractError):
    """A monoid spec failed to parse or validate."""


def canonical_key(v: Sequence[int]):
    return (norm_sq(v), tuple(v))


def canonical(vs) -> AtomList:
    return tuple(sorted({as_vec(v) for v in vs}, key=canonical_key))


def primitive(v: Sequence[int]) -> IntVec:
    g = gcd(*v)
    return tuple(c // g for c in v) if g else tuple(v)


@dataclass(frozen=True)
class AtomSequence:
    c0: IntVec
    c1: IntVec
    c2: IntVec
    n_start: int = 1

    def __post_init__(self):
        object.__setattr__(self, "c0", as_vec(self.c0))
        object.__setattr__(self, "c1", as_vec(self.c1))
        object.__setattr__(self, "c2", as_vec(self.c2) if self.c2 is not None else (0,) * len(self.c0))
        if not len(self.c0) == len(self.c1) == len(self.c2):
            raise SpecError("sequence coefficients must share one dimension")
        if self.n_start < 1:
            raise SpecError("n_start must be >= 1")
        lead = self.leading
        if not any(lead):
            raise SpecError(f"sequence {self} is constant: its norms never increase")
        if min(lead) < 0:
            raise SpecError(f"leading coefficient {lead} is not in N^d")
        for j in range(self.dim):
            if _poly_min((self.c0[j], self.c1[j], self.c2[j]), self.n_start) < 0:
                raise SpecError(f"coordinate {j} of {self} goes negative")
        j = next(i for i, c in enumerate(lead) if c)
        coeffs = (self.c0[j], self.c1[j], self.c2[j])
        # past the root bound of coordinate j the sequence is nonzero
        top = self.n_start + 1 + sum(abs(c) for c in coeffs)
        for n in range(self.n_start, top):
            if not any(self(n)):
                raise SpecError(f"sequence {self} hits the zero vector at n = {n}")

    @property
    def dim(self) -> int:
        return len(self.c0)

    @property
    def leading(self) -> IntVec:
        return self.c2 if any(self.c2) else self.c1

    def __call__(self, n: int) -> IntVec:
        return tuple(a + n * b + n * n * c for a, b, c in zip(self.c0, self.c1, self.c2))

    def increasing_from(self) -> int:
        """First index past which the squared norm strictly increases."""
        # D(n) = |a(n+1)|^2 - |a(n)|^2 has positive leading coefficient; bound its roots
        coeffs = _sub(_poly_sq_norm(self, shift=1), _poly_sq_norm(self, shift=0))
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        lead = coeffs[-1]
        cauchy = 1 + max((abs(c) + lead - 1) // lead for c in coeffs[:-1]) if len(coeffs) > 1 else 0
        return max(self.n_start, cauchy + 1)

    def to_dict(self) -> Dict[str, Any]:
        return {"c0": _enc(self.c0), "c1": _enc(self.c1), "c2": _enc(self.c2), "n_start": self.n_start}


def _poly_min(p: Tuple[int, int, int], start: int) -> int:
    """Exact minimum of c0 + c1 n + c2 n^2 over integers n >= start (-1 if unbounded below)."""
    c0, c1, c2 = p
    f = lambda n: c0 + c1 * n + c2 * n * n  # noqa: E731
    if c2 < 0 or (c2 == 0 and c1 < 0):
        return -1
    cands = [start]
    if c2 > 0:
        v = -c1 // (2 * c2)
        cands += [n for n in (v, v + 1) if n >= start]
    return min(f(n) for n in cands)


def _poly_sq_norm(s: AtomSequence, shift: int) -> List[int]:
    """Coefficients (low to high) of |a(n + shift)|^2 as a polynomial in n."""
    out = [0] * 5
    for a, b, c in zip(s.c0, s.c1, s.c2):
        # coordinate: (a + b*shift + c*shift^2) + (b + 2c*shift) n + c n^2
        q = (a + b * shift + c * shift * shift, b + 2 * c * shift, c)
        for i in range(3):
            for j in range(3):
                out[i + j] += q[i] * q[j]
    return out


def _sub(p: List[int], q: List[int]) -> List[int]:
    return [a - b for a, b in zip(p, q)]


def _enc(v: Sequence[int]) -> List[Any]:
    return [c if abs(c) <= _INT64 else str(c) for c in v]


@dataclass(frozen=True)
class MonoidSpec:
    """Either ``kind == "finite"`` with ``generators`` or ``kind == "family"``."""

    dim: int
    kind: str
    generators: AtomList = ()
    finite_atoms: AtomList = ()
    sequences: Tuple[AtomSequence, ...] = field(default=())

    def __post_init__(self):
        if self.dim < 1:
            raise SpecError("dim must be >= 1")
        if self.kind not in ("finite", "family"):
            raise SpecError(f"unknown spec kind {self.kind!r}")
        gens = tuple(as_vec(g) for g in self.generators)
        fin = tuple(as_vec(g) for g in self.finite_atoms)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "finite_atoms", fin)
        object.__setattr__(self, "sequences", tuple(self.sequences))
        for v in gens + fin:
            if len(v) != self.dim:
                raise SpecError(f"vector {v} does not have dimension {self.dim}")
            if not any(v) or min(v) < 0:
                raise SpecError(f"vector {v} must be a nonzero point of N^{self.dim}")
        for s in self.sequences:
            if s.dim != self.dim:
                raise SpecError(f"sequence {s} does not have dimension {self.dim}")

    @classmethod
    def finite(cls, generators) -> "MonoidSpec":
        generators = [as_vec(g) for g in generators]
        if not generators:
            raise SpecError("cannot infer the dimension of an empty generator list; use MonoidSpec(dim, 'finite')")
        return cls(len(generators[0]), "finite", generators=tuple(generators))

    @classmethod
    def family(cls, finite_atoms=(), sequences=(), dim: Optional[int] = None) -> "MonoidSpec":
        finite_atoms = [as_vec(a) for a in finite_atoms]
        if dim is None:
            dim = len(finite_atoms[0]) if finite_atoms else sequences[0].dim
        return cls(dim, "family", finite_atoms=tuple(finite_atoms), sequences=tuple(sequences))

    @property
    def is_family(self) -> bool:
        return self.kind == "family"

    def to_dict(self) -> Dict[str, Any]:
        if self.kind == "finite":
            return {"dim": self.dim, "kind": "finite", "generators": [_enc(g) for g in self.generators]}
        return {
            "dim": self.dim,
            "kind": "family",
            "finite_atoms": [_enc(g) for g in self.finite_atoms],
            "sequences": [s.to_dict() for s in self.sequences],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, doc: Any) -> "MonoidSpec":
        return _parse_spec(doc)

    @classmethod
    def loads(cls, text: str) -> "MonoidSpec":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        return _parse_spec(doc)


def _int(v: Any, where: str) -> int:
    if isinstance(v, bool):
        raise SpecError(f"{where}: expected an integer, got {v!r}")
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        try:
            return int(v, 10)
        except ValueError:
            pass
    raise SpecError(f"{where}: expected an integer, got {v!r}")


def _vec(v: Any, where: str, dim: Optional[int] = None, point: bool = False) -> IntVec:
    if not isinstance(v, list):
        raise SpecError(f"{where}: expected a list of integers, got {v!r}")
    out = tuple(_int(c, f"{where}[{i}]") for i, c in enumerate(v))
    if dim is not None and len(out) != dim:
        raise SpecError(f"{where}: expected {dim} coordinates, got {len(out)}")
    if point and (not any(out) or min(out) < 0):
        raise SpecError(f"{where}: {out} is not a nonzero point of N^{len(out)}")
    return out


def _parse_spec(doc: Any) -> MonoidSpec:
    if not isinstance(doc, dict):
        raise SpecError("spec: expected a JSON object")
    for key in ("dim", "kind"):
        if key not in doc:
            raise SpecError(f"spec: missing key {key!r}")
    dim = _int(doc["dim"], "dim")
    kind = doc["kind"]
    if kind == "finite":
        gens = doc.get("generators")
        if not isinstance(gens, list):
            raise SpecError("generators: expected a list")
        return MonoidSpec(dim, "finite", generators=tuple(_vec(g, f"generators[{i}]", dim, True) for i, g in enumerate(gens)))
    if kind == "family":
        fin = doc.get("finite_atoms", [])
        seqs = doc.get("sequences", [])
        if not isinstance(fin, list) or not isinstance(seqs, list):
            raise SpecError("finite_atoms/sequences: expected lists")
        parsed = []
        for i, s in enumerate(seqs):
            where = f"sequences[{i}]"
            if not isinstance(s, dict):
                raise SpecError(f"{where}: expected an object")
            try:
                parsed.append(
                    AtomSequence(
                        _vec(s.get("c0"), f"{where}.c0", dim),
                        _vec(s.get("c1"), f"{where}.c1", dim),
                        _vec(s.get("c2", [0] * dim), f"{where}.c2", dim),
                        _int(s.get("n_start", 1), f"{where}.n_start"),
                    )
                )
            except SpecError as exc:
                raise SpecError(f"{where}: {exc}") from None
        return MonoidSpec(
            dim, "family", finite_atoms=tuple(_vec(g, f"finite_atoms[{i}]", dim, True) for i, g in enumerate(fin)), sequences=tuple(parsed)
        )
    raise SpecError(f"kind: expected 'finite' or 'family', got {kind!r}")


# -- operations --


def atoms_of(generators) -> AtomList:
    """The atoms among ``generators``: those not a sum of two or more others."""
    gens = canonical(generators)
    out = []
    for g in gens:
        others = [h for h in gens if h != g and all(hj <= gj for hj, gj in zip(h, g))]
        if find_factorization(others, g) is None:
            out.append(g)
    return tuple(out)


def is_member(atoms, x) -> bool:
    return find_factorization(atoms, x) is not None


def _require_family(spec: MonoidSpec) -> None:
    if not spec.is_family:
        raise ContractError("operation needs an atom family spec")


def family_members_up_to(spec: MonoidSpec, norm_sq_bound: int) -> AtomList:
    _require_family(spec)
    out = {a for a in spec.finite_atoms if norm_sq(a) <= norm_sq_bound}
    for s in spec.sequences:
        stop = s.increasing_from()
        n = s.n_start
        while True:
            a = s(n)
            ns = norm_sq(a)
            if ns <= norm_sq_bound:
                out.add(a)
            elif n >= stop:
                break
            n += 1
    return canonical(out)


def family_members(spec: MonoidSpec, count: int) -> AtomList:
    """The ``count`` smallest family members in canonical order."""
    _require_family(spec)
    bound = max([norm_sq(a) for a in spec.finite_atoms] + [1])
    while True:
        members = family_members_up_to(spec, bound)
        if len(members) >= count or not spec.sequences:
            return members[:count]
        bound *= 2


@dataclass(frozen=True)
class Violation:
    member: IntVec
    atoms: AtomList
    exponents: Tuple[int, ...]

    def __str__(self) -> str:
        parts = []
        for a, c in zip(self.atoms, self.exponents):
            parts += [str(a)] * c
        return f"{self.member} = {' + '.join(parts)}"


@dataclass(frozen=True)
class ValidationReport:
    checked: AtomList
    violations: Tuple[Violation, ...]
    monotone_slopes: bool = True

    @property
    def ok(self) -> bool:
        return not self.violations and self.monotone_slopes


def validate_family_atoms(spec: MonoidSpec, window: int) -> ValidationReport:
    """Check that the ``window`` smallest family members are atoms.

    Summands of m are coordinatewise below m, hence no longer than m, so
    searching among members with norm at most |m| is exhaustive.
    """
    if window < 1:
        raise ContractError("window must be >= 1")
    checked = family_members(spec, window)
    pool = family_members_up_to(spec, max(norm_sq(m) for m in checked)) if checked else ()
    violations = []
    for m in checked:
        others = tuple(a for a in pool if a != m and all(aj <= mj for aj, mj in zip(a, m)))
        z = find_factorization(others, m)
        if z is not None:
            violations.append(Violation(m, others, z))
    monotone = True
    if spec.dim == 2:
        for s in spec.sequences:
            signs = {_sign(det2(s(n), s(n + 1))) for n in range(s.n_start, s.n_start + max(window, 2))}
            monotone &= len(signs) == 1 and 0 not in signs
    return ValidationReport(checked, tuple(violations), monotone)


def _sign(v: int) -> int:
    return (v > 0) - (v < 0)


def truncate(spec: MonoidSpec, norm_sq_bound: int) -> MonoidSpec:
    if not spec.is_family:
        return spec
    return MonoidSpec(spec.dim, "finite", generators=family_members_up_to(spec, norm_sq_bound))
