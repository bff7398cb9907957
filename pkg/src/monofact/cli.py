"""Command-line front end.

Each subcommand reads its inputs from files and flags, computes, and prints a
result document (JSON by default).  Documents depend only on the inputs, so
repeated runs are byte-identical; pass ``--timing`` to add the wall time.

Exit status: 0 on success, 2 on bad input or a failed precondition or
verification, 3 when a search bound is exhausted.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional

from . import constructions as C
from . import elasticity as E
from . import factorization as F
from .geometry import ContractError, as_vec, hilbert_basis_2d, norm_sq
from .monoid import MonoidSpec, atoms_of, family_members_up_to, truncate, validate_family_atoms

EXIT_OK, EXIT_INPUT, EXIT_RESOURCE = 0, 2, 3

# flags that never change the payload and so stay out of the echo
_NOT_ECHOED = {"jobs", "out", "format", "timing", "func"}


class InputError(ContractError):
    pass


def _q(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _ints(text: str, what: str) -> List[int]:
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t != ""]
    except ValueError:
        raise InputError(f"{what}: expected comma-separated integers, got {text!r}") from None


def _ratio(text: str) -> Fraction:
    try:
        r = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"--ratio: expected P/Q, got {text!r}") from None
    if r <= 0:
        raise InputError("--ratio must be positive")
    return r


class _Inputs:
    """Reads input files once and remembers their bytes for the digest."""

    def __init__(self):
        self.blobs: List[bytes] = []

    def read(self, path: Optional[str], flag: str = "--spec") -> str:
        if not path:
            raise InputError(f"{flag} is required for this command")
        try:
            with open(path, "rb") as fh:
                data = fh.read()
        except OSError as exc:
            raise InputError(f"{flag}: cannot read {path}: {exc.strerror}") from None
        self.blobs.append(data)
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError:
            raise InputError(f"{flag}: {path} is not UTF-8") from None

    def spec(self, path, flag="--spec") -> MonoidSpec:
        return MonoidSpec.loads(self.read(path, flag))

    def digest(self) -> str:
        h = hashlib.sha256()
        for b in self.blobs:
            h.update(hashlib.sha256(b).digest())
        return h.hexdigest()


def _element(args, dim: int):
    if args.element is None:
        raise InputError("--element is required for this command")
    x = _ints(args.element, "--element")
    if len(x) != dim or min(x) < 0:
        raise InputError(f"--element must be a point of N^{dim}, got {tuple(x)}")
    return tuple(x)


def _atoms_for(spec: MonoidSpec, norm_sq_bound: int):
    """Atoms that can divide an element of squared norm <= the bound."""
    if spec.is_family:
        return family_members_up_to(spec, norm_sq_bound)
    return atoms_of(spec.generators)


# -- commands --


def cmd_atoms(args, io: _Inputs) -> Dict[str, Any]:
    spec = io.spec(args.spec)
    if spec.is_family:
        atoms = family_members_up_to(spec, args.bound)
        report = validate_family_atoms(spec, args.window)
        return {
            "atoms": [list(a) for a in atoms],
            "bound": args.bound,
            "validation": {"ok": report.ok, "violations": [str(v) for v in report.violations]},
        }
    return {"atoms": [list(a) for a in atoms_of(spec.generators)]}


def cmd_factorize(args, io):
    spec = io.spec(args.spec)
    x = _element(args, spec.dim)
    atoms = _atoms_for(spec, norm_sq(x))
    zs = F.factorizations(atoms, x)
    return {"atoms": [list(a) for a in atoms], "factorizations": [list(z) for z in zs], "count": len(zs)}


def cmd_lengths(args, io):
    spec = io.spec(args.spec)
    if args.element is None:
        atoms = _atoms_for(spec, args.bound)
        sample = F.system_sample(atoms, args.bound, jobs=args.jobs)
        return {"bound": args.bound, "lengths": [[list(x), list(L)] for x, L in sample.items()]}
    x = _element(args, spec.dim)
    L = F.length_set(_atoms_for(spec, norm_sq(x)), x)
    out: Dict[str, Any] = {"element": list(x), "lengths": list(L), "member": bool(L)}
    if L and any(x):
        out["elasticity"] = _q(Fraction(L[-1], L[0]))
    return out


def cmd_elasticity(args, io):
    spec = io.spec(args.spec)
    if spec.is_family:
        return E.classify_rank2(spec, args.window, args.ratio, args.limit or 5000).to_dict()
    atoms = atoms_of(spec.generators)
    res = E.elasticity_fg(atoms)
    out = res.to_dict()
    out["witness"] = E.lp_witness_to_ratio(atoms, res.certificate).to_dict()
    return out


def cmd_classify(args, io):
    spec = io.spec(args.spec)
    res = E.classify_rank2(spec, args.window, args.ratio, args.limit or 5000)
    out = res.to_dict()
    out["classification"] = "infinite" if res.is_infinite else "rational"
    w = res.certificate.witness
    if w is not None:
        out["certificate_ratio"] = _q(w.ratio)
    return out


def cmd_certify(args, io):
    spec = io.spec(args.spec)
    return {"certificate": E.unbounded_certificate(spec, args.ratio, args.limit or 5000).to_dict()}


def cmd_polyhedral(args, io):
    spec = io.spec(args.spec)
    N = math.ceil(args.ratio)
    return {"N": N, "certificate": E.polyhedral_certificate(spec, N, args.limit or 100_000).to_dict()}


def _gens_1d(spec: MonoidSpec) -> List[int]:
    if spec.is_family or spec.dim != 1:
        raise InputError("this command needs a finite spec in dimension 1")
    return [g[0] for g in spec.generators]


def cmd_gen_lengths(args, io):
    gens = _gens_1d(io.spec(args.spec))
    x = _element(args, 1)[0]
    g = F.generalized_length_set(gens, x)
    out: Dict[str, Any] = {"generators": list(g.generators), "element": x, "lengths": list(g.values)}
    if g.values:
        out["rho_g"] = _q(Fraction(g.values[-1], g.values[0]))
    return out


def cmd_scan(args, io):
    gens = _gens_1d(io.spec(args.spec))
    scan = F.generalized_elasticity_scan(gens, args.bound)
    aff = F.check_eventual_affine(gens, args.bound)
    best = max(scan.values, key=lambda v: (v[1], -v[0]))
    return {
        "generators": list(scan.generators),
        "x_max": args.bound,
        "max_observed": _q(scan.max_observed),
        "argmax": best[0],
        "bound": _q(scan.bound),
        "within_bound": scan.within_bound,
        "tail_mean_gap": _q(scan.tail_mean_gap),
        "affine": {
            "period": aff.period,
            "threshold": aff.threshold,
            "holds": aff.holds,
            "windows_checked": aff.windows_checked,
            "offsets": {str(r): list(v) for r, v in sorted(aff.offsets.items())},
        },
    }


def cmd_hilbert(args, io):
    if args.rays:
        parts = [p for p in args.rays.split(";") if p.strip()]
        rays = [_ints(p, "--rays") for p in parts]
    else:
        spec = io.spec(args.spec)
        rays = list(spec.generators)
    if len(rays) != 2:
        raise InputError("hilbert needs exactly two rays")
    return {"rays": [list(r) for r in rays], "basis": [list(v) for v in hilbert_basis_2d(*rays)]}


def _profile(args) -> C.Profile:
    return C.Profile(args.profile)


def cmd_construct(args, io):
    build = C.build_full_system(args.count, _profile(args))
    return {"build": build.to_dict(), "generators": [list(a) for a in build.monoid.generators]}


def cmd_realize(args, io):
    if args.set is None:
        raise InputError("--set is required for realize")
    r = C.realize_length_set(_ints(args.set, "--set"), max_generator=args.limit or 40)
    return {"set": list(r.target), "generators": list(r.generators), "element": r.element}


def _load_build_or_spec(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if isinstance(doc, dict) and isinstance(doc.get("result"), dict) and "build" in doc["result"]:
        doc = doc["result"]["build"]
    if isinstance(doc, dict) and "blocks" in doc:
        return C.reverify(C.FullSystemBuild.from_dict(doc))
    return MonoidSpec.from_dict(doc)


def cmd_lift(args, io):
    src = _load_build_or_spec(io.read(args.spec))
    lifted = C.lift_rank(src, args.dim)
    return {"dim": args.dim, "spec": lifted.to_dict()}


def cmd_primary(args, io):
    src = _load_build_or_spec(io.read(args.spec))
    spec = src.monoid if isinstance(src, C.FullSystemBuild) else src
    rep = C.is_primary_family(spec)
    return {"primary": rep.primary, "explanation": rep.explanation, "witness": _jsonable(rep.witness)}


def cmd_noniso(args, io):
    a = io.spec(args.spec)
    b = io.spec(args.other, "--other")
    rep = C.noniso_witness(a, b)
    return {"verdict": rep.verdict, "invariants": list(rep.invariants), "differing": list(rep.differing)}


def cmd_verify(args, io):
    text = io.read(args.spec or args.cert, "--cert")
    rep = E.verify_certificate_text(text)
    out = {"ok": rep.ok, "message": rep.message, "ratio": _q(rep.ratio) if rep.ratio is not None else None}
    if not rep.ok:
        raise _Failed(out)
    return out


class _Failed(Exception):
    def __init__(self, payload):
        self.payload = payload


def _jsonable(v):
    if isinstance(v, tuple):
        return [_jsonable(c) for c in v]
    if isinstance(v, list):
        return [_jsonable(c) for c in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(c) for k, c in v.items()}
    return v


COMMANDS: Dict[str, Callable] = {
    "atoms": cmd_atoms,
    "factorize": cmd_factorize,
    "lengths": cmd_lengths,
    "elasticity": cmd_elasticity,
    "classify": cmd_classify,
    "certify": cmd_certify,
    "polyhedral-certify": cmd_polyhedral,
    "gen-lengths": cmd_gen_lengths,
    "scan-gen-elasticity": cmd_scan,
    "hilbert": cmd_hilbert,
    "construct": cmd_construct,
    "realize": cmd_realize,
    "lift": cmd_lift,
    "primary": cmd_primary,
    "witness-noniso": cmd_noniso,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", help="monoid spec, build manifest or certificate file")
    common.add_argument("--element", help='element as "x,y[,z...]"')
    common.add_argument("--bound", type=int, default=10000, help="squared-norm bound (default 10000)")
    common.add_argument("--window", type=int, default=12, help="atom validation window (default 12)")
    common.add_argument("--ratio", type=_ratio, default=Fraction(10), help="target ratio P/Q (default 10)")
    common.add_argument("--limit", type=int, help="search ceiling: largest generator for realize (default 40), "
                        "members scanned per sequence for classify/certify (default 5000)")
    common.add_argument("--count", type=int, default=6, help="number of P_fin sets for construct")
    common.add_argument("--profile", choices=("two-limit", "one-limit"), default="two-limit")
    common.add_argument("--set", help='finite set as "a,b,c"')
    common.add_argument("--dim", type=int, default=3)
    common.add_argument("--rays", help='two rays as "p,q;r,s" (hilbert)')
    common.add_argument("--other", help="second spec (witness-noniso)")
    common.add_argument("--cert", help="certificate file (verify)")
    common.add_argument("--out", help="also write the result document here")
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--jobs", type=int, default=1, help="worker processes; never changes results")
    common.add_argument("--timing", action="store_true", help="include wall time in the document")

    p = argparse.ArgumentParser(prog="monofact", description="Factorization invariants of submonoids of N^d.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return p


def _echo(args) -> Dict[str, Any]:
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in _NOT_ECHOED or v is None:
            continue
        out[k] = _q(v) if isinstance(v, Fraction) else v
    return out


def _table(doc: Dict[str, Any]) -> str:
    lines = []

    def walk(prefix, v):
        if isinstance(v, dict):
            for k in sorted(v):
                walk(f"{prefix}.{k}" if prefix else k, v[k])
        else:
            lines.append(f"{prefix:<32} {json.dumps(v, sort_keys=True)}")

    walk("", doc)
    return "\n".join(lines)


def render(doc: Dict[str, Any], fmt: str = "json") -> str:
    if fmt == "table":
        return _table(doc)
    return json.dumps(doc, sort_keys=True, indent=2)


def run(argv: Optional[List[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    io = _Inputs()
    t0 = time.perf_counter()
    status = EXIT_OK
    try:
        payload = COMMANDS[args.command](args, io)
    except _Failed as f:
        payload, status = f.payload, EXIT_INPUT
    except E.ResourceError as exc:
        print(f"monofact {args.command}: resource bound reached: {exc}", file=stderr)
        return EXIT_RESOURCE
    except (ContractError, ValueError) as exc:
        print(f"monofact {args.command}: {exc}", file=stderr)
        return EXIT_INPUT
    doc = {"command": args.command, "args": _echo(args), "input_digest": io.digest(), "result": _jsonable(payload)}
    if args.timing:
        doc["wall_time_s"] = round(time.perf_counter() - t0, 6)
    text = render(doc, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(render(doc, "json") + "\n")
    print(text, file=stdout)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
