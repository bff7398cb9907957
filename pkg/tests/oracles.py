"""Deliberately naive reference implementations used to check the library.

Nothing here imports monofact.  Speed is not a goal; obviousness is.
"""
from fractions import Fraction
from itertools import product


def naive_factorizations(atoms, x):
    """Plain recursion over the atoms, no pruning beyond nonnegativity."""
    atoms = [tuple(a) for a in atoms]
    x = tuple(x)
    out = set()

    def rec(i, rest, exps):
        if i == len(atoms):
            if not any(rest):
                out.add(tuple(exps))
            return
        a = atoms[i]
        c = 0
        r = rest
        while True:
            rec(i + 1, r, exps + [c])
            r = tuple(p - q for p, q in zip(r, a))
            if min(r) < 0 or not any(a):
                break
            c += 1

    rec(0, x, [])
    return out


def naive_lengths(atoms, x):
    return sorted({sum(z) for z in naive_factorizations(atoms, x)})


def box_length_sets(atoms, box):
    """L(x) for every x <= box (coordinatewise), by enumerating exponent vectors."""
    atoms = [tuple(a) for a in atoms]
    caps = []
    for a in atoms:
        caps.append(min(b // c for b, c in zip(box, a) if c))
    table = {}
    for exps in product(*(range(c + 1) for c in caps)):
        x = tuple(sum(e * a[j] for e, a in zip(exps, atoms)) for j in range(len(box)))
        if all(v <= b for v, b in zip(x, box)):
            table.setdefault(x, set()).add(sum(exps))
    return table


def brute_elasticity(atoms, box):
    best = Fraction(1)
    for x, L in box_length_sets(atoms, box).items():
        if any(x):
            best = max(best, Fraction(max(L), min(L)))
    return best


def naive_is_sum(gens, g):
    """Is g a sum of at least two entries of gens (repetition allowed)?"""
    return any(sum(z) >= 2 for z in naive_factorizations(sorted(set(gens)), g))


def cone_points(r1, r2, limit):
    """Lattice points of cone(r1, r2) with coordinates <= limit (r1 below r2)."""
    pts = []
    for p in product(range(limit + 1), repeat=2):
        if any(p) and r1[0] * p[1] - r1[1] * p[0] >= 0 and p[0] * r2[1] - p[1] * r2[0] >= 0:
            pts.append(p)
    return pts


def brute_hilbert(r1, r2, limit):
    """Irreducible cone points with coordinates <= limit."""
    pts = set(cone_points(r1, r2, limit))
    irr = []
    for p in sorted(pts):
        if not any((p[0] - q[0], p[1] - q[1]) in pts for q in pts if q != p):
            irr.append(p)
    return irr


def dp_lengths_1d(gens, x):
    """L(x) over a list of positive integers, by a table of sets."""
    table = [set() for _ in range(x + 1)]
    table[0].add(0)
    for v in range(1, x + 1):
        for g in gens:
            if g <= v:
                table[v] |= {k + 1 for k in table[v - g]}
    return sorted(table[x])
