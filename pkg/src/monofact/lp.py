"""A small exact two-phase simplex over Fractions.

Bland's rule (lowest eligible index enters, lowest basic index leaves among
ratio ties) rules out cycling, and every pivot is exact, so optima come out
as reduced rationals.  Sizes here are tiny (tens of rows, a few hundred
columns); the dense tableau is fine.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence


class InfeasibleError(ValueError):
    pass


class UnboundedError(ValueError):
    pass


@dataclass(frozen=True)
class LPSolution:
    value: Fraction
    x: tuple
    basis: tuple


def _pivot(T: List[List[Fraction]], basis: List[int], row: int, col: int) -> None:
    piv = T[row][col]
    T[row] = [v / piv for v in T[row]]
    pr = T[row]
    for i, r in enumerate(T):
        if i != row and r[col]:
            f = r[col]
            T[i] = [a - f * b for a, b in zip(r, pr)]
    basis[row] = col


def _optimize(T, basis, obj, allowed) -> None:
    """Maximize obj . x over the tableau in place (rhs in the last column)."""
    rhs = len(T[0]) - 1
    while True:
        entering = None
        for j in allowed:
            if j in basis:
                continue
            reduced = obj[j] - sum(obj[basis[i]] * T[i][j] for i in range(len(T)) if T[i][j])
            if reduced > 0:
                entering = j
                break
        if entering is None:
            return
        best = None
        for i, r in enumerate(T):
            if r[entering] > 0:
                ratio = r[rhs] / r[entering]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            raise UnboundedError("objective is unbounded")
        _pivot(T, basis, best[1], entering)


def linprog_max(c: Sequence, A_eq: Sequence[Sequence], b_eq: Sequence, phase_one_only: bool = False) -> LPSolution:
    """Maximize c.x subject to A_eq x = b_eq, x >= 0, exactly.

    With ``phase_one_only`` the first feasible basic solution is returned
    (its value is then c.x at that point).
    """
    m, n = len(A_eq), len(c)
    T = []
    for row, b in zip(A_eq, b_eq):
        row = [Fraction(v) for v in row]
        b = Fraction(b)
        if b < 0:
            row, b = [-v for v in row], -b
        T.append(row + [Fraction(0)] * m + [b])
    for i in range(m):
        T[i][n + i] = Fraction(1)
    basis = list(range(n, n + m))
    phase1 = [Fraction(0)] * n + [Fraction(-1)] * m
    _optimize(T, basis, phase1, range(n + m))
    if any(T[i][-1] for i in range(m) if basis[i] >= n):
        raise InfeasibleError("constraints are infeasible")
    # drive zero-level artificials out of the basis; drop redundant rows
    i = 0
    while i < len(T):
        if basis[i] >= n:
            col = next((j for j in range(n) if T[i][j] != 0), None)
            if col is None:
                del T[i]
                del basis[i]
                continue
            _pivot(T, basis, i, col)
        i += 1
    for r in T:
        del r[n : n + m]
    obj = [Fraction(v) for v in c]
    if not phase_one_only:
        _optimize(T, basis, obj, range(n))
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        x[j] = T[i][-1]
    return LPSolution(sum((a * b for a, b in zip(obj, x)), Fraction(0)), tuple(x), tuple(basis))


def feasible_point(A_eq: Sequence[Sequence], b_eq: Sequence) -> Optional[tuple]:
    """A basic solution of A_eq x = b_eq, x >= 0, or None."""
    n = len(A_eq[0]) if A_eq else 0
    try:
        return linprog_max([0] * n, A_eq, b_eq, phase_one_only=True).x
    except InfeasibleError:
        return None


def rank(rows: Sequence[Sequence]) -> int:
    """Exact rank by Gaussian elimination."""
    M = [[Fraction(v) for v in r] for r in rows]
    r = 0
    cols = len(M[0]) if M else 0
    for col in range(cols):
        piv = next((i for i in range(r, len(M)) if M[i][col] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(r + 1, len(M)):
            if M[i][col]:
                f = M[i][col] / M[r][col]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        r += 1
    return r
