"""Exact rational feasibility for small linear systems (dense simplex, Bland's rule)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Number = int | Fraction


def _phase_one(
    A: list[list[Fraction]], b: list[Fraction], nvars: int
) -> list[Fraction] | None:
    """Find ``x >= 0`` with ``A x = b`` (``b >= 0``) or return ``None``."""
    m = len(A)
    # columns: original vars, then one artificial per row
    width = nvars + m
    tab = [row[:] + [Fraction(int(i == k)) for k in range(m)] + [b[i]]
           for i, row in enumerate(A)]
    basis = [nvars + i for i in range(m)]
    # objective: minimise sum of artificials; reduced costs row
    cost = [Fraction(0)] * (width + 1)
    for i in range(m):
        for j in range(width + 1):
            cost[j] -= tab[i][j]
    for i in range(m):
        cost[nvars + i] += 1

    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        leave, best = None, None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][width] / a
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leave]
                ):
                    leave, best = i, ratio
        if leave is None:
            # unbounded direction cannot occur in phase one (objective >= 0)
            raise ArithmeticError("phase one unbounded")
        p = tab[leave][enter]
        tab[leave] = [x / p for x in tab[leave]]
        for i in range(m):
            if i != leave and tab[i][enter]:
                f = tab[i][enter]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[leave])]
        f = cost[enter]
        cost = [x - f * y for x, y in zip(cost, tab[leave])]
        basis[leave] = enter

    if -cost[width] != 0:
        return None
    x = [Fraction(0)] * nvars
    for i, j in enumerate(basis):
        if j < nvars:
            x[j] = tab[i][width]
    return x


def nonnegative_solution(
    A: Sequence[Sequence[Number]], b: Sequence[Number]
) -> list[Fraction] | None:
    """A point ``x >= 0`` with ``A x = b``, or ``None`` if there is none."""
    nvars = len(A[0]) if A else 0
    rows, rhs = [], []
    for r, v in zip(A, b):
        r = [Fraction(x) for x in r]
        v = Fraction(v)
        if v < 0:
            r, v = [-x for x in r], -v
        rows.append(r)
        rhs.append(v)
    if not rows:
        return [Fraction(0)] * nvars
    return _phase_one(rows, rhs, nvars)


def feasible_point(
    A: Sequence[Sequence[Number]], b: Sequence[Number]
) -> list[Fraction] | None:
    """A point ``x`` (free variables) with ``A x >= b`` componentwise, or ``None``."""
    if not A:
        return None
    n = len(A[0])
    # x = xp - xn, A xp - A xn - s = b
    rows = [list(r) + [-x for x in r] + [-int(i == k) for k in range(len(A))]
            for i, r in enumerate(A)]
    sol = nonnegative_solution(rows, b)
    if sol is None:
        return None
    return [sol[j] - sol[n + j] for j in range(n)]
