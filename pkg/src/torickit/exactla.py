"""Exact integer linear algebra.

Everything here works on Python ints (arbitrary precision) and
``fractions.Fraction``; there is no floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Vector = tuple[int, ...]


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix stored as a tuple of rows."""

    rows: tuple[tuple[int, ...], ...]
    ncols: int

    def __init__(self, rows: Iterable[Iterable[int]], ncols: int | None = None):
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            if not data:
                raise ValueError("ncols required for a matrix with no rows")
            ncols = len(data[0])
        for r in data:
            if len(r) != ncols:
                raise ValueError("ragged matrix rows")
        object.__setattr__(self, "rows", data)
        object.__setattr__(self, "ncols", ncols)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int) -> "IntMatrix":
        return cls(
            [[c[i] for c in columns] for i in range(nrows)], ncols=len(columns)
        )

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], ncols=n)

    @classmethod
    def zeros(cls, m: int, n: int) -> "IntMatrix":
        return cls([[0] * n for _ in range(m)], ncols=n)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(
            [[r[j] for r in self.rows] for j in range(self.ncols)], ncols=self.nrows
        )

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.ncols)]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = other.columns()
        return IntMatrix(
            [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.rows],
            ncols=other.ncols,
        )

    def apply(self, v: Sequence[int]) -> Vector:
        if len(v) != self.ncols:
            raise ValueError("vector length does not match matrix")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self.rows)

    def select_columns(self, idx: Iterable[int]) -> "IntMatrix":
        idx = list(idx)
        return IntMatrix([[r[j] for j in idx] for r in self.rows], ncols=len(idx))

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def is_diagonal(self) -> bool:
        return all(
            x == 0 for i, r in enumerate(self.rows) for j, x in enumerate(r) if i != j
        )


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == D`` with ``U``, ``V`` unimodular and ``D`` in Smith form."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i, i] for i in range(min(self.D.shape))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)

    @property
    def invariant_factors(self) -> list[int]:
        return [d for d in self.diagonal if d != 0]


def _as_matrix(A: IntMatrix | Sequence[Sequence[int]]) -> IntMatrix:
    return A if isinstance(A, IntMatrix) else IntMatrix(A)


def smith_normal_form(A: IntMatrix | Sequence[Sequence[int]]) -> SmithDecomposition:
    """Smith normal form with unimodular transforms.

    Pivots on the smallest nonzero entry (in absolute value) of the
    remaining block, which keeps intermediate entries small.
    """
    A = _as_matrix(A)
    m, n = A.shape
    D = [list(r) for r in A.rows]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i: int, k: int) -> None:
        D[i], D[k] = D[k], D[i]
        U[i], U[k] = U[k], U[i]

    def swap_cols(j: int, k: int) -> None:
        for r in D:
            r[j], r[k] = r[k], r[j]
        for r in V:
            r[j], r[k] = r[k], r[j]

    def add_row(dst: int, src: int, q: int) -> None:
        # row_dst += q * row_src
        D[dst] = [a + q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst: int, src: int, q: int) -> None:
        for r in D:
            r[dst] += q * r[src]
        for r in V:
            r[dst] += q * r[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    x = D[i][j]
                    if x and (best is None or abs(x) < abs(D[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = D[t][t]
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
            if any(D[i][t] for i in range(t + 1, m)) or any(
                D[t][j] for j in range(t + 1, n)
            ):
                continue
            bad = next(
                (
                    i
                    for i in range(t + 1, m)
                    for j in range(t + 1, n)
                    if D[i][j] % p
                ),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if best is None:
            break
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]

    return SmithDecomposition(
        IntMatrix(U, ncols=m), IntMatrix(D, ncols=n), IntMatrix(V, ncols=n)
    )


def invariant_factors(A: IntMatrix | Sequence[Sequence[int]]) -> list[int]:
    return smith_normal_form(A).invariant_factors


def rank(A: IntMatrix | Sequence[Sequence[int]]) -> int:
    """Rank over Q by fraction-free elimination."""
    rows = [list(r) for r in (A.rows if isinstance(A, IntMatrix) else A)]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        for i in range(r + 1, len(rows)):
            if rows[i][c]:
                f = rows[i][c]
                rows[i] = [p * a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def det(A: IntMatrix | Sequence[Sequence[int]]) -> int:
    """Determinant by Bareiss fraction-free elimination."""
    M = [list(r) for r in _as_matrix(A).rows]
    n = len(M)
    if any(len(r) != n for r in M):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def hermite_rows(rows: Sequence[Sequence[int]]) -> list[Vector]:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Returns the nonzero rows: echelon, positive pivots, entries above each
    pivot reduced into ``[0, pivot)``.
    """
    M = [list(r) for r in rows]
    if not M:
        return []
    ncols = len(M[0])
    r = 0
    for c in range(ncols):
        while True:
            nz = [i for i in range(r, len(M)) if M[i][c]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(M[i][c]))
            M[r], M[piv] = M[piv], M[r]
            done = True
            for i in range(r + 1, len(M)):
                if M[i][c]:
                    q = M[i][c] // M[r][c]
                    M[i] = [a - q * b for a, b in zip(M[i], M[r])]
                    if M[i][c]:
                        done = False
            if done:
                break
        if r < len(M) and M[r][c]:
            if M[r][c] < 0:
                M[r] = [-a for a in M[r]]
            for i in range(r):
                q = M[i][c] // M[r][c]
                if q:
                    M[i] = [a - q * b for a, b in zip(M[i], M[r])]
            r += 1
            if r == len(M):
                break
    return [tuple(row) for row in M[:r]]


def saturate(rows: Sequence[Sequence[int]]) -> list[Vector]:
    """Basis (as rows) of the saturation ``Q<rows> ∩ Z^n``."""
    if not rows:
        return []
    snf = smith_normal_form(IntMatrix(rows))
    k = snf.rank
    # rows of D V^{-1} span the same lattice as rows of U A; the first k rows
    # of V^{-1} span the saturation
    Vinv = inverse_unimodular(snf.V)
    return [Vinv.rows[i] for i in range(k)]


def kernel_basis(A: IntMatrix | Sequence[Sequence[int]]) -> list[Vector]:
    """Saturated basis of the integer kernel ``{v : A v = 0}``, in Hermite form."""
    A = _as_matrix(A)
    snf = smith_normal_form(A)
    r = snf.rank
    raw = [snf.V.column(j) for j in range(r, A.ncols)]
    basis = hermite_rows(saturate(raw)) if raw else []
    return basis


def cokernel_invariants(A: IntMatrix | Sequence[Sequence[int]]) -> tuple[int, list[int]]:
    """``coker(A) = Z^free ⊕ ⊕ Z/t_i``; returns ``(free, [t_i > 1])``."""
    A = _as_matrix(A)
    snf = smith_normal_form(A)
    return A.nrows - snf.rank, [d for d in snf.invariant_factors if d > 1]


def inverse_unimodular(A: IntMatrix) -> IntMatrix:
    inv = rational_inverse(A)
    out = []
    for r in inv:
        if any(x.denominator != 1 for x in r):
            raise ValueError("matrix is not unimodular")
        out.append([int(x) for x in r])
    return IntMatrix(out, ncols=A.ncols)


def rational_inverse(A: IntMatrix | Sequence[Sequence[int]]) -> list[list[Fraction]]:
    A = _as_matrix(A)
    n = A.nrows
    if A.ncols != n:
        raise ValueError("inverse of a non-square matrix")
    M = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)]
         for i, r in enumerate(A.rows)]
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        M[c], M[piv] = M[piv], M[c]
        p = M[c][c]
        M[c] = [x / p for x in M[c]]
        for i in range(n):
            if i != c and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return [r[n:] for r in M]


def solve_rational(
    columns: Sequence[Sequence[int]], target: Sequence[int]
) -> list[Fraction] | None:
    """Solve ``sum_i x_i columns[i] = target`` over Q.

    Returns one solution (free variables set to zero) or ``None`` when the
    system is inconsistent.
    """
    k = len(columns)
    n = len(target)
    M = [[Fraction(columns[j][i]) for j in range(k)] + [Fraction(target[i])]
         for i in range(n)]
    pivots = []
    r = 0
    for c in range(k):
        piv = next((i for i in range(r, n) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        p = M[r][c]
        M[r] = [x / p for x in M[r]]
        for i in range(n):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    if any(M[i][k] for i in range(r, n)):
        return None
    x = [Fraction(0)] * k
    for i, c in enumerate(pivots):
        x[c] = M[i][k]
    return x


def content(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def primitive(v: Sequence[int | Fraction]) -> Vector:
    """Primitive integer vector on the ray through ``v`` (``v`` nonzero)."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = content(ints)
    if g == 0:
        raise ValueError("zero vector has no primitive generator")
    return tuple(x // g for x in ints)


def is_primitive(v: Sequence[int]) -> bool:
    return content(v) == 1


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))
