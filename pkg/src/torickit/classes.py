"""Divisor classes and curve classes of a toric variety, read off the ray matrix.

The character lattice M maps to torus-invariant divisors by
``m -> (<m, e_ρ>)_ρ``; its cokernel is the class group (Pic for smooth
complete fans). The kernel of the ray matrix is the lattice of curve
classes, recorded through their intersection numbers with each D_ρ.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exactla import (
    IntMatrix,
    Vector,
    cokernel_invariants,
    hermite_rows,
    kernel_basis,
    rank,
    smith_normal_form,
)
from .errors import HypothesisError, SequenceError
from .fan import Fan, is_complete, is_smooth


@dataclass
class SequenceReport:
    n: int
    ray_count: int
    class_free_rank: int
    class_torsion: list[int]
    curve_space_rank: int
    exact_divisor_seq: bool
    exact_dual_seq: bool
    failures: list[str] = field(default_factory=list)

    @property
    def exact(self) -> bool:
        return self.exact_divisor_seq and self.exact_dual_seq

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "ray_count": self.ray_count,
            "class_free_rank": self.class_free_rank,
            "class_torsion": list(self.class_torsion),
            "curve_space_rank": self.curve_space_rank,
            "exact_divisor_seq": "exact" if self.exact_divisor_seq else "inexact",
            "exact_dual_seq": "exact" if self.exact_dual_seq else "inexact",
            "failures": list(self.failures),
        }


def character_map(f: Fan) -> IntMatrix:
    """The map M -> Div^T X, one row per ray (transpose of the ray matrix)."""
    return IntMatrix(f.rays, ncols=f.dim)


def divisor_class_group(f: Fan) -> tuple[int, list[int]]:
    """``(free rank, torsion invariant factors)`` of the class group."""
    if rank(list(f.rays)) != f.dim:
        raise SequenceError("sequence not left-exact: rays do not span N")
    return cokernel_invariants(character_map(f))


def picard_rank(f: Fan) -> int:
    return divisor_class_group(f)[0]


def curve_class_space(f: Fan) -> list[Vector]:
    """Saturated basis of curve classes; coordinate ρ is the intersection number with D_ρ."""
    if not f.rays:
        return []
    return kernel_basis(f.ray_matrix)


def class_map(f: Fan) -> IntMatrix:
    """Matrix sending a divisor vector to its class, in a canonical basis of the free part.

    Columns are the classes [D_ρ]. Torsion coordinates are dropped, so this
    is only the whole story when the class group is free.
    """
    P = character_map(f)
    snf = smith_normal_form(P)
    r = snf.rank
    free_rows = [snf.U.rows[i] for i in range(r, P.nrows)]
    return IntMatrix(hermite_rows(free_rows), ncols=P.nrows)


def verify_sequences(f: Fan) -> SequenceReport:
    """Check exactness of 0 -> M -> Div^T -> Cl -> 0 and of its dual."""
    n, R = f.dim, len(f.rays)
    failures: list[str] = []
    P = character_map(f)
    m_rank = rank(list(f.rays)) if f.rays else 0
    if m_rank != n:
        failures.append("M -> Div^T not injective")
    free, torsion = cokernel_invariants(P) if R else (0, [])

    Q = class_map(f) if R else IntMatrix.zeros(0, 0)
    if R and any(x for row in (Q @ P).rows for x in row):
        failures.append("Div^T -> Cl does not kill the image of M")
    if m_rank + free != R:
        failures.append("rank(M) + rank(Cl) != #rays")
    exact_div = not failures

    dual_failures: list[str] = []
    curves = curve_class_space(f)
    curve_rank = len(curves)
    for z in curves:
        if any(f.ray_matrix.apply(z)):
            dual_failures.append("curve class not in kernel of the ray matrix")
            break
    if curve_rank + n != R:
        dual_failures.append("rank(N_1) + n != #rays")
    if curve_rank != free:
        dual_failures.append("rank(N_1) != rank(Cl)")
    failures.extend(dual_failures)

    return SequenceReport(
        n=n,
        ray_count=R,
        class_free_rank=free,
        class_torsion=torsion,
        curve_space_rank=curve_rank,
        exact_divisor_seq=exact_div,
        exact_dual_seq=not dual_failures,
        failures=failures,
    )


def euler_jaczewski_summands(f: Fan) -> list[Vector]:
    """Classes [D_ρ] of the line-bundle summands of the potential sheaf, one per ray."""
    if not is_smooth(f) or not is_complete(f):
        raise HypothesisError("Jaczewski hypotheses violated: fan must be smooth and complete")
    Q = class_map(f)
    return Q.columns()
