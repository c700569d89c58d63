"""Rational polyhedral fans in a lattice N = Z^n.

A fan is stored as its primitive ray generators plus the maximal cones,
each cone a tuple of ray indices. All tests are exact.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import lp
from .exactla import (
    IntMatrix,
    Vector,
    det,
    dot,
    invariant_factors,
    is_primitive,
    kernel_basis,
    rank,
    smith_normal_form,
    solve_rational,
)

COMPLETENESS_SAMPLES = 100
COMPLETENESS_SEED = 20260


class FanError(ValueError):
    """Malformed fan data or an operation applied outside its domain."""


@dataclass(frozen=True)
class Fan:
    dim: int
    rays: tuple[Vector, ...]
    max_cones: tuple[tuple[int, ...], ...]

    def __init__(
        self,
        dim: int,
        rays: Iterable[Sequence[int]],
        max_cones: Iterable[Iterable[int]],
    ):
        rays = tuple(tuple(int(x) for x in r) for r in rays)
        cones = tuple(tuple(int(i) for i in c) for c in max_cones)
        if dim < 0:
            raise FanError("rank must be nonnegative")
        for k, r in enumerate(rays):
            if len(r) != dim:
                raise FanError(f"ray {k} has length {len(r)}, expected {dim}")
        for k, c in enumerate(cones):
            for i in c:
                if not 0 <= i < len(rays):
                    raise FanError(f"cone {k} refers to missing ray {i}")
            if len(set(c)) != len(c):
                raise FanError(f"cone {k} repeats a ray index")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "max_cones", cones)

    @property
    def ray_matrix(self) -> IntMatrix:
        return IntMatrix.from_columns(self.rays, self.dim)

    def generators(self, cone: Iterable[int]) -> list[Vector]:
        return [self.rays[i] for i in cone]

    def cones_with_ray(self, i: int) -> list[int]:
        return [k for k, c in enumerate(self.max_cones) if i in c]

    def canonical(self) -> tuple[int, frozenset, frozenset]:
        """Order-free form: two fans are equal iff their canonical forms are."""
        return (
            self.dim,
            frozenset(self.rays),
            frozenset(frozenset(self.rays[i] for i in c) for c in self.max_cones),
        )

    def same_as(self, other: "Fan") -> bool:
        return self.canonical() == other.canonical()

    def ray_index(self, v: Sequence[int]) -> int | None:
        v = tuple(v)
        for i, r in enumerate(self.rays):
            if r == v:
                return i
        return None


@dataclass(frozen=True)
class Cone:
    ray_indices: tuple[int, ...]
    generators: tuple[Vector, ...]

    @classmethod
    def of(cls, fan: Fan, indices: Iterable[int]) -> "Cone":
        idx = tuple(sorted(indices))
        return cls(idx, tuple(fan.rays[i] for i in idx))

    @property
    def dim(self) -> int:
        return rank(list(self.generators)) if self.generators else 0

    @property
    def is_simplicial(self) -> bool:
        return self.dim == len(self.generators)


@dataclass
class ValidationReport:
    issues: list[tuple[str, str]] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.issues

    def add(self, kind: str, detail: str) -> None:
        self.issues.append((kind, detail))


# -- cone geometry ---------------------------------------------------------

def is_pointed(gens: Sequence[Sequence[int]]) -> bool:
    if not gens:
        return True
    if rank(list(gens)) == len(gens):
        return True
    n = len(gens[0])
    # pointed iff no convex combination of generators is zero
    A = [[g[i] for g in gens] for i in range(n)] + [[1] * len(gens)]
    b = [0] * n + [1]
    return lp.nonnegative_solution(A, b) is None


def cone_contains(gens: Sequence[Sequence[int]], x: Sequence[int | Fraction]) -> bool:
    """Exact membership of ``x`` in the cone generated by ``gens``."""
    if not any(x):
        return True
    if not gens:
        return False
    if rank(list(gens)) == len(gens):
        coeffs = solve_rational(gens, x)
        return coeffs is not None and all(c >= 0 for c in coeffs)
    n = len(x)
    A = [[g[i] for g in gens] for i in range(n)]
    return lp.nonnegative_solution(A, list(x)) is not None


def simplicial_coefficients(
    gens: Sequence[Sequence[int]], x: Sequence[int | Fraction]
) -> list[Fraction] | None:
    """Coefficients of ``x`` in linearly independent ``gens``; None if ``x`` is off the span."""
    return solve_rational(gens, x)


def cone_facets(gens: Sequence[Sequence[int]]) -> list[frozenset[int]]:
    """Facets of a pointed cone, as sets of positions into ``gens``."""
    k = len(gens)
    if k == 0:
        return []
    d = rank(list(gens))
    if d == k:
        return [frozenset(j for j in range(k) if j != i) for i in range(k)]
    n = len(gens[0])
    orth = kernel_basis(IntMatrix(gens, ncols=n))
    orth_rank = len(orth)
    facets: set[frozenset[int]] = set()
    for sub in itertools.combinations(range(k), d - 1):
        sub_gens = [gens[j] for j in sub]
        if d > 1 and rank(sub_gens) != d - 1:
            continue
        normals = kernel_basis(IntMatrix(sub_gens, ncols=n)) if sub_gens else [
            tuple(int(i == j) for j in range(n)) for i in range(n)
        ]
        normal = next(
            (u for u in normals if rank(list(orth) + [u]) > orth_rank), None
        )
        if normal is None:
            continue
        vals = [dot(normal, g) for g in gens]
        if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
            facets.add(frozenset(j for j, v in enumerate(vals) if v == 0))
    return sorted(facets, key=sorted)


def cone_multiplicity(gens: Sequence[Sequence[int]] | Cone) -> int:
    """Lattice index of the generators inside the saturated sublattice they span."""
    if isinstance(gens, Cone):
        gens = gens.generators
    gens = list(gens)
    if not gens:
        return 1
    if rank(gens) != len(gens):
        raise FanError("multiplicity undefined: cone is not simplicial")
    out = 1
    for d in invariant_factors(IntMatrix(gens)):
        out *= d
    return out


def relative_interior_point(gens: Sequence[Sequence[int]]) -> Vector:
    n = len(gens[0])
    return tuple(sum(g[i] for g in gens) for i in range(n))


# -- validation and predicates ---------------------------------------------

def _bad_intersection(f: Fan, a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    common = set(a) & set(b)
    only_a = [i for i in a if i not in common]
    only_b = [i for i in b if i not in common]
    if not only_a and not only_b:
        return False
    ga = f.generators(a)
    gb = f.generators(b)
    n = f.dim
    # lambda, mu >= 0 with sum(lambda g) = sum(mu h) and weight on non-shared rays
    rows = [[g[i] for g in ga] + [-h[i] for h in gb] for i in range(n)]
    rows.append([int(j not in common) for j in a] + [int(j not in common) for j in b])
    return lp.nonnegative_solution(rows, [0] * n + [1]) is not None


def validate_fan(f: Fan) -> ValidationReport:
    report = ValidationReport()
    seen: dict[Vector, int] = {}
    for i, r in enumerate(f.rays):
        if not any(r):
            report.add("zero ray", f"ray {i}")
        elif not is_primitive(r):
            report.add("non-primitive ray", f"ray {i} = {list(r)}")
        if r in seen:
            report.add("duplicate ray", f"rays {seen[r]} and {i}")
        seen.setdefault(r, i)
    if not report.valid:
        return report

    cone_sets = [frozenset(c) for c in f.max_cones]
    for k, c in enumerate(f.max_cones):
        gens = f.generators(c)
        if not is_pointed(gens):
            report.add("non-pointed cone", f"cone {k}")
            continue
        if len(gens) > rank(gens):
            for j, g in enumerate(gens):
                if cone_contains(gens[:j] + gens[j + 1:], g):
                    report.add("redundant generator", f"ray {c[j]} in cone {k}")
    for j, k in itertools.combinations(range(len(cone_sets)), 2):
        if cone_sets[j] == cone_sets[k]:
            report.add("duplicate cone", f"cones {j} and {k}")
        elif cone_sets[j] < cone_sets[k] or cone_sets[k] < cone_sets[j]:
            report.add("non-maximal cone", f"cones {j} and {k}")
    if not report.valid:
        return report

    for j, k in itertools.combinations(range(len(f.max_cones)), 2):
        if _bad_intersection(f, f.max_cones[j], f.max_cones[k]):
            report.add("bad intersection", f"cones {j} and {k}")
    return report


def is_simplicial(f: Fan) -> bool:
    return all(Cone.of(f, c).is_simplicial for c in f.max_cones)


def is_smooth(f: Fan) -> bool:
    return all(
        Cone.of(f, c).is_simplicial and cone_multiplicity(f.generators(c)) == 1
        for c in f.max_cones
    )


def _ridge_criterion(f: Fan) -> bool:
    n = f.dim
    if n == 0:
        return True
    if not f.max_cones:
        return False
    ridges: dict[frozenset[int], list[int]] = {}
    for k, c in enumerate(f.max_cones):
        gens = f.generators(c)
        if not gens or rank(gens) != n:
            return False
        for facet in cone_facets(gens):
            ridges.setdefault(frozenset(c[j] for j in facet), []).append(k)
    if any(len(v) != 2 for v in ridges.values()):
        return False
    adj: dict[int, set[int]] = {k: set() for k in range(len(f.max_cones))}
    for a, b in ridges.values():
        adj[a].add(b)
        adj[b].add(a)
    seen, stack = {0}, [0]
    while stack:
        for nb in adj[stack.pop()]:
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == len(f.max_cones)


def sample_directions(dim: int, count: int, seed: int, bound: int = 97) -> list[Vector]:
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        v = tuple(rng.randint(-bound, bound) for _ in range(dim))
        if any(v):
            out.append(v)
    return out


def in_support(f: Fan, x: Sequence[int | Fraction]) -> bool:
    return any(cone_contains(f.generators(c), x) for c in f.max_cones)


def sampled_coverage(
    f: Fan, samples: int = COMPLETENESS_SAMPLES, seed: int = COMPLETENESS_SEED
) -> bool:
    return all(in_support(f, v) for v in sample_directions(f.dim, samples, seed))


def is_complete(f: Fan) -> bool:
    """Support is all of N_R: ridge criterion, cross-checked by sampled directions."""
    if f.dim == 0:
        return True
    ridge = _ridge_criterion(f)
    if not ridge:
        return False
    if not sampled_coverage(f):
        raise FanError(
            "ridge criterion and sampled coverage disagree; fan is not a valid fan"
        )
    return True


def refines(fine: Fan, coarse: Fan) -> bool:
    """Every cone of ``fine`` lies inside some cone of ``coarse``."""
    if fine.dim != coarse.dim:
        return False
    for c in fine.max_cones:
        gens = fine.generators(c)
        if not any(
            all(cone_contains(coarse.generators(d), g) for g in gens)
            for d in coarse.max_cones
        ):
            return False
    return True


def same_support_sampled(f: Fan, g: Fan, samples: int = 100, seed: int = 7) -> bool:
    return all(
        in_support(f, v) == in_support(g, v)
        for v in sample_directions(f.dim, samples, seed)
    )


# -- constructions ---------------------------------------------------------

def projective_space_fan(n: int) -> Fan:
    if n < 1:
        raise FanError("projective space needs n >= 1")
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    rays.append(tuple([-1] * n))
    return Fan(n, rays, itertools.combinations(range(n + 1), n))


def simplex_fan(rays: Sequence[Sequence[int]]) -> Fan:
    """Fan over the proper faces of the simplex spanned by n+1 rays (weighted projective spaces)."""
    n = len(rays) - 1
    return Fan(n, rays, itertools.combinations(range(n + 1), n))


def hirzebruch_fan(a: int) -> Fan:
    return Fan(2, [(1, 0), (0, 1), (-1, a), (0, -1)], [(0, 1), (1, 2), (2, 3), (0, 3)])


def affine_space_fan(n: int) -> Fan:
    return Fan(n, [tuple(int(i == j) for j in range(n)) for i in range(n)], [tuple(range(n))])


def product_fan(f1: Fan, f2: Fan) -> Fan:
    z1, z2 = (0,) * f1.dim, (0,) * f2.dim
    rays = [r + z2 for r in f1.rays] + [z1 + r for r in f2.rays]
    off = len(f1.rays)
    cones = [
        tuple(c1) + tuple(off + i for i in c2)
        for c1 in f1.max_cones
        for c2 in f2.max_cones
    ]
    return Fan(f1.dim + f2.dim, rays, cones)


def transform_fan(f: Fan, T: IntMatrix) -> Fan:
    """Image of the fan under a lattice automorphism (same ray order and cones)."""
    if T.shape != (f.dim, f.dim) or abs(det(T)) != 1:
        raise FanError("transform must be unimodular of the fan's rank")
    return Fan(f.dim, [T.apply(r) for r in f.rays], f.max_cones)


def star_subdivision(f: Fan, v: Sequence[int]) -> Fan:
    """Stellar subdivision (toric blowup) at the primitive vector ``v``."""
    v = tuple(int(x) for x in v)
    if len(v) != f.dim:
        raise FanError("vector length does not match fan rank")
    if not is_primitive(v):
        raise FanError(f"{list(v)} is not a primitive lattice vector")
    if f.ray_index(v) is not None:
        return f
    touched = [k for k, c in enumerate(f.max_cones) if cone_contains(f.generators(c), v)]
    if not touched:
        raise FanError(f"{list(v)} is not in the support of the fan")
    new_index = len(f.rays)
    cones: list[tuple[int, ...]] = []
    for k, c in enumerate(f.max_cones):
        if k not in touched:
            cones.append(c)
            continue
        gens = f.generators(c)
        for facet in cone_facets(gens):
            facet_gens = [gens[j] for j in sorted(facet)]
            if cone_contains(facet_gens, v):
                continue
            cones.append(tuple(sorted(c[j] for j in facet)) + (new_index,))
    return Fan(f.dim, list(f.rays) + [v], cones)


def projectivized_split_bundle_fan(base: Fan, twists: Sequence[Sequence[int]]) -> Fan:
    """Fan of P(O ⊕ O(D_1) ⊕ ... ⊕ O(D_k)) over the toric base.

    Each twist lists the coefficient of every base ray in an equivariant
    divisor D_i. Lattice is N_base ⊕ Z^k; base rays lift to
    (e_ρ, -D_1(ρ), ..., -D_k(ρ)).
    """
    k = len(twists)
    if k < 1:
        raise FanError("at least one twist is required")
    for t in twists:
        if len(t) != len(base.rays):
            raise FanError("each twist needs one coefficient per base ray")
    n = base.dim
    lifts = [
        tuple(base.rays[r]) + tuple(-int(t[r]) for t in twists)
        for r in range(len(base.rays))
    ]
    fiber = [(0,) * n + tuple(int(i == j) for j in range(k)) for i in range(k)]
    fiber.append((0,) * n + tuple([-1] * k))
    off = len(lifts)
    cones = [
        tuple(c) + tuple(off + i for i in range(k + 1) if i != skip)
        for c in base.max_cones
        for skip in range(k + 1)
    ]
    return Fan(n + k, lifts + fiber, cones)


# -- resolution ------------------------------------------------------------

def _lex_key(f: Fan):
    return lambda i: f.rays[i]


def _pulling(f: Fan, cone: Sequence[int]) -> list[tuple[int, ...]]:
    gens = f.generators(cone)
    if rank(gens) == len(gens):
        return [tuple(sorted(cone))]
    apex = min(cone, key=_lex_key(f))
    out = []
    for facet in cone_facets(gens):
        face = [cone[j] for j in sorted(facet)]
        if apex in face:
            continue
        for simplex in _pulling(f, face):
            out.append(tuple(sorted(simplex + (apex,))))
    return out


def triangulate(f: Fan) -> Fan:
    """Pulling triangulation of every non-simplicial cone (global lex order on rays)."""
    if is_simplicial(f):
        return f
    cones: list[tuple[int, ...]] = []
    for c in f.max_cones:
        for s in _pulling(f, c):
            if s not in cones:
                cones.append(s)
    return Fan(f.dim, f.rays, cones)


def parallelepiped_points(gens: Sequence[Sequence[int]]) -> list[tuple[Vector, tuple[Fraction, ...]]]:
    """Nonzero lattice points ``sum λ_i g_i`` with ``0 <= λ_i < 1`` (``gens`` independent)."""
    A = IntMatrix.from_columns(gens, len(gens[0]))
    snf = smith_normal_form(A)
    k = len(gens)
    d = snf.diagonal[:k]
    if any(x == 0 for x in d):
        raise FanError("generators are not linearly independent")
    out = []
    for ys in itertools.product(*(range(x) for x in d)):
        if not any(ys):
            continue
        mu = [Fraction(y, x) for y, x in zip(ys, d)]
        lam = [sum(snf.V[i, j] * mu[j] for j in range(k)) % 1 for i in range(k)]
        point = tuple(
            int(sum(lam[i] * gens[i][r] for i in range(k))) for r in range(len(gens[0]))
        )
        out.append((point, tuple(lam)))
    return out


def multiplicity_profile(f: Fan) -> list[int]:
    return sorted((cone_multiplicity(f.generators(c)) for c in f.max_cones), reverse=True)


def resolution_point(f: Fan) -> Vector | None:
    """Subdivision point for one resolution step, or None if the fan is smooth."""
    worst, worst_cone = 1, None
    for c in sorted(f.max_cones, key=lambda c: tuple(sorted(c))):
        m = cone_multiplicity(f.generators(c))
        if m > worst:
            worst, worst_cone = m, c
    if worst_cone is None:
        return None
    pts = parallelepiped_points(f.generators(sorted(worst_cone)))
    return min(pts, key=lambda p: (sum(p[1]), p[0]))[0]


def resolve(f: Fan, history: list[list[int]] | None = None) -> Fan:
    """Smooth refinement with the same support.

    ``history``, when given, receives the multiplicity profile before each
    step and after the last one.
    """
    g = triangulate(f)
    while True:
        if history is not None:
            history.append(multiplicity_profile(g))
        v = resolution_point(g)
        if v is None:
            return g
        g = star_subdivision(g, v)
