"""Toric morphisms: lattice maps compatible with fans.

Covers compatibility, generic finiteness, the set J of rays whose divisors
push forward to divisors, the spanning check on J, Stein factorization of
generically finite maps, split projective-bundle detection and fiber
products of bundles over P^1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import HypothesisError
from .exactla import (
    IntMatrix,
    Vector,
    det,
    invariant_factors,
    kernel_basis,
    primitive,
    rank,
    rational_inverse,
    solve_rational,
)
from .fan import (
    Fan,
    FanError,
    cone_contains,
    is_complete,
    relative_interior_point,
    validate_fan,
)


@dataclass(frozen=True)
class ToricMorphism:
    source: Fan
    target: Fan
    matrix: IntMatrix

    def __post_init__(self):
        if self.matrix.shape != (self.target.dim, self.source.dim):
            raise FanError(
                f"matrix shape {self.matrix.shape} does not match "
                f"lattice ranks ({self.target.dim}, {self.source.dim})"
            )

    def image(self, v: Sequence[int]) -> Vector:
        return self.matrix.apply(v)

    def compose(self, first: "ToricMorphism") -> "ToricMorphism":
        """``self ∘ first``."""
        return ToricMorphism(first.source, self.target, self.matrix @ first.matrix)


@dataclass(frozen=True)
class Compatibility:
    compatible: bool
    offending_cone: int | None = None

    def __bool__(self) -> bool:
        return self.compatible


@dataclass(frozen=True)
class BundleData:
    fiber_dim: int
    fiber_fan: Fan
    kernel_basis: tuple[Vector, ...]


def identity_morphism(f: Fan) -> ToricMorphism:
    return ToricMorphism(f, f, IntMatrix.identity(f.dim))


def _containing_cone(target: Fan, points: Sequence[Sequence[int]]) -> int | None:
    for k, c in enumerate(target.max_cones):
        gens = target.generators(c)
        if all(cone_contains(gens, p) for p in points):
            return k
    return None


def check_compatibility(m: ToricMorphism) -> Compatibility:
    for k, c in enumerate(m.source.max_cones):
        gens = m.source.generators(c)
        pts = [m.image(g) for g in gens]
        if gens:
            pts.append(m.image(relative_interior_point(gens)))
        if _containing_cone(m.target, pts) is None:
            return Compatibility(False, k)
    return Compatibility(True)


def _require_surjective(m: ToricMorphism, what: str) -> None:
    if not is_complete(m.source) or not is_complete(m.target):
        raise HypothesisError(f"{what}: source and target fans must be complete")
    if rank(m.matrix) != m.target.dim:
        raise HypothesisError(f"{what}: lattice map is not surjective over Q")
    if not check_compatibility(m):
        raise HypothesisError(f"{what}: lattice map is not compatible with the fans")


def is_generically_finite(m: ToricMorphism) -> tuple[bool, int]:
    """``(finite?, |det A|)``; the index is 0 when the map is not generically finite."""
    if not is_complete(m.source) or not is_complete(m.target):
        raise HypothesisError("surjectivity undecided: fans must be complete")
    if m.source.dim != m.target.dim:
        return False, 0
    d = abs(det(m.matrix))
    return d != 0, d


def minimal_cone(target: Fan, x: Sequence[int]) -> tuple[int, ...]:
    """Ray indices of the smallest cone of ``target`` containing ``x``."""
    if not any(x):
        return ()
    best: tuple[int, ...] | None = None
    for c in target.max_cones:
        gens = target.generators(c)
        if not cone_contains(gens, x):
            continue
        if rank(gens) == len(gens):
            coeffs = solve_rational(gens, x)
            face = tuple(sorted(c[i] for i, a in enumerate(coeffs) if a > 0))
        else:
            face = _minimal_face_general(target, c, x)
        if best is None or len(face) < len(best):
            best = face
    if best is None:
        raise HypothesisError(f"{list(x)} is not in the support of the target fan")
    return best


def _minimal_face_general(f: Fan, cone: Sequence[int], x: Sequence[int]) -> tuple[int, ...]:
    from .fan import cone_facets

    face = list(cone)
    while True:
        gens = f.generators(face)
        shrunk = False
        for facet in cone_facets(gens):
            sub = [face[j] for j in sorted(facet)]
            if cone_contains(f.generators(sub), x):
                face, shrunk = sub, True
                break
        if not shrunk:
            return tuple(sorted(face))


def _divisorial_by_rank(m: ToricMorphism, i: int) -> bool:
    e = m.source.rays[i]
    face = minimal_cone(m.target, m.image(e))
    span = m.target.generators(face)
    cols = m.matrix.columns() + list(span)
    induced = rank(cols) - (rank(span) if span else 0)
    return induced == m.target.dim - 1


def _divisorial_fast(m: ToricMorphism, i: int) -> bool:
    img = m.image(m.source.rays[i])
    if not any(img):
        return False
    return m.target.ray_index(primitive(img)) is not None


def J_of(m: ToricMorphism, method: str = "auto") -> list[int]:
    """Indices of source rays whose divisors map onto divisors of the target."""
    _require_surjective(m, "J undefined")
    finite = m.source.dim == m.target.dim and det(m.matrix) != 0
    if method == "fast" or (method == "auto" and finite):
        if not finite:
            raise HypothesisError("J undefined: fast path needs a generically finite map")
        test = _divisorial_fast
    elif method in ("rank", "auto"):
        test = _divisorial_by_rank
    else:
        raise ValueError(f"unknown method {method!r}")
    return [i for i in range(len(m.source.rays)) if test(m, i)]


def lemma1_check(m: ToricMorphism) -> bool:
    """The rays in J(m) span N over Q."""
    _require_surjective(m, "J-spanning check hypotheses unmet")
    if not is_generically_finite(m)[0]:
        raise HypothesisError("J-spanning check hypotheses unmet: map is not generically finite")
    J = J_of(m)
    return rank([m.source.rays[i] for i in J]) == m.source.dim if J else m.source.dim == 0


def stein_factor(m: ToricMorphism) -> tuple[ToricMorphism, ToricMorphism]:
    """Split a generically finite map into a refinement followed by a finite lattice map."""
    try:
        _require_surjective(m, "factorization unsupported")
    except HypothesisError as exc:
        raise HypothesisError(str(exc)) from None
    if not is_generically_finite(m)[0]:
        raise HypothesisError("factorization unsupported: map is not generically finite")
    inv = rational_inverse(m.matrix)
    n = m.source.dim
    pulled = [
        primitive([sum(inv[i][j] * r[j] for j in range(n)) for i in range(n)])
        for r in m.target.rays
    ]
    middle = Fan(n, pulled, m.target.max_cones)
    connected = ToricMorphism(m.source, middle, IntMatrix.identity(n))
    finite = ToricMorphism(middle, m.target, m.matrix)
    return connected, finite


def _fiber_fan(m: ToricMorphism) -> tuple[Fan, list[Vector]] | None:
    src = m.source
    K = kernel_basis(m.matrix)
    k = len(K)
    if k == 0:
        return None
    kern_rays = [i for i, r in enumerate(src.rays) if not any(m.image(r))]
    coords: dict[int, Vector] = {}
    for i in kern_rays:
        sol = solve_rational(K, src.rays[i])
        if sol is None or any(x.denominator != 1 for x in sol):
            return None
        coords[i] = tuple(int(x) for x in sol)
    faces = {tuple(sorted(i for i in c if i in coords)) for c in src.max_cones}
    maximal = [f for f in faces if not any(set(f) < set(g) for g in faces)]
    order = sorted(coords)
    pos = {i: p for p, i in enumerate(order)}
    fiber = Fan(k, [coords[i] for i in order], [tuple(pos[i] for i in f) for f in sorted(maximal)])
    return fiber, K


def is_split_bundle_morphism(m: ToricMorphism) -> BundleData | None:
    """Bundle data when the map looks like a split projective bundle, else None.

    Sufficient criterion: the lattice map is onto, the rays in its kernel
    form a projective-space fan, every maximal cone maps onto a maximal
    target cone with its other rays landing on distinct target ray
    generators, and the cone count is #target cones * (k + 1).
    """
    from .recognize import is_projective_space

    A = m.matrix
    if rank(A) != m.target.dim or any(d != 1 for d in invariant_factors(A)):
        return None
    if not check_compatibility(m):
        return None
    got = _fiber_fan(m)
    if got is None:
        return None
    fiber, K = got
    k = fiber.dim
    if not fiber.rays or not is_projective_space(fiber):
        return None
    if len(m.source.max_cones) != len(m.target.max_cones) * (k + 1):
        return None
    target_cones = {frozenset(c) for c in m.target.max_cones}
    fiber_cones = {frozenset(fiber.rays[i] for i in c) for c in fiber.max_cones}
    for c in m.source.max_cones:
        images = []
        kern = []
        for i in c:
            img = m.image(m.source.rays[i])
            if any(img):
                j = m.target.ray_index(img)
                if j is None:
                    return None
                images.append(j)
            else:
                kern.append(tuple(int(x) for x in solve_rational(K, m.source.rays[i])))
        if len(set(images)) != len(images) or frozenset(images) not in target_cones:
            return None
        if frozenset(kern) not in fiber_cones:
            return None
    return BundleData(k, fiber, tuple(K))


def fiber_product_fan(f: ToricMorphism, g: ToricMorphism) -> Fan:
    """Fan of Y ×_C Z for split-bundle morphisms f: Y -> C and g: Z -> C."""
    return fiber_product(f, g)[0]


def fiber_product(
    f: ToricMorphism, g: ToricMorphism
) -> tuple[Fan, ToricMorphism, ToricMorphism]:
    """Fiber product fan together with its two projections to Y and Z.

    The lattice is ker([A_f, -A_g]) ⊂ N_Y ⊕ N_Z, written in a saturated
    Hermite basis of that kernel.
    """
    if not f.target.same_as(g.target) or f.target.dim != g.target.dim:
        raise FanError("fiber product needs morphisms to the same base fan")
    if is_split_bundle_morphism(f) is None or is_split_bundle_morphism(g) is None:
        raise FanError("fiber product needs split-bundle morphisms")
    base = f.target
    ny, nz = f.source.dim, g.source.dim
    stacked = IntMatrix(
        [list(a) + [-x for x in b] for a, b in zip(f.matrix.rows, g.matrix.rows)],
        ncols=ny + nz,
    )
    B = kernel_basis(stacked)

    def coords(v: Sequence[int]) -> Vector:
        sol = solve_rational(B, v)
        if sol is None or any(x.denominator != 1 for x in sol):
            raise FanError("generator is not a lattice point of the fiber product")
        return primitive(sol)

    def split(m: ToricMorphism, cone: Sequence[int]):
        lifts, kern = {}, []
        for i in cone:
            img = m.image(m.source.rays[i])
            if any(img):
                lifts[base.ray_index(img)] = i
            else:
                kern.append(i)
        return lifts, kern

    rays: list[Vector] = []
    index: dict[Vector, int] = {}

    def ray_id(v: Sequence[int]) -> int:
        c = coords(v)
        if c not in index:
            index[c] = len(rays)
            rays.append(c)
        return index[c]

    cones = []
    zy, zz = (0,) * ny, (0,) * nz
    for tau in base.max_cones:
        over_y = [c for c in f.source.max_cones if set(split(f, c)[0]) == set(tau)]
        over_z = [c for c in g.source.max_cones if set(split(g, c)[0]) == set(tau)]
        for cy, cz in itertools.product(over_y, over_z):
            ly, ky = split(f, cy)
            lz, kz = split(g, cz)
            ids = [ray_id(f.source.rays[ly[t]] + g.source.rays[lz[t]]) for t in tau]
            ids += [ray_id(f.source.rays[i] + zz) for i in ky]
            ids += [ray_id(zy + g.source.rays[i]) for i in kz]
            cones.append(tuple(sorted(ids)))
    out = Fan(len(B), rays, cones)
    report = validate_fan(out)
    if not report.valid:
        raise FanError(f"fiber product produced an invalid fan: {report.issues}")
    to_y = IntMatrix.from_columns([b[:ny] for b in B], ny)
    to_z = IntMatrix.from_columns([b[ny:] for b in B], nz)
    return out, ToricMorphism(out, f.source, to_y), ToricMorphism(out, g.source, to_z)
