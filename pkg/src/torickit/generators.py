"""Seeded generators for fans and morphisms, plus the named smooth corpus."""

from __future__ import annotations

import itertools
import random
from functools import cmp_to_key

from .exactla import IntMatrix, det, primitive
from .fan import (
    Fan,
    hirzebruch_fan,
    product_fan,
    projective_space_fan,
    projectivized_split_bundle_fan,
    simplex_fan,
    star_subdivision,
)
from .morphism import ToricMorphism, fiber_product


def random_unimodular(n: int, rng: random.Random, steps: int = 8) -> IntMatrix:
    M = [[int(i == j) for j in range(n)] for i in range(n)]
    if n == 1:
        return IntMatrix([[rng.choice((1, -1))]])
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        q = rng.choice((-2, -1, 1, 2))
        M[i] = [a + q * b for a, b in zip(M[i], M[j])]
        if rng.random() < 0.3:
            M[i], M[j] = M[j], M[i]
    T = IntMatrix(M)
    assert abs(det(T)) == 1
    return T


def random_blowup(f: Fan, rng: random.Random) -> Fan:
    """Star subdivision at the sum of the generators of a random face of dim >= 2."""
    cone = rng.choice(f.max_cones)
    size = rng.randint(2, len(cone)) if len(cone) >= 2 else 1
    face = rng.sample(sorted(cone), size)
    v = [sum(f.rays[i][t] for i in face) for t in range(f.dim)]
    return star_subdivision(f, primitive(v))


def blowup_chain(n: int, steps: int, seed: int) -> Fan:
    rng = random.Random(seed)
    f = projective_space_fan(n)
    for _ in range(steps):
        f = random_blowup(f, rng)
    return f


def _angle_cmp(u, v) -> int:
    def half(w):
        return 0 if (w[1] > 0 or (w[1] == 0 and w[0] > 0)) else 1

    hu, hv = half(u), half(v)
    if hu != hv:
        return hu - hv
    cross = u[0] * v[1] - u[1] * v[0]
    return -1 if cross > 0 else (1 if cross < 0 else 0)


def random_complete_surface_fan(rng: random.Random, k: int = 5, bound: int = 4) -> Fan:
    """Complete 2-dimensional fan on ``k`` random primitive rays (usually singular)."""
    while True:
        rays = set()
        while len(rays) < k:
            v = (rng.randint(-bound, bound), rng.randint(-bound, bound))
            if any(v):
                rays.add(primitive(v))
        rays = sorted(rays, key=cmp_to_key(_angle_cmp))
        ok = all(
            rays[i][0] * rays[(i + 1) % k][1] - rays[i][1] * rays[(i + 1) % k][0] > 0
            for i in range(k)
        )
        if ok:
            return Fan(2, rays, [tuple(sorted((i, (i + 1) % k))) for i in range(k)])


def random_simplex_fan(n: int, rng: random.Random, bound: int = 3) -> Fan:
    """Complete fan over a random simplex containing the origin (fake weighted projective space)."""
    while True:
        vs = [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)]
        if det(IntMatrix(vs)) == 0:
            continue
        weights = [rng.randint(1, 3) for _ in range(n)]
        last = [-sum(w * v[t] for w, v in zip(weights, vs)) for t in range(n)]
        rays = [primitive(v) for v in vs] + [primitive(last)]
        if len(set(rays)) == n + 1:
            return simplex_fan(rays)


def random_singular_fan(n: int, rng: random.Random) -> Fan:
    from .fan import is_smooth

    while True:
        f = random_complete_surface_fan(rng) if n == 2 else random_simplex_fan(n, rng)
        if not is_smooth(f):
            return f


def scaled_blowdown(n: int, steps: int, scale: int, seed: int) -> ToricMorphism:
    """Blowup chain of P^n followed by multiplication by ``scale``, onto P^n."""
    src = blowup_chain(n, steps, seed)
    A = IntMatrix([[scale * int(i == j) for j in range(n)] for i in range(n)])
    return ToricMorphism(src, projective_space_fan(n), A)


def p1_bundle_projection(fan: Fan) -> ToricMorphism:
    """Projection of a 2-dim bundle over P^1 written with base coordinate first."""
    return ToricMorphism(fan, projective_space_fan(1), IntMatrix([[1, 0]]))


def desk_fiber_product(a: int, b: int) -> tuple[Fan, ToricMorphism, ToricMorphism]:
    """F_a ×_{P^1} F_b with its two projections."""
    return fiber_product(
        p1_bundle_projection(hirzebruch_fan(a)), p1_bundle_projection(hirzebruch_fan(b))
    )


def smooth_complete_corpus() -> dict[str, Fan]:
    P = projective_space_fan
    F = hirzebruch_fan
    corpus: dict[str, Fan] = {}
    for n in range(1, 5):
        corpus[f"P{n}"] = P(n)
    for a in range(4):
        corpus[f"F{a}"] = F(a)
    corpus["P1xP1"] = product_fan(P(1), P(1))
    corpus["P1xP2"] = product_fan(P(1), P(2))
    corpus["P2xP2"] = product_fan(P(2), P(2))
    corpus["F1xP1"] = product_fan(F(1), P(1))
    corpus["F2xP1"] = product_fan(F(2), P(1))
    corpus["P1xP1xP1"] = product_fan(product_fan(P(1), P(1)), P(1))
    for n, steps, seed in itertools.product((2, 3), (1, 3, 5), (11, 12)):
        corpus[f"Bl{steps}P{n}-s{seed}"] = blowup_chain(n, steps, seed)
    corpus["Bl2P4-s5"] = blowup_chain(4, 2, 5)
    corpus["P(O+O(1)+O(2))/P1"] = projectivized_split_bundle_fan(P(1), [[1, 0], [2, 0]])
    corpus["P(O+O(1))/P2"] = projectivized_split_bundle_fan(P(2), [[1, 0, 0]])
    corpus["P(O+O(1)+O(1))/P2"] = projectivized_split_bundle_fan(P(2), [[1, 0, 0], [0, 1, 0]])
    corpus["P(O+O(D))/F1"] = projectivized_split_bundle_fan(F(1), [[1, 0, 1, 0]])
    corpus["F1x_P1F0"] = desk_fiber_product(1, 0)[0]
    corpus["F2x_P1F1"] = desk_fiber_product(2, 1)[0]
    return corpus


def complete_surface_corpus(count: int = 10, seed: int = 3) -> dict[str, Fan]:
    """Complete 2-dimensional fans: smooth corpus members plus singular ones."""
    out = {k: v for k, v in smooth_complete_corpus().items() if v.dim == 2}
    out["P(1,1,2)"] = simplex_fan([(1, 0), (0, 1), (-1, -2)])
    out["P(1,2,3)"] = simplex_fan([(1, 0), (0, 1), (-2, -3)])
    rng = random.Random(seed)
    for i in range(count):
        out[f"random-surface-{i}"] = random_complete_surface_fan(rng)
    return out
