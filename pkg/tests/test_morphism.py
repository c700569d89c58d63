import random

import pytest

from conftest import scale
from torickit.errors import HypothesisError
from torickit.exactla import IntMatrix, det
from torickit.fan import (
    hirzebruch_fan,
    is_complete,
    product_fan,
    projective_space_fan,
    refines,
    star_subdivision,
    validate_fan,
)
from torickit.generators import blowup_chain, desk_fiber_product, scaled_blowdown
from torickit.morphism import (
    J_of,
    ToricMorphism,
    check_compatibility,
    fiber_product_fan,
    identity_morphism,
    is_generically_finite,
    is_split_bundle_morphism,
    lemma1_check,
    minimal_cone,
    stein_factor,
)


def test_compatibility(blowdown, P2, P1xP1):
    assert check_compatibility(blowdown)
    assert check_compatibility(ToricMorphism(P2, P2, scale(2, 2)))
    bad = check_compatibility(ToricMorphism(P1xP1, P2, IntMatrix.identity(2)))
    assert not bad
    quadrant = P1xP1.max_cones[bad.offending_cone]
    assert {P1xP1.rays[i] for i in quadrant} == {(-1, 0), (0, -1)}


def test_generic_finiteness(blowdown, P2, P1xP1, P1):
    assert is_generically_finite(blowdown) == (True, 1)
    assert is_generically_finite(ToricMorphism(P2, P2, scale(2, 2))) == (True, 4)
    proj = ToricMorphism(P1xP1, P1, IntMatrix([[1, 0]]))
    assert is_generically_finite(proj) == (False, 0)


def test_generic_finiteness_needs_complete():
    from torickit.fan import affine_space_fan

    a = affine_space_fan(2)
    with pytest.raises(HypothesisError, match="surjectivity undecided"):
        is_generically_finite(identity_morphism(a))


def test_J(blowdown, P2):
    assert J_of(identity_morphism(P2)) == [0, 1, 2]
    J = J_of(blowdown)
    assert {blowdown.source.rays[i] for i in J} == {(1, 0), (0, 1), (-1, -1)}
    assert minimal_cone(P2, (1, 1)) == (0, 1)
    assert J_of(ToricMorphism(P2, P2, scale(2, 2))) == [0, 1, 2]


def test_J_non_finite(P1xP1, P1):
    proj = ToricMorphism(P1xP1, P1, IntMatrix([[1, 0]]))
    J = J_of(proj)
    assert {P1xP1.rays[i] for i in J} == {(1, 0), (-1, 0)}
    with pytest.raises(HypothesisError):
        J_of(proj, "fast")


@pytest.mark.parametrize("seed", range(15))
def test_J_fast_path_agrees_with_rank_formula(seed):
    rng = random.Random(seed)
    m = scaled_blowdown(rng.choice((2, 3)), rng.randint(0, 5), rng.randint(1, 3), seed)
    assert J_of(m, "fast") == J_of(m, "rank")


def test_lemma1(blowdown):
    assert lemma1_check(blowdown)
    for f in (projective_space_fan(3), hirzebruch_fan(2), blowup_chain(3, 4, 2)):
        assert lemma1_check(identity_morphism(f))
    m = scaled_blowdown(3, 5, 1, seed=77)
    assert lemma1_check(m)


def test_lemma1_hypotheses(P1xP1, P1):
    with pytest.raises(HypothesisError):
        lemma1_check(ToricMorphism(P1xP1, P1, IntMatrix([[1, 0]])))


def test_stein_blowdown(blowdown, P2):
    connected, finite = stein_factor(blowdown)
    assert connected.target.same_as(P2)
    assert finite.matrix == IntMatrix.identity(2)


def test_stein_scaling(P2):
    m = ToricMorphism(P2, P2, scale(2, 2))
    connected, finite = stein_factor(m)
    assert connected.target.same_as(P2)
    assert connected.matrix == IntMatrix.identity(2)
    assert abs(det(finite.matrix)) == 4


def test_stein_composite(blowup_P2, P2):
    m = ToricMorphism(blowup_P2, P2, scale(2, 3))
    connected, finite = stein_factor(m)
    assert not connected.source.same_as(connected.target)  # a real blowdown
    assert abs(det(finite.matrix)) == 9  # a real finite map
    assert set(connected.target.rays) == {m.source.rays[i] for i in J_of(m)}
    # composition equals m
    assert finite.compose(connected).matrix == m.matrix


@pytest.mark.parametrize("seed", range(8))
def test_stein_properties(seed):
    rng = random.Random(seed)
    m = scaled_blowdown(rng.choice((2, 3)), rng.randint(1, 5), rng.randint(1, 3), seed)
    connected, finite = stein_factor(m)
    middle = connected.target
    assert validate_fan(middle).valid and is_complete(middle)
    assert refines(m.source, middle) and check_compatibility(connected)
    assert check_compatibility(finite)
    # finite part is cone-bijective: every middle cone maps onto exactly one target cone
    images = set()
    for c in middle.max_cones:
        img = frozenset(
            m.target.ray_index(tuple(x // _content(finite.image(middle.rays[i])) for x in finite.image(middle.rays[i])))
            for i in c
        )
        images.add(img)
    assert images == {frozenset(c) for c in m.target.max_cones}
    assert set(middle.rays) == {m.source.rays[i] for i in J_of(m)}


def _content(v):
    from math import gcd

    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def test_stein_rejects_non_finite(P1xP1, P1):
    with pytest.raises(HypothesisError, match="factorization unsupported"):
        stein_factor(ToricMorphism(P1xP1, P1, IntMatrix([[1, 0]])))


def test_compatibility_preserved_under_composition():
    src = blowup_chain(2, 3, 4)
    P2 = projective_space_fan(2)
    m1 = ToricMorphism(src, P2, IntMatrix.identity(2))
    m2 = ToricMorphism(P2, P2, scale(2, 3))
    assert check_compatibility(m1) and check_compatibility(m2)
    assert check_compatibility(m2.compose(m1))


def test_split_bundles(P1xP1, P1, blowdown):
    b = is_split_bundle_morphism(ToricMorphism(P1xP1, P1, IntMatrix([[1, 0]])))
    assert b is not None and b.fiber_dim == 1
    for a in range(4):
        b = is_split_bundle_morphism(ToricMorphism(hirzebruch_fan(a), P1, IntMatrix([[1, 0]])))
        assert b is not None and b.fiber_dim == 1
    assert is_split_bundle_morphism(blowdown) is None


def test_split_bundle_higher_fiber():
    from torickit.fan import projectivized_split_bundle_fan

    base = projective_space_fan(2)
    f = projectivized_split_bundle_fan(base, [[1, 0, 0], [2, 0, 0]])
    A = IntMatrix([[1, 0, 0, 0], [0, 1, 0, 0]])
    b = is_split_bundle_morphism(ToricMorphism(f, base, A))
    assert b is not None and b.fiber_dim == 2


def test_fiber_product_desk():
    X, to_y, to_z = desk_fiber_product(1, 0)
    assert X.dim == 3 and len(X.rays) == 6
    assert check_compatibility(to_y) and check_compatibility(to_z)
    assert is_split_bundle_morphism(to_y) is not None
    assert is_split_bundle_morphism(to_z) is not None


def test_fiber_product_over_trivial_bundle_is_product(P1):
    proj = ToricMorphism(product_fan(P1, P1), P1, IntMatrix([[1, 0]]))
    X = fiber_product_fan(proj, proj)
    from torickit.recognize import find_isomorphism

    assert find_isomorphism(X, product_fan(product_fan(P1, P1), P1)) is not None
