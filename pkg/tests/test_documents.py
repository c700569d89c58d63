import json

import pytest
from hypothesis import given, settings, strategies as st

from torickit.documents import (
    DocumentError,
    dumps,
    fan_to_doc,
    loads_fan,
    loads_morphism,
    morphism_to_doc,
)
from torickit.generators import complete_surface_corpus, desk_fiber_product, smooth_complete_corpus
from torickit.morphism import ToricMorphism
from torickit.exactla import IntMatrix


def test_fan_round_trip_corpus():
    corpus = {**smooth_complete_corpus(), **complete_surface_corpus()}
    for name, f in corpus.items():
        text = dumps(fan_to_doc(f))
        assert loads_fan(text) == f, name
        assert dumps(fan_to_doc(loads_fan(text))) == text


def test_morphism_round_trip():
    _, f, g = desk_fiber_product(2, 1)
    for m in (f, g):
        back = loads_morphism(dumps(morphism_to_doc(m)))
        assert back.source == m.source and back.target == m.target
        assert back.matrix == m.matrix


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-5, 5), min_size=2, max_size=2), min_size=1, max_size=6))
def test_ray_lists_round_trip(rays):
    doc = {"rank": 2, "rays": rays, "max_cones": [[i] for i in range(len(rays))]}
    text = json.dumps(doc)
    f = loads_fan(text)
    assert json.loads(dumps(fan_to_doc(f))) == doc


@pytest.mark.parametrize(
    "text,location",
    [
        ('{"rank": 2, "rays": [[1, 0], [0, "x"]], "max_cones": [[0, 1]]}', "$.rays[1][1]"),
        ('{"rank": 2, "rays": [[1, 0]], "max_cones": [[0, 3]]}', "$.max_cones[0][1]"),
        ('{"rank": 2, "rays": [[1, 0, 0]], "max_cones": [[0]]}', "$.rays[0]"),
        ('{"rank": 2, "rays": [[1, 0]]}', "$"),
        ('{"rank": 2, "rays": [[1, 0]], "max_cones": [[0]], "extra": 1}', "$"),
        ('[1, 2]', "$"),
        ('{"rank": true, "rays": [], "max_cones": []}', "$.rank"),
    ],
)
def test_malformed_fan_locations(text, location):
    with pytest.raises(DocumentError) as info:
        loads_fan(text)
    assert info.value.location == location


def test_syntax_error_location():
    with pytest.raises(DocumentError) as info:
        loads_fan('{"rank": 2,\n "rays": [[1, 0],,]}')
    assert info.value.location.startswith("$:2:")


def test_morphism_shape_error():
    P1 = fan_to_doc(smooth_complete_corpus()["P1"])
    P2 = fan_to_doc(smooth_complete_corpus()["P2"])
    doc = {"source": P2, "target": P1, "matrix": [[1, 0], [0, 1]]}
    with pytest.raises(DocumentError) as info:
        loads_morphism(json.dumps(doc))
    assert info.value.location == "$.matrix"


def test_dumps_is_deterministic():
    from fractions import Fraction

    a = dumps({"b": [Fraction(1, 2)], "a": (1, 2)})
    assert a == '{"a": [1, 2], "b": [[1, 2]]}'
