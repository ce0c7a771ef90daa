import json
import random
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from factorcenter import serialization as ser
from factorcenter.errors import ValidationError
from factorcenter.gset import is_isomorphic, natural_gset
from factorcenter.links import dp5_chain_word, evaluate_word, metacyclic20, random_loop, random_model
from factorcenter.permgrp import cyclic_group, fano_group, klein_four, symmetric_group
from factorcenter.surface import LatticeAction, make_model, models_isomorphic

ROOT = Path(__file__).resolve().parents[1]


def test_shipped_schema_matches_package_copy():
    docs = json.loads((ROOT / "docs" / "schemas" / "factorcenter.schema.json").read_text())
    assert docs == ser.schema()


def test_builtin_groups():
    assert ser.group_from_json({"builtin": "klein4"}) == klein_four()
    assert ser.group_from_json({"builtin": "fano"}).order == 168
    assert ser.group_from_json({"builtin": "F20"}).order == 20
    assert ser.group_from_json({"builtin": "S4"}).order == 24
    assert ser.group_from_json({"builtin": "C6"}).order == 6
    with pytest.raises(ValidationError):
        ser.group_from_json({"builtin": "M11"})


def test_group_cycle_notation():
    G = ser.group_from_json({"degree": 4, "generators": ["(0 1)", "(2 3)"]})
    assert G.order == 4
    assert ser.group_from_json(ser.group_to_json(G)) == G


@pytest.mark.parametrize("doc", [
    {"degree": 3},
    {"degree": 3, "generators": [[0, 0, 1]]},
    {"degree": "3", "generators": []},
    {"degree": 3, "generators": [], "extra": 1},
])
def test_bad_group_json(doc):
    with pytest.raises(ValidationError):
        ser.group_from_json(doc)


def test_gset_roundtrip_and_errors():
    G = fano_group()
    A = natural_gset(G, "points")
    doc = ser.gset_to_json(A)
    B = ser.gset_from_json(json.loads(ser.dumps(doc)))
    assert B == A and B.name == "points"
    with pytest.raises(ValidationError):
        ser.gset_from_json({"size": 2, "action": [[1, 0]]})
    with pytest.raises(ValidationError):
        ser.gset_from_json({"size": 2, "action": [[1, 0], [0, 1]], "group": {"builtin": "C2"}})
    with pytest.raises(ValidationError, match="at size"):
        ser.gset_from_json({"size": -1, "action": [], "group": {"builtin": "C1"}})


@given(st.sampled_from(["dP9", "dP8", "C8", "dP6", "dP5"]),
       st.sampled_from([cyclic_group(2), klein_four(), symmetric_group(3), metacyclic20()]),
       st.integers(0, 10**6))
def test_model_and_word_roundtrip(tag, G, seed):
    rng = random.Random(seed)
    S = random_model(tag, G, rng)
    S2 = ser.model_from_json(json.loads(ser.dumps(ser.model_to_json(S))))
    assert models_isomorphic(S, S2)
    w = random_loop(S, rng, 8)
    w2 = ser.word_from_json(json.loads(ser.dumps(ser.word_to_json(w))))
    assert len(w2) == len(w)
    assert evaluate_word(w2).c == evaluate_word(w).c


def test_blowup_model_roundtrip():
    G = cyclic_group(3)
    act = LatticeAction.from_point_permutation(natural_gset(G), 6)
    S = make_model("P2Blowup", G, lattice_action=act)
    S2 = ser.model_from_json(ser.model_to_json(S))
    assert S2.lattice_action == act
    doc = {"tag": "P2Blowup", "galois": {"builtin": "C3"},
           "lattice_action": {"r": 6, "points": {"size": 3, "action": [[1, 2, 0]]}}}
    assert ser.model_from_json(doc).lattice_action == act


def test_dp5_chain_word_file_matches_library():
    doc = json.loads((ROOT / "docs" / "examples" / "dp5_chain_word.json").read_text())
    w = ser.word_from_json(doc)
    assert evaluate_word(w).formal() == evaluate_word(dp5_chain_word()).formal()
    for a, b in zip(w.moves, dp5_chain_word().moves):
        assert a.tag == b.tag
        if a.center is not None:
            assert is_isomorphic(a.center, b.center)


def test_bad_move_json():
    src = ser.model_to_json(make_model("dP9", cyclic_group(2)))
    with pytest.raises(ValidationError):
        ser.word_from_json({"source": src, "moves": [{"kind": "teleport"}]})
    with pytest.raises(ValidationError):
        ser.word_from_json({"source": src, "moves": [{"kind": "link", "payload": {"type": "II_D",
                                                                                  "a": 9, "d": 6, "b": 9}}]})


def test_dumps_is_deterministic():
    doc = {"b": 1, "a": [3, 2]}
    assert ser.dumps(doc) == ser.dumps(dict(reversed(list(doc.items()))))
    assert ser.dumps(doc).endswith("\n")
