"""JSON encoding of groups, G-sets, models, words and results.

Inputs are checked against the bundled JSON Schema before they are turned
into objects, so malformed files fail with a :class:`ValidationError` that
names the offending path.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from typing import Any

import jsonschema
import numpy as np

from .errors import ValidationError
from .gset import BurnsideElement, GSet, GassmannPair, fixed_point_character, mu, orbits
from .links import LinkTag, Move, MoveWord, metacyclic20
from .nslattice import BlowupP2, ClassList
from .permgrp import (Group, Permutation, cyclic_group, fano_group, group_from_generators,
                      klein_four, symmetric_group)
from .surface import LatticeAction, SurfaceModel, make_model

SCHEMA_FILE = "factorcenter.schema.json"


@lru_cache(maxsize=1)
def schema() -> dict:
    return json.loads(resources.files("factorcenter").joinpath("schemas", SCHEMA_FILE).read_text())


def validate(doc: Any, kind: str):
    root = schema()
    sub = {"$schema": root["$schema"], "$defs": root["$defs"], "$ref": f"#/$defs/{kind}"}
    try:
        jsonschema.validate(doc, sub)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ValidationError(f"invalid {kind} JSON at {where}: {exc.message}") from None


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_default) + "\n"


def _default(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    raise TypeError(f"not JSON serializable: {type(x).__name__}")


# ---------------------------------------------------------------------------
# groups

BUILTINS = {"klein4": klein_four, "fano": fano_group, "F20": metacyclic20}


def builtin_group(name: str) -> Group:
    if name in BUILTINS:
        return BUILTINS[name]()
    if name[:1] in "SC" and name[1:].isdigit():
        n = int(name[1:])
        return symmetric_group(n) if name[0] == "S" else cyclic_group(n)
    raise ValidationError(f"unknown builtin group {name!r}")


def group_from_json(doc: dict) -> Group:
    validate(doc, "group")
    if "builtin" in doc:
        return builtin_group(doc["builtin"])
    n = doc["degree"]
    gens = []
    for g in doc["generators"]:
        if isinstance(g, str):
            gens.append(Permutation.parse(n, g))
        else:
            if sorted(g) != list(range(n)):
                raise ValidationError(f"generator {g} is not a permutation of 0..{n - 1}")
            gens.append(Permutation(tuple(g)))
    return group_from_generators(n, gens)


def group_to_json(G: Group) -> dict:
    return {"degree": G.degree, "generators": [list(g.images) for g in G.generators]}


# ---------------------------------------------------------------------------
# G-sets


def gset_from_json(doc: dict, group: Group | None = None) -> GSet:
    validate(doc, "gset")
    if "group" in doc:
        G = group_from_json(doc["group"])
        if group is not None and G != group:
            raise ValidationError("G-set group differs from the surrounding group")
    elif group is None:
        raise ValidationError("G-set JSON needs a group")
    else:
        G = group
    if len(doc["action"]) != len(G.generators):
        raise ValidationError(f"action lists {len(doc['action'])} images, group has "
                              f"{len(G.generators)} generators")
    return GSet(G, doc["size"], tuple(tuple(a) for a in doc["action"]), doc.get("name"))


def gset_to_json(A: GSet, with_group: bool = True) -> dict:
    out = {"size": A.size, "action": [list(a) for a in A.action]}
    if with_group:
        out["group"] = group_to_json(A.group)
    if A.name:
        out["name"] = A.name
    return out


def gset_summary(A: GSet) -> dict:
    out = gset_to_json(A)
    out["orbits"] = orbits(A)
    out["character"] = fixed_point_character(A).tolist()
    return out


def burnside_to_json(e: BurnsideElement) -> dict:
    return {"terms": e.describe(), "text": str(e), "character": mu(e).tolist(),
            "is_zero": e.is_zero()}


def gassmann_pair_to_json(p: GassmannPair) -> dict:
    shapes = p.orbit_shapes()
    return {"degree": p.degree, "A": gset_to_json(p.A, with_group=False),
            "B": gset_to_json(p.B, with_group=False),
            "character_A": fixed_point_character(p.A).tolist(),
            "character_B": fixed_point_character(p.B).tolist(),
            "orbit_shapes": [list(shapes[0]), list(shapes[1])],
            "isomorphic": p.isomorphic,
            "witness": {"stabilizer_classes_A": list(p.a_classes),
                        "stabilizer_classes_B": list(p.b_classes)}}


# ---------------------------------------------------------------------------
# models and words


def model_from_json(doc: dict) -> SurfaceModel:
    validate(doc, "model")
    G = group_from_json(doc["galois"])
    data = {k: gset_from_json(v, G).named(v.get("name", k)) for k, v in doc.get("data", {}).items()}
    stack = [gset_from_json(v, G) for v in doc.get("stack", [])]
    action = None
    if "lattice_action" in doc:
        la = doc["lattice_action"]
        if "points" in la:
            action = LatticeAction.from_point_permutation(gset_from_json(la["points"], G), la.get("r"))
        else:
            action = LatticeAction(BlowupP2(la["r"]), G, [np.array(m, dtype=np.int64) for m in la["matrices"]])
    return make_model(doc["tag"], G, stack=stack, severi_brauer=doc.get("severi_brauer", False),
                      lattice_action=action, **data)


def model_to_json(S: SurfaceModel) -> dict:
    out = {"tag": S.tag, "galois": group_to_json(S.galois),
           "data": {k: gset_to_json(A, with_group=False) for k, A in S.data},
           "stack": [gset_to_json(A, with_group=False) for A in S.stack]}
    if S.severi_brauer:
        out["severi_brauer"] = True
    if S.lattice_action is not None:
        out["lattice_action"] = {"r": S.lattice_action.lattice.r,
                                 "matrices": [m.tolist() for m in S.lattice_action.matrices]}
    return out


def move_from_json(doc: dict, G: Group) -> Move:
    kind = doc["kind"]
    payload = doc.get("payload", {})
    center = gset_from_json(payload["center"], G) if "center" in payload else None
    if kind == "link":
        tag = LinkTag(payload["type"], payload.get("a", 0), payload.get("d", 0), payload.get("b", 0))
        return Move("link", center, tag)
    return Move(kind, center)


def move_to_json(m: Move) -> dict:
    payload: dict = {}
    if m.tag is not None:
        payload.update(m.tag.to_json())
    if m.center is not None:
        payload["center"] = gset_to_json(m.center, with_group=False)
    return {"kind": m.kind, "payload": payload}


def word_from_json(doc: dict) -> MoveWord:
    validate(doc, "word")
    S = model_from_json(doc["source"])
    return MoveWord(S, tuple(move_from_json(m, S.galois) for m in doc.get("moves", [])))


def word_to_json(w: MoveWord) -> dict:
    return {"source": model_to_json(w.source), "moves": [move_to_json(m) for m in w.moves]}


def classlist_to_json(C: ClassList) -> dict:
    return C.to_json()
