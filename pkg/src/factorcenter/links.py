"""Sarkisov-link bookkeeping and the factorization center c.

A word of moves starts at a :class:`SurfaceModel`. Blow-ups push their
center on the model's stack, blow-downs pop an isomorphic center, and links
(which require an empty stack) replace the model according to a fixed table.
Every blow-up contributes ``+[Z]`` and every blow-down ``-[Z]`` to
``c``, an element of the Burnside ring of the Galois group.

Link table (type II between del Pezzo models, written a <- d -> b). The
columns give the blown-up center, the blown-down center and the target data.
"W" is a free center supplied with the move, "pt" a rational point.

=========  ========  =============  ===========================
link       blow-up   blow-down      target
=========  ========  =============  ===========================
9<-7->8    W (2)     pt             dP8, Z2 = W
8<-7->9    pt        Z2             dP9
9<-4->5    W (5)     pt             dP5, Z5 = W
5<-4->9    pt        Z5             dP9
9<-3->9    W (6)     copy of W      dP9
8<-5->6    W (3)     pt             dP6, Z2 kept, Z3 = W
6<-5->8    pt        Z3             dP8, Z2 = source Z2
8<-4->8    W (4)     copy of W      dP8, Z2 kept
8<-3->5    W (5)     Z2             dP5, Z5 = W
5<-3->8    W (2)     Z5             dP8, Z2 = W
6<-4->6    W (2)     Z2             dP6, Z2 = W, Z3 kept
6<-3->6    W (3)     Z3             dP6, Z2 kept, Z3 = W
a<-2->a    W (a-2)   copy of W      unchanged (Geiser)
a<-1->a    W (a-1)   copy of W      unchanged (Bertini)
=========  ========  =============  ===========================

Type I (9->8, 9->5, 8->6) blows up a center of degree a - b and produces a
conic bundle; type III undoes it. IIC (elementary transformation) blows up
a free center and blows down an isomorphic one; IV changes nothing.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import ValidationError
from .gset import (BurnsideElement, GSet, burnside_canonicalize, coset_gset, disjoint_union,
                   fixed_point_character, has_fixed_point, is_gassmann, is_isomorphic, mu,
                   orbits, remove_fixed_point, trivial_gset)
from .nslattice import (BlowupP2, DivisorClass, anticanonical_degree, intersection,
                        neg_one_classes)
from .permgrp import Group
from .surface import (SurfaceModel, has_conic_bundle, make_model, models_isomorphic,
                      ns_character, virtual_ns_set)

LINK_KINDS = ("I", "II_C", "II_D", "III", "IV")
TYPE_I = {(9, 8), (9, 5), (8, 6)}
TYPE_III = {(8, 9), (5, 9), (6, 8)}
DP_TAG = {9: "dP9", 8: "dP8", 6: "dP6", 5: "dP5"}
DEGREE_OF_TAG = {"dP9": 9, "dP8": 8, "dP6": 6, "dP5": 5, "C8": 8}


@dataclass(frozen=True)
class DRow:
    delta: int
    blowup: str    # "W" or "pt"
    blowdown: str  # "W" (copy of the blown-up center), "pt", or a data key of the source


# Degree-3 and degree-4 rows come with the anticanonical degree delta of the
# contracted curves; the d >= 5 rows close the chains through dP8 and dP6.
II_D_TABLE: dict[tuple[int, int, int], DRow] = {
    (9, 7, 8): DRow(3, "W", "pt"),
    (8, 7, 9): DRow(2, "pt", "Z2"),
    (9, 4, 5): DRow(6, "W", "pt"),
    (5, 4, 9): DRow(2, "pt", "Z5"),
    (9, 3, 9): DRow(6, "W", "W"),
    (8, 5, 6): DRow(4, "W", "pt"),
    (6, 5, 8): DRow(2, "pt", "Z3"),
    (8, 4, 8): DRow(4, "W", "W"),
    (8, 3, 5): DRow(6, "W", "Z2"),
    (5, 3, 8): DRow(3, "W", "Z5"),
    (6, 4, 6): DRow(3, "W", "Z2"),
    (6, 3, 6): DRow(4, "W", "Z3"),
}
for _a in (9, 8, 6, 5):
    for _d in (1, 2):
        II_D_TABLE[(_a, _d, _a)] = DRow(0, "W", "W")

# the rows listed in the delta claim (degree 3 and 4 surfaces Y)
DELTA_CLAIM_ROWS = ((9, 4, 5), (9, 3, 9), (8, 4, 8), (8, 3, 5), (6, 4, 6), (6, 3, 6), (5, 4, 9),
                    (5, 3, 8))


@dataclass(frozen=True)
class LinkTag:
    kind: str
    a: int = 0
    d: int = 0
    b: int = 0

    def __post_init__(self):
        if self.kind not in LINK_KINDS:
            raise ValidationError(f"unknown link type {self.kind!r}")
        if self.kind == "II_D" and (self.a, self.d, self.b) not in II_D_TABLE:
            raise ValidationError(f"no II_D link {self.a}<-{self.d}->{self.b} in the table")
        if self.kind == "I" and (self.a, self.b) not in TYPE_I:
            raise ValidationError(f"no type I link {self.a} -> {self.b}")
        if self.kind == "III" and (self.a, self.b) not in TYPE_III:
            raise ValidationError(f"no type III link {self.a} -> {self.b}")

    @property
    def bertini(self) -> bool:
        return self.kind == "II_D" and self.d == 1

    @property
    def geiser(self) -> bool:
        return self.kind == "II_D" and self.d == 2

    @property
    def row(self) -> DRow:
        return II_D_TABLE[(self.a, self.d, self.b)]

    @property
    def center_sizes(self) -> tuple[int, int]:
        """Degrees of the blown-up and blown-down centers."""
        if self.kind == "II_D":
            return self.a - self.d, self.b - self.d
        if self.kind == "I":
            return self.a - self.b, 0
        if self.kind == "III":
            return 0, self.b - self.a
        return 0, 0

    def label(self) -> str:
        if self.kind == "II_D":
            return f"{self.a}<-{self.d}->{self.b}"
        if self.kind in ("I", "III"):
            return f"{self.kind}:{self.a}->{self.b}"
        return self.kind

    def to_json(self) -> dict:
        return {"type": self.kind, "a": self.a, "d": self.d, "b": self.b}


def II_D(a: int, d: int, b: int) -> LinkTag:  # noqa: N802
    return LinkTag("II_D", a, d, b)


@dataclass(frozen=True)
class Move:
    kind: str  # blowup | blowdown | link | isom
    center: GSet | None = None
    tag: LinkTag | None = None

    def __post_init__(self):
        if self.kind not in ("blowup", "blowdown", "link", "isom"):
            raise ValidationError(f"unknown move kind {self.kind!r}")
        if self.kind in ("blowup", "blowdown") and self.center is None:
            raise ValidationError(f"{self.kind} needs a center")
        if self.kind == "link" and self.tag is None:
            raise ValidationError("link move needs a tag")

    def describe(self) -> str:
        if self.kind == "link":
            extra = f" W={_name(self.center)}" if self.center is not None else ""
            return f"link {self.tag.label()}{extra}"
        if self.kind == "isom":
            return "isom"
        return f"{self.kind} {_name(self.center)}"


def BlowUp(center: GSet) -> Move:  # noqa: N802
    return Move("blowup", center)


def BlowDown(center: GSet) -> Move:  # noqa: N802
    return Move("blowdown", center)


def Link(tag: LinkTag, center: GSet | None = None) -> Move:  # noqa: N802
    return Move("link", center, tag)


def Isom() -> Move:  # noqa: N802
    return Move("isom")


@dataclass(frozen=True)
class MoveWord:
    source: SurfaceModel
    moves: tuple[Move, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "moves", tuple(self.moves))

    def __add__(self, other: "MoveWord") -> "MoveWord":
        return MoveWord(self.source, self.moves + other.moves)

    def __len__(self) -> int:
        return len(self.moves)


def _name(A: GSet | None) -> str:
    if A is None:
        return "-"
    return A.name or f"<{A.size}>"


def _prime(A: GSet) -> GSet:
    return A.named((A.name or "Z") + "'")


def rational_point(G: Group) -> GSet:
    return trivial_gset(G, 1, name="k")


# ---------------------------------------------------------------------------
# link semantics


@dataclass(frozen=True)
class LinkResult:
    target: SurfaceModel
    blowup: GSet | None
    blowdown: GSet | None


def _need_center(t: LinkTag, W: GSet | None, size: int, S: SurfaceModel) -> GSet:
    if W is None:
        raise ValidationError(f"link {t.label()} needs a center of degree {size}")
    if W.group != S.galois:
        raise ValidationError("link center is over a different Galois group")
    if W.size != size:
        raise ValidationError(f"link {t.label()} needs a center of degree {size}, got {W.size}")
    if S.severi_brauer and any(len(o) % 3 for o in orbits(W)):
        raise ValidationError("a Severi-Brauer surface has no points of degree prime to 3")
    return W


def _no_point_on_sb(S: SurfaceModel, t: LinkTag):
    if S.severi_brauer:
        raise ValidationError(f"link {t.label()} blows up a rational point; a Severi-Brauer surface has none")


def apply_link(S: SurfaceModel, t: LinkTag, center: GSet | None = None) -> LinkResult:
    """Target model and the two centers of the link ``t`` started at ``S``."""
    if S.stack:
        raise ValidationError("links start from a minimal model; blow down the stack first")
    G = S.galois
    if S.tag == "P2Blowup":
        raise ValidationError("P2Blowup models take no links")
    pt = rational_point(G)

    if t.kind == "IV":
        if not has_conic_bundle(S):
            raise ValidationError(f"type IV needs a conic bundle model, got {S.tag}")
        if center is not None:
            raise ValidationError("type IV takes no center")
        return LinkResult(S, None, None)

    if t.kind == "II_C":
        if not has_conic_bundle(S):
            raise ValidationError(f"type IIC needs a conic bundle model, got {S.tag}")
        if center is None:
            raise ValidationError("type IIC needs a center")
        W = _need_center(t, center, center.size, S)
        return LinkResult(S, W, _prime(W))

    if t.kind == "I":
        if S.tag != DP_TAG[t.a]:
            raise ValidationError(f"link {t.label()} starts at {DP_TAG[t.a]}, not {S.tag}")
        if (t.a, t.b) == (9, 8):
            _no_point_on_sb(S, t)
            if center is not None and not is_isomorphic(center, pt):
                raise ValidationError("type I 9->8 blows up a rational point")
            return LinkResult(make_model("C8", G), pt, None)
        if (t.a, t.b) == (9, 5):
            W = _need_center(t, center, 4, S)
            return LinkResult(make_model("dP5", G, Z5=disjoint_union(W, pt, name="Z5")), W, None)
        W = _need_center(t, center, 2, S)
        Z3 = disjoint_union(S.get("Z2"), pt, name="Z3")
        return LinkResult(make_model("dP6", G, Z2=W.named("Z2"), Z3=Z3), W, None)

    if t.kind == "III":
        if center is not None:
            raise ValidationError("type III takes no center")
        src = {8: "C8", 5: "dP5", 6: "dP6"}[t.a]
        if S.tag != src:
            raise ValidationError(f"link {t.label()} starts at {src}, not {S.tag}")
        target_tag = DP_TAG[t.b]
        if t.a == 8:
            return LinkResult(make_model(target_tag, G), None, pt.named("k'"))
        if t.a == 5:
            Z5 = S.get("Z5")
            if not has_fixed_point(Z5):
                raise ValidationError("type III from dP5 needs a fixed conic pencil")
            return LinkResult(make_model("dP9", G), None, remove_fixed_point(Z5, name="Z4'"))
        Z3 = S.get("Z3")
        if not has_fixed_point(Z3):
            raise ValidationError("type III from dP6 needs a fixed conic pencil")
        Z2 = remove_fixed_point(Z3, name="Z2")
        return LinkResult(make_model("dP8", G, Z2=Z2), None, _prime(S.get("Z2")))

    # II_D
    if S.tag != DP_TAG[t.a]:
        raise ValidationError(f"link {t.label()} starts at {DP_TAG[t.a]}, not {S.tag}")
    row = t.row
    up_size, down_size = t.center_sizes
    if row.blowup == "pt":
        _no_point_on_sb(S, t)
        if center is not None:
            raise ValidationError(f"link {t.label()} takes no center")
        up = pt
    else:
        up = _need_center(t, center, up_size, S)
    if row.blowdown == "W":
        down = _prime(up)
    elif row.blowdown == "pt":
        down = pt.named("k'")
    else:
        down = _prime(S.get(row.blowdown))
    if down.size != down_size:
        raise AssertionError("link table inconsistent with center sizes")

    key = (t.a, t.d, t.b)
    if t.a == t.b and row.blowdown == "W":
        target = S
    elif key == (9, 7, 8):
        target = make_model("dP8", G, Z2=up.named(up.name or "Z2"))
    elif key in ((8, 7, 9), (5, 4, 9)):
        target = make_model("dP9", G)
    elif key == (9, 4, 5) or key == (8, 3, 5):
        target = make_model("dP5", G, Z5=up.named(up.name or "Z5"))
    elif key == (5, 3, 8):
        target = make_model("dP8", G, Z2=up.named(up.name or "Z2"))
    elif key == (8, 5, 6):
        target = make_model("dP6", G, Z2=S.get("Z2"), Z3=up.named(up.name or "Z3"))
    elif key == (6, 5, 8):
        target = make_model("dP8", G, Z2=S.get("Z2"))
    elif key == (6, 4, 6):
        target = make_model("dP6", G, Z2=up.named(up.name or "Z2"), Z3=S.get("Z3"))
    elif key == (6, 3, 6):
        target = make_model("dP6", G, Z2=S.get("Z2"), Z3=up.named(up.name or "Z3"))
    else:  # pragma: no cover
        raise AssertionError(f"unhandled link {key}")
    return LinkResult(target, up, down)


def link_mu_balance(source: SurfaceModel, target: SurfaceModel, blowup: GSet | None,
                    blowdown: GSet | None) -> bool:
    """mu(A_target) + chi(blowdown) == mu(A_source) + chi(blowup)."""
    left = mu(virtual_ns_set(target))
    right = mu(virtual_ns_set(source))
    if blowdown is not None:
        left = left + fixed_point_character(blowdown)
    if blowup is not None:
        right = right + fixed_point_character(blowup)
    return bool(np.array_equal(left, right))


def verify_link_mu(S: SurfaceModel, t: LinkTag, center: GSet | None = None) -> bool:
    res = apply_link(S, t, center)
    return link_mu_balance(S, res.target, res.blowup, res.blowdown)


def applicable_links(S: SurfaceModel) -> list[LinkTag]:
    """Every table link whose source matches S (centers still to be chosen)."""
    if S.stack or S.tag == "P2Blowup":
        return []
    out = []
    a = DEGREE_OF_TAG[S.tag]
    if S.tag != "C8":
        for (sa, d, b) in sorted(II_D_TABLE):
            if sa == a:
                t = II_D(sa, d, b)
                row = t.row
                if S.severi_brauer and (row.blowup == "pt" or (a - d) % 3):
                    continue
                out.append(t)
        for (sa, b) in sorted(TYPE_I):
            if sa == a and not (S.severi_brauer):
                out.append(LinkTag("I", sa, 0, b))
    for (sa, b) in sorted(TYPE_III):
        src = {8: "C8", 5: "dP5", 6: "dP6"}[sa]
        if src == S.tag:
            key = {"dP5": "Z5", "dP6": "Z3"}.get(S.tag)
            if key is None or has_fixed_point(S.get(key)):
                out.append(LinkTag("III", sa, 0, b))
    if has_conic_bundle(S):
        out.append(LinkTag("II_C", a, 0, a))
        out.append(LinkTag("IV", a, 0, a))
    return out


# ---------------------------------------------------------------------------
# words and c


@dataclass
class CenterLedger:
    """Signed centers in the order they occurred: +1 blow-up, -1 blow-down."""

    group: Group
    events: list[tuple[int, GSet]] = field(default_factory=list)

    @property
    def blowups(self) -> list[GSet]:
        return [Z for s, Z in self.events if s > 0]

    @property
    def blowdowns(self) -> list[GSet]:
        return [Z for s, Z in self.events if s < 0]

    def add(self, sign: int, Z: GSet):
        self.events.append((sign, Z))

    @property
    def c(self) -> BurnsideElement:
        return burnside_canonicalize(self.group, self.blowups, self.blowdowns)

    def formal(self) -> str:
        """Readable ledger such as ``[Z2] - [Z2'] + [Z5] - [Z5']``.

        Matching pairs of rational points (named k and k') cancel.
        """
        ups = sum(1 for s, Z in self.events if s > 0 and _is_rational_point(Z))
        downs = sum(1 for s, Z in self.events if s < 0 and _is_rational_point(Z))
        skip = {1: min(ups, downs), -1: min(ups, downs)}
        terms = []
        for s, Z in self.events:
            if _is_rational_point(Z) and skip[s] > 0:
                skip[s] -= 1
                continue
            terms.append((s, _name(Z)))
        # keep each center next to its primed counterpart
        first: dict[str, int] = {}
        for pos, (_, nm) in enumerate(terms):
            first.setdefault(nm.rstrip("'"), pos)
        terms.sort(key=lambda t: first[t[1].rstrip("'")])
        parts = [("+ " if s > 0 else "- ") + f"[{nm}]" for s, nm in terms]
        if not parts:
            return "0"
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def to_json(self) -> dict:
        return {"blowups": [_name(Z) for Z in self.blowups],
                "blowdowns": [_name(Z) for Z in self.blowdowns],
                "formal": self.formal()}


def _is_rational_point(Z: GSet) -> bool:
    return Z.size == 1 and (Z.name or "").rstrip("'") == "k"


@dataclass
class WordEvaluation:
    final: SurfaceModel
    ledger: CenterLedger
    trace: list[str]

    @property
    def c(self) -> BurnsideElement:
        return self.ledger.c

    def formal(self) -> str:
        return self.ledger.formal()


def evaluate_word(w: MoveWord) -> WordEvaluation:
    """Run the word, checking each move against the running model."""
    S = w.source
    G = S.galois
    ledger = CenterLedger(G)
    trace = [f"start {S.describe()}"]
    for pos, mv in enumerate(w.moves):
        try:
            if mv.kind == "blowup":
                if mv.center.group != G:
                    raise ValidationError("center is over a different Galois group")
                if S.severi_brauer and any(len(o) % 3 for o in orbits(mv.center)):
                    raise ValidationError("a Severi-Brauer surface has no points of degree prime to 3")
                S = S.push(mv.center)
                ledger.add(1, mv.center)
            elif mv.kind == "blowdown":
                S = _pop_isomorphic(S, mv.center)
                ledger.add(-1, mv.center)
            elif mv.kind == "link":
                res = apply_link(S, mv.tag, mv.center)
                if res.blowup is not None:
                    ledger.add(1, res.blowup)
                if res.blowdown is not None:
                    ledger.add(-1, res.blowdown)
                S = res.target
        except ValidationError as exc:
            raise ValidationError(f"move {pos} ({mv.describe()}): {exc}") from None
        trace.append(f"{mv.describe()} -> {S.describe()}")
    return WordEvaluation(S, ledger, trace)


def _pop_isomorphic(S: SurfaceModel, Z: GSet) -> SurfaceModel:
    if Z.group != S.galois:
        raise ValidationError("center is over a different Galois group")
    for i in range(len(S.stack) - 1, -1, -1):
        if is_isomorphic(S.stack[i], Z):
            return replace(S, stack=S.stack[:i] + S.stack[i + 1:])
    raise ValidationError("no blown-up center isomorphic to the one being contracted")


def c_of_word(w: MoveWord) -> BurnsideElement:
    return evaluate_word(w).c


def inverse_word(w: MoveWord) -> MoveWord:
    """Reverse word from the final model back to the source (links excluded)."""
    ev = evaluate_word(w)
    moves = []
    for mv in reversed(w.moves):
        if mv.kind == "blowup":
            moves.append(BlowDown(mv.center))
        elif mv.kind == "blowdown":
            moves.append(BlowUp(mv.center))
        elif mv.kind == "isom":
            moves.append(mv)
        else:
            raise ValidationError("inverse_word handles blow-ups, blow-downs and isomorphisms only")
    return MoveWord(ev.final, tuple(moves))


def low_degree_expected_c(G: Group, rk_src: int, rk_tgt: int) -> BurnsideElement:
    """(rk_tgt - rk_src) [pt] for links between minimal low-degree surfaces."""
    return BurnsideElement.point(G, rk_tgt - rk_src)


def rationality_center(w: MoveWord) -> BurnsideElement:
    """c of a word starting at the plane, plus [pt]."""
    if w.source.tag != "dP9" or w.source.stack:
        raise ValidationError("rationality centers are computed from words starting at the plane")
    if w.source.severi_brauer:
        raise ValidationError("the source must be the plane itself, not a Severi-Brauer surface")
    return c_of_word(w) + BurnsideElement.point(w.source.galois)


# ---------------------------------------------------------------------------
# delta certificates


@dataclass
class DeltaReport:
    tag: LinkTag
    delta: int
    expected_count: int
    new_point_classes: list[DivisorClass]
    contracted: list[DivisorClass]
    pairwise_disjoint: bool
    degrees_on_source: list[int]
    ok: bool

    def to_json(self) -> dict:
        return {"link": self.tag.label(), "delta": self.delta, "expected_count": self.expected_count,
                "found_count": len(self.contracted),
                "new_points": [D.label() for D in self.new_point_classes],
                "contracted": [D.label() for D in self.contracted],
                "pairwise_disjoint": self.pairwise_disjoint,
                "total_degree": sum(self.degrees_on_source),
                "ok": self.ok}


def new_point_classes(a: int, d: int) -> tuple[int, list[DivisorClass]]:
    """(r, exceptional classes over the a - d new points) on Y = BlowupP2(r)."""
    r = 9 - d
    m = a - d

    def e(i):
        v = [0] * (r + 1)
        v[i] = -1
        return DivisorClass(tuple(v))

    if a == 9:
        return r, [e(i) for i in range(1, m + 1)]
    if a == 8:
        # Bl_p of the quadric is Bl_2 of the plane with E_p = H - E1 - E2
        first = DivisorClass((1, 1, 1) + (0,) * (r - 2))
        return r, [first] + [e(i) for i in range(3, m + 2)]
    if a == 6:
        return r, [e(i) for i in range(4, 4 + m)]
    if a == 5:
        return r, [e(i) for i in range(5, 5 + m)]
    raise ValidationError(f"no del Pezzo model of degree {a}")


def verify_delta_row(t: LinkTag, delta: int | None = None) -> DeltaReport:
    """Lattice certificate for a II_D row.

    On Y, the blow-up of the source in a - d points, collect every
    (-1)-class meeting each new exceptional class in 0 or 1 and meeting
    exactly delta - 1 of them. The row is confirmed when exactly b - d such
    classes exist and they are pairwise disjoint.
    """
    if t.kind != "II_D":
        raise ValidationError("delta rows exist for II_D links only")
    if t.d < 3:
        raise ValidationError("delta certificates cover links through surfaces of degree >= 3")
    row = t.row
    delta = row.delta if delta is None else delta
    r, F = new_point_classes(t.a, t.d)
    Y = BlowupP2(r)
    pullback_minus_k = -Y.canonical
    for f in F:
        pullback_minus_k = pullback_minus_k + f
    cands = []
    for C in neg_one_classes(Y):
        meets = [intersection(Y, C, f) for f in F]
        if all(m in (0, 1) for m in meets) and sum(meets) == delta - 1:
            cands.append(C)
    disjoint = all(intersection(Y, x, y) == 0 for i, x in enumerate(cands) for y in cands[i + 1:])
    degrees = [intersection(Y, C, pullback_minus_k) for C in cands]
    expected = t.b - t.d
    ok = len(cands) == expected and disjoint and all(x == delta for x in degrees)
    return DeltaReport(t, delta, expected, F, cands, disjoint, degrees, ok)


# ---------------------------------------------------------------------------
# random words and loops


@lru_cache(maxsize=256)
def _class_multisets(G: Group, size: int) -> tuple[tuple[int, ...], ...]:
    reps = G.subgroup_lattice.representatives
    idx = [(k, H.index_in_group) for k, H in enumerate(reps) if H.index_in_group <= size]
    out = []

    def walk(start, budget, chosen):
        if budget == 0:
            out.append(tuple(chosen))
            return
        for pos in range(start, len(idx)):
            k, n = idx[pos]
            if n <= budget:
                chosen.append(k)
                walk(pos, budget - n, chosen)
                chosen.pop()

    walk(0, size, [])
    return tuple(out)


@lru_cache(maxsize=4096)
def _gset_of_multiset(G: Group, classes: tuple[int, ...]) -> GSet:
    return disjoint_union(*(coset_gset(G, k) for k in classes))


def random_gset(G: Group, size: int, rng: random.Random, name: str | None = None,
                require: Callable[[GSet], bool] | None = None) -> GSet:
    """Uniform choice among isomorphism classes of G-sets of the given size."""
    options = _class_multisets(G, size)
    if require is not None:
        options = tuple(o for o in options if require(_gset_of_multiset(G, o)))
    if not options:
        raise ValidationError(f"no G-set of size {size} with the requested property")
    return _gset_of_multiset(G, rng.choice(options)).named(name)


def route_to_plane(S: SurfaceModel) -> list[Move]:
    """Links from a minimal large-degree model to dP9."""
    if S.stack:
        raise ValidationError("route_to_plane expects an empty stack")
    if S.tag == "dP9":
        return []
    if S.tag == "dP8":
        return [Link(II_D(8, 7, 9))]
    if S.tag == "dP5":
        return [Link(II_D(5, 4, 9))]
    if S.tag == "dP6":
        return [Link(II_D(6, 5, 8)), Link(II_D(8, 7, 9))]
    if S.tag == "C8":
        return [Link(LinkTag("III", 8, 0, 9))]
    raise ValidationError(f"no route from {S.tag}")


def build_from_plane(T: SurfaceModel) -> list[Move]:
    """Moves from dP9 to a model isomorphic to T, including T's stack."""
    if T.tag == "dP9":
        moves = []
    elif T.tag == "dP8":
        moves = [Link(II_D(9, 7, 8), T.get("Z2"))]
    elif T.tag == "dP5":
        moves = [Link(II_D(9, 4, 5), T.get("Z5"))]
    elif T.tag == "dP6":
        moves = [Link(II_D(9, 7, 8), T.get("Z2")), Link(II_D(8, 5, 6), T.get("Z3"))]
    elif T.tag == "C8":
        moves = [Link(LinkTag("I", 9, 0, 8))]
    else:
        raise ValidationError(f"no canonical construction of {T.tag}")
    return moves + [BlowUp(Z) for Z in T.stack]


def return_moves(current: SurfaceModel, source: SurfaceModel) -> list[Move]:
    """Blow down the stack, go to the plane and rebuild the source."""
    moves = [BlowDown(Z) for Z in reversed(current.stack)]
    if current.severi_brauer or source.severi_brauer or source.tag == "P2Blowup":
        # no route through the plane: only the stacked centers change
        return moves + [BlowUp(Z) for Z in source.stack]
    base = current.without_stack()
    return moves + route_to_plane(base) + build_from_plane(source)


def _return_cost(current: SurfaceModel, source: SurfaceModel) -> int:
    return len(return_moves(current, source))


def _random_move(S: SurfaceModel, rng: random.Random, blowup_sizes=(1, 2, 3)) -> Move:
    G = S.galois
    choices = ["blowup", "isom"]
    if S.stack:
        choices.append("blowdown")
    links = applicable_links(S)
    if links:
        choices += ["link"] * 3
    kind = rng.choice(choices)
    if kind == "isom":
        return Isom()
    if kind == "blowup":
        size = rng.choice(blowup_sizes)
        req = (lambda A: all(len(o) % 3 == 0 for o in orbits(A))) if S.severi_brauer else None
        if S.severi_brauer:
            size = 3
        return BlowUp(random_gset(G, size, rng, name=f"B{rng.randrange(1000)}", require=req))
    if kind == "blowdown":
        return BlowDown(rng.choice(S.stack))
    t = rng.choice(links)
    center = None
    if t.kind == "II_C":
        center = random_gset(G, rng.choice((1, 2, 3)), rng, name="W")
    elif t.kind == "I" and (t.a, t.b) != (9, 8):
        center = random_gset(G, t.a - t.b, rng, name="W")
    elif t.kind == "II_D" and t.row.blowup == "W":
        req = (lambda A: all(len(o) % 3 == 0 for o in orbits(A))) if S.severi_brauer else None
        center = random_gset(G, t.a - t.d, rng, name="W", require=req)
    return Link(t, center)


def _walk(src: SurfaceModel, target: SurfaceModel, rng: random.Random, max_len: int) -> MoveWord:
    """Random legal moves from src, then the canonical return to target.

    Each random move is kept only if the return still fits in max_len.
    """
    if _return_cost(src, target) > max_len:
        raise ValidationError(f"max_len {max_len} is too short to reach the target")
    moves: list[Move] = []
    cur = src
    for _ in range(rng.randint(0, max_len)):
        for _attempt in range(20):
            mv = _random_move(cur, rng)
            try:
                nxt = evaluate_word(MoveWord(cur, (mv,))).final
            except ValidationError:
                continue
            if len(moves) + 1 + _return_cost(nxt, target) <= max_len:
                moves.append(mv)
                cur = nxt
                break
        else:
            break
    moves.extend(return_moves(cur, target))
    return MoveWord(src, tuple(moves))


def random_loop(S: SurfaceModel, rng: random.Random, max_len: int = 12) -> MoveWord:
    """A random legal word from S to a model isomorphic to S, of length <= max_len."""
    return _walk(S, S, rng, max_len)


def random_word_to(target: SurfaceModel, rng: random.Random, max_len: int = 12) -> MoveWord:
    """A random legal word from the plane to a model isomorphic to ``target``."""
    return _walk(make_model("dP9", target.galois), target, rng, max_len)


@dataclass
class LoopReport:
    trials: int
    max_len: int
    seed: int
    zero_count: int
    returned_count: int
    counterexamples: list[dict]
    length_histogram: dict[int, int]

    @property
    def ok(self) -> bool:
        return self.zero_count == self.trials and self.returned_count == self.trials

    def to_json(self) -> dict:
        return {"trials": self.trials, "max_len": self.max_len, "seed": self.seed,
                "zero": self.zero_count, "returned": self.returned_count,
                "counterexamples": self.counterexamples,
                "length_histogram": {str(k): v for k, v in sorted(self.length_histogram.items())},
                "verdict": "ok" if self.ok else "failed"}


def loop_invariance_check(S: SurfaceModel, n_trials: int, max_len: int = 12, seed: int = 0) -> LoopReport:
    """Evaluate random loops at S; every one must give c = 0 and end at a model isomorphic to S."""
    zero = returned = 0
    bad = []
    hist: dict[int, int] = {}
    for trial in range(n_trials):
        rng = random.Random(f"{seed}:{trial}")
        w = random_loop(S, rng, max_len)
        ev = evaluate_word(w)
        hist[len(w)] = hist.get(len(w), 0) + 1
        is_zero = ev.c.is_zero()
        back = models_isomorphic(ev.final, S)
        zero += is_zero
        returned += back
        if not (is_zero and back):
            bad.append({"trial": trial, "moves": [m.describe() for m in w.moves], "c": str(ev.c),
                        "returned": back})
    return LoopReport(n_trials, max_len, seed, zero, returned, bad, hist)


# ---------------------------------------------------------------------------
# worked examples


def metacyclic20() -> Group:
    """x -> x + 1 and x -> 2x on Z/5: the Frobenius group of order 20."""
    from .permgrp import Permutation, group_from_generators
    return group_from_generators(5, [Permutation(tuple((i + 1) % 5 for i in range(5))),
                                     Permutation(tuple((2 * i) % 5 for i in range(5)))])


def dp5_chain_word(G: Group | None = None, Z2: GSet | None = None, Z5: GSet | None = None) -> MoveWord:
    """P2 <- dP7 -> dP8 <- dP3 -> dP5 <- dP4 -> P2 with transitive Z2 and Z5."""
    if G is None:
        G = metacyclic20()
        Z5 = GSet(G, 5, tuple(g.images for g in G.generators), "Z5")
        # translations act trivially on the rulings, x -> 2x swaps them
        Z2 = GSet(G, 2, ((0, 1), (1, 0)), "Z2")
    src = make_model("dP9", G)
    return MoveWord(src, (Link(II_D(9, 7, 8), Z2), Link(II_D(8, 3, 5), Z5), Link(II_D(5, 4, 9))))


def dp5_chain_example() -> dict:
    w = dp5_chain_word()
    ev = evaluate_word(w)
    c = ev.c
    return {"moves": [m.describe() for m in w.moves], "trace": ev.trace, "ledger": ev.formal(),
            "c": c.describe(), "c_is_zero": c.is_zero(),
            "final_isomorphic_to_source": models_isomorphic(ev.final, w.source),
            "verdict": "ok" if c.is_zero() else "failed"}


def cubic_example_suite() -> dict:
    """Two cubic surfaces from the Klein-four Gassmann pair of 6-point sets."""
    from .gset import gassmann_search
    from .permgrp import klein_four
    from .surface import LatticeAction

    G = klein_four()
    pairs = [p for p in gassmann_search(G, 6) if p.orbit_shapes() == ((2, 2, 2), (4, 1, 1))]
    if len(pairs) != 1:
        raise AssertionError("expected a single 2+2+2 / 4+1+1 pair")
    Z, Zp = pairs[0].A.named("Z"), pairs[0].B.named("Z'")
    src = make_model("dP9", G)
    w, wp = MoveWord(src, (BlowUp(Z),)), MoveWord(src, (BlowUp(Zp),))
    cen, cenp = rationality_center(w), rationality_center(wp)
    act, actp = LatticeAction.from_point_permutation(Z), LatticeAction.from_point_permutation(Zp)
    cubic = make_model("P2Blowup", G, lattice_action=act)
    cubicp = make_model("P2Blowup", G, lattice_action=actp)
    chi, chip = ns_character(cubic), ns_character(cubicp)
    lines = neg_one_classes(BlowupP2(6))
    fixed = [_fixed_lines(act, lines), _fixed_lines(actp, lines)]
    checks = {
        "gassmann": is_gassmann(Z, Zp),
        "isomorphic": is_isomorphic(Z, Zp),
        "ns_characters_equal": bool(np.array_equal(chi, chip)),
        "ns_character_matches_blowup": bool(np.array_equal(chi, ns_character(evaluate_word(w).final))),
        "centers_differ": cen != cenp,
        "fixed_lines": [f["total"] for f in fixed],
    }
    ok = (checks["gassmann"] and not checks["isomorphic"] and checks["ns_characters_equal"]
          and checks["ns_character_matches_blowup"] and checks["centers_differ"]
          and checks["fixed_lines"] == [3, 5])
    return {"Z_orbits": [len(o) for o in orbits(Z)], "Zprime_orbits": [len(o) for o in orbits(Zp)],
            "ns_character": chi.tolist(), "ns_character_prime": chip.tolist(),
            "center": cen.describe(), "center_prime": cenp.describe(),
            "fixed_lines_by_family": fixed, "checks": checks, "verdict": "ok" if ok else "failed"}


def _fixed_lines(act, lines) -> dict:
    fam = {"E_i": 0, "H-E_i-E_j": 0, "2H-5E": 0}
    for D in lines:
        if all(np.array_equal(M @ D.vector, D.vector) for M in act.matrices):
            a = D.coords[0]
            fam["E_i" if a == 0 else "H-E_i-E_j" if a == 1 else "2H-5E"] += 1
    fam["total"] = sum(fam.values())
    return fam


def verify_table(n_assignments: int = 20, seed: int = 0) -> dict:
    """All delta rows plus mu balance for every link under random Galois data."""
    from .permgrp import cyclic_group, klein_four, symmetric_group
    rows = [verify_delta_row(II_D(*k)).to_json() for k in sorted(II_D_TABLE) if k[1] >= 3]
    mutations = []
    for k in sorted(II_D_TABLE):
        if k[1] < 3:
            continue
        t = II_D(*k)
        for dd in (-1, 1):
            mutations.append({"link": t.label(), "delta": t.row.delta + dd,
                              "rejected": not verify_delta_row(t, t.row.delta + dd).ok})
    groups = [cyclic_group(1), cyclic_group(2), klein_four(), symmetric_group(3), metacyclic20()]
    rng = random.Random(seed)
    mu_checks = 0
    mu_failures = []
    for i in range(n_assignments):
        G = groups[i % len(groups)]
        for tag in ("dP9", "dP8", "C8", "dP6", "dP5"):
            S = random_model(tag, G, rng)
            for t in applicable_links(S):
                center = sample_center(t, S, rng)
                mu_checks += 1
                if not verify_link_mu(S, t, center):
                    mu_failures.append({"link": t.label(), "source": S.describe()})
    ok = all(r["ok"] for r in rows) and all(m["rejected"] for m in mutations) and not mu_failures
    return {"delta_rows": rows, "mutations": mutations, "mu_checks": mu_checks,
            "mu_failures": mu_failures, "verdict": "ok" if ok else "failed"}


def sample_center(t: LinkTag, S: SurfaceModel, rng: random.Random) -> GSet | None:
    G = S.galois
    if t.kind == "II_C":
        return random_gset(G, rng.choice((1, 2, 3)), rng, name="W")
    if t.kind == "I" and (t.a, t.b) != (9, 8):
        return random_gset(G, t.a - t.b, rng, name="W")
    if t.kind == "II_D" and t.row.blowup == "W":
        return random_gset(G, t.a - t.d, rng, name="W")
    return None


def random_model(tag: str, G: Group, rng: random.Random) -> SurfaceModel:
    sizes = {"dP8": {"Z2": 2}, "dP6": {"Z2": 2, "Z3": 3}, "dP5": {"Z5": 5}}.get(tag, {})
    data = {k: random_gset(G, n, rng, name=k) for k, n in sizes.items()}
    return make_model(tag, G, **data)

