"""Surface models of large degree with Galois data.

A model carries a tag, a finite Galois group and the G-sets that determine
it:

========  =======================================================
tag       data
========  =======================================================
dP9       none (the plane; ``severi_brauer`` marks a twisted form)
dP8       ``Z2``: the two rulings of the quadric
C8        none (a Hirzebruch surface with its conic bundle)
dP6       ``Z3``: conic pencils, ``Z2``: the two cubic families
dP5       ``Z5``: conic pencils
P2Blowup  a :class:`LatticeAction` on BlowupP2(r)
========  =======================================================

Models also carry a stack of blown-up centers (outermost last).

Each large-degree tag has a canonical lattice action built from its data,
so the Neron-Severi character can be computed as a trace and compared with
the Burnside-ring bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from .errors import ValidationError
from .gset import (BurnsideElement, GSet, burnside_canonicalize, fixed_point_character,
                   has_fixed_point, is_isomorphic, mu, orbits, trivial_gset)
from .nslattice import (BlowupP2, ClassList, DivisorClass, PicardLattice, Quadric, adjoint_dual,
                        cremona_matrix, is_isometry, permutation_matrix, rational_degree_classes)
from .permgrp import Group, conjugacy_classes

TAGS = ("dP9", "dP8", "C8", "dP6", "dP5", "P2Blowup")
LARGE_DEGREE_TAGS = ("dP9", "dP8", "C8", "dP6", "dP5")
DATA_SIZES = {"dP9": {}, "dP8": {"Z2": 2}, "C8": {}, "dP6": {"Z2": 2, "Z3": 3},
              "dP5": {"Z5": 5}, "P2Blowup": {}}
DEGREE = {"dP9": 9, "dP8": 8, "C8": 8, "dP6": 6, "dP5": 5}


# ---------------------------------------------------------------------------
# lattice actions


class LatticeAction:
    """A right action of a group on a Picard lattice by integer isometries
    fixing K. ``matrices[s]`` acts on column vectors; the element g*h acts
    by ``M_h @ M_g``."""

    def __init__(self, lattice: PicardLattice, group: Group, matrices: Sequence):
        self.lattice = lattice
        self.group = group
        mats = tuple(np.array(M, dtype=np.int64) for M in matrices)
        if len(mats) != len(group.generators):
            raise ValidationError(f"expected {len(group.generators)} matrices, got {len(mats)}")
        for s, M in enumerate(mats):
            if M.shape != (lattice.rank, lattice.rank):
                raise ValidationError(f"matrix {s} has shape {M.shape}, expected rank {lattice.rank}")
            if not is_isometry(lattice, M):
                raise ValidationError(f"matrix {s} does not preserve the form and K")
            M.flags.writeable = False
        self.matrices = mats
        self.element_matrices  # validates the group relations

    @cached_property
    def element_matrices(self) -> np.ndarray:
        G = self.group
        n, k = G.order, self.lattice.rank
        out = np.empty((n, k, k), dtype=np.int64)
        out[0] = np.eye(k, dtype=np.int64)
        order, parent, via = G.spanning_tree()
        for j in order[1:]:
            out[j] = self.matrices[via[j]] @ out[parent[j]]
        for s, M in enumerate(self.matrices):
            if not np.array_equal(np.einsum("ab,nbc->nac", M, out), out[G.gen_table[:, s]]):
                raise ValidationError(f"matrices violate a group relation (generator {s})")
        out.flags.writeable = False
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, LatticeAction):
            return NotImplemented
        return (self.lattice == other.lattice and self.group == other.group
                and all(np.array_equal(a, b) for a, b in zip(self.matrices, other.matrices)))

    def __hash__(self) -> int:
        return hash((self.lattice, self.group, tuple(M.tobytes() for M in self.matrices)))

    def act(self, D: DivisorClass, element: int) -> DivisorClass:
        return DivisorClass(tuple(self.element_matrices[element] @ D.vector))

    def character(self) -> np.ndarray:
        reps = np.array(conjugacy_classes(self.group).representatives)
        return np.trace(self.element_matrices[reps], axis1=1, axis2=2).astype(np.int64)

    def invariant_rank(self) -> int:
        chi = self.character()
        sizes = np.array(conjugacy_classes(self.group).sizes)
        total = int((chi * sizes).sum())
        if total % self.group.order:
            raise AssertionError("non-integral invariant dimension")
        return total // self.group.order

    def permutation_on(self, C: ClassList, name=None) -> GSet:
        """The G-set of C under this action. Raises if C is not preserved."""
        pos = {D: i for i, D in enumerate(C.classes)}
        images = []
        for M in self.matrices:
            row = []
            for D in C.classes:
                img = DivisorClass(tuple(M @ D.vector))
                if img not in pos:
                    raise ValidationError(f"lattice action sends {D.label()} outside the class list")
                row.append(pos[img])
            images.append(tuple(row))
        return GSet(self.group, len(C), tuple(images), name)

    @classmethod
    def trivial(cls, lattice: PicardLattice, group: Group) -> "LatticeAction":
        eye = np.eye(lattice.rank, dtype=np.int64)
        return cls(lattice, group, [eye] * len(group.generators))

    @classmethod
    def from_point_permutation(cls, points: GSet, r: int | None = None) -> "LatticeAction":
        """Permute E_1..E_r as the G-set ``points`` permutes 0..r-1."""
        r = points.size if r is None else r
        if points.size > r:
            raise ValidationError("more points than exceptional classes")
        mats = []
        for a in points.action:
            sigma = list(a) + list(range(points.size, r))
            mats.append(permutation_matrix(r, sigma))
        return cls(BlowupP2(r), points.group, mats)


def _swaps(images: Sequence[int]) -> bool:
    return tuple(images) != tuple(range(len(images)))


def quadric_action(Z2: GSet) -> LatticeAction:
    """Rulings (1,0), (0,1) permuted as Z2 permutes its two points."""
    swap = np.array([[0, 1], [1, 0]], dtype=np.int64)
    eye = np.eye(2, dtype=np.int64)
    return LatticeAction(Quadric(), Z2.group, [swap if _swaps(a) else eye for a in Z2.action])


def dp6_action(Z2: GSet, Z3: GSet) -> LatticeAction:
    """Action on BlowupP2(3): conic pencil H - E_{i+1} follows point i of Z3,
    the cubic families H and 2H - E1 - E2 - E3 follow the points of Z2."""
    cr = cremona_matrix(3)
    mats = []
    for a2, a3 in zip(Z2.action, Z3.action):
        P = permutation_matrix(3, a3)
        mats.append(cr @ P if _swaps(a2) else P)
    return LatticeAction(BlowupP2(3), Z2.group, mats)


DP5_CONICS = np.array([[1, 1, 0, 0, 0], [1, 0, 1, 0, 0], [1, 0, 0, 1, 0], [1, 0, 0, 0, 1],
                       [2, 1, 1, 1, 1]], dtype=np.int64).T  # columns: H-E1..H-E4, 2H-E1-..-E4


def dp5_conic_classes() -> list[DivisorClass]:
    return [DivisorClass(tuple(DP5_CONICS[:, i])) for i in range(5)]


def dp5_matrix(sigma: Sequence[int]) -> np.ndarray:
    """Integer matrix permuting the five conic classes by sigma.

    The conic classes span a finite-index sublattice, so the matrix is
    C P C^-1; integrality is checked exactly.
    """
    P = np.zeros((5, 5), dtype=np.int64)
    for i, s in enumerate(sigma):
        P[s, i] = 1
    C = DP5_CONICS
    M = np.rint(C @ P @ np.linalg.inv(C)).astype(np.int64)
    if not np.array_equal(M @ C, C @ P):
        raise ValidationError(f"permutation {list(sigma)} of conic classes is not integral")
    return M


def dp5_action(Z5: GSet) -> LatticeAction:
    return LatticeAction(BlowupP2(4), Z5.group, [dp5_matrix(a) for a in Z5.action])


# ---------------------------------------------------------------------------
# models


@dataclass(frozen=True)
class SurfaceModel:
    tag: str
    galois: Group
    data: tuple[tuple[str, GSet], ...] = ()
    stack: tuple[GSet, ...] = ()
    lattice_action: LatticeAction | None = field(default=None, compare=False)
    severi_brauer: bool = False

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValidationError(f"unknown model tag {self.tag!r}; expected one of {TAGS}")
        data = self.data.items() if isinstance(self.data, Mapping) else self.data
        data = tuple(sorted((str(k), v) for k, v in data))
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "stack", tuple(self.stack))
        want = DATA_SIZES[self.tag]
        have = dict(data)
        if set(have) != set(want):
            raise ValidationError(f"{self.tag} needs data {sorted(want)}, got {sorted(have)}")
        for key, A in data:
            if A.size != want[key]:
                raise ValidationError(f"{self.tag}: {key} must have size {want[key]}, got {A.size}")
        for A in list(have.values()) + list(self.stack):
            if A.group != self.galois:
                raise ValidationError("all attached G-sets must share the model's Galois group")
        if self.tag == "P2Blowup":
            if self.lattice_action is None:
                raise ValidationError("P2Blowup needs a lattice action")
            if self.lattice_action.lattice.kind != "blowup" or self.lattice_action.group != self.galois:
                raise ValidationError("P2Blowup lattice action must be on BlowupP2(r) over the Galois group")
        elif self.lattice_action is not None:
            raise ValidationError("only P2Blowup models take an explicit lattice action")
        if self.severi_brauer and self.tag != "dP9":
            raise ValidationError("severi_brauer applies to dP9 only")

    def get(self, key: str) -> GSet:
        return dict(self.data)[key]

    @property
    def degree(self) -> int:
        """K^2 of the base model (before the stacked blow-ups)."""
        if self.tag == "P2Blowup":
            return self.lattice_action.lattice.degree
        return DEGREE[self.tag]

    def push(self, center: GSet) -> "SurfaceModel":
        return replace(self, stack=self.stack + (center,))

    def without_stack(self) -> "SurfaceModel":
        return replace(self, stack=())

    def describe(self) -> str:
        parts = [self.tag]
        for k, A in self.data:
            parts.append(f"{k}={[len(o) for o in orbits(A)]}")
        if self.stack:
            parts.append(f"stack={[A.size for A in self.stack]}")
        return " ".join(parts)


def make_model(tag: str, galois: Group, stack: Sequence[GSet] = (), severi_brauer: bool = False,
               lattice_action: LatticeAction | None = None, **data: GSet) -> SurfaceModel:
    return SurfaceModel(tag, galois, tuple(data.items()), tuple(stack), lattice_action, severi_brauer)


def base_lattice_action(S: SurfaceModel) -> LatticeAction:
    """Lattice action of the base model, built from its data for the large-degree tags."""
    G = S.galois
    if S.tag == "P2Blowup":
        return S.lattice_action
    if S.tag == "dP9":
        return LatticeAction.trivial(BlowupP2(0), G)
    if S.tag == "C8":
        # a Hirzebruch surface; Galois acts trivially on fiber and section classes
        return LatticeAction.trivial(BlowupP2(1), G)
    if S.tag == "dP8":
        return quadric_action(S.get("Z2"))
    if S.tag == "dP6":
        return dp6_action(S.get("Z2"), S.get("Z3"))
    return dp5_action(S.get("Z5"))


def virtual_ns_set(S: SurfaceModel) -> BurnsideElement:
    G = S.galois
    pt = BurnsideElement.point(G)
    if S.tag == "P2Blowup":
        raise ValidationError("virtual_ns_set is defined for large-degree tags; use ns_character")
    if S.tag == "dP9":
        return pt
    if S.tag == "C8":
        return 2 * pt
    if S.tag == "dP8":
        return burnside_canonicalize(G, [S.get("Z2")], [])
    if S.tag == "dP6":
        return burnside_canonicalize(G, [S.get("Z2"), S.get("Z3")], []) - pt
    return burnside_canonicalize(G, [S.get("Z5")], [])


def ns_character(S: SurfaceModel) -> np.ndarray:
    """Character of NS(X)_Q: lattice trace of the base plus the stacked centers."""
    chi = base_lattice_action(S).character()
    for Z in S.stack:
        chi = chi + fixed_point_character(Z)
    return chi


def picard_rank(S: SurfaceModel) -> int:
    if S.tag == "P2Blowup":
        base = base_lattice_action(S).invariant_rank()
    else:
        base = virtual_ns_set(S).orbit_count
    return base + sum(len(orbits(Z)) for Z in S.stack)


def _model_lattice(S: SurfaceModel) -> LatticeAction:
    if S.stack:
        raise ValidationError("M^j sets are computed on the base model; blow down the stack first")
    return base_lattice_action(S)


def mj_set(S: SurfaceModel, j: int) -> GSet:
    """G-set of rational classes of anticanonical degree j."""
    act = _model_lattice(S)
    return act.permutation_on(rational_degree_classes(act.lattice, j), name=f"M{j}")


def mj_duality_check(S: SurfaceModel, j: int) -> bool:
    """Does D -> -K - D give an isomorphism M^j -> M^(d-j) of G-sets?"""
    act = _model_lattice(S)
    L = act.lattice
    d = L.degree
    C1 = rational_degree_classes(L, j)
    C2 = rational_degree_classes(L, d - j)
    if len(C1) != len(C2):
        return False
    A = act.permutation_on(C1)
    B = act.permutation_on(C2)
    pos2 = {D: i for i, D in enumerate(C2.classes)}
    try:
        phi = [pos2[adjoint_dual(L, D)] for D in C1.classes]
    except KeyError:
        return False
    if sorted(phi) != list(range(len(C2))):
        return False
    for a, b in zip(A.action, B.action):
        if any(phi[a[i]] != b[phi[i]] for i in range(len(C1))):
            return False
    return True


def singular_fiber_count(K2: int) -> int:
    """Geometric singular fibers of a standard conic bundle with K^2 = K2."""
    if K2 > 8:
        raise ValidationError(f"a conic bundle has K^2 <= 8, got {K2}")
    return 8 - K2


def has_conic_bundle(S: SurfaceModel) -> bool:
    """Whether the base model carries a conic bundle structure over k."""
    if S.tag == "C8":
        return True
    if S.tag == "dP8":
        return has_fixed_point(S.get("Z2"))
    if S.tag == "dP6":
        return has_fixed_point(S.get("Z3"))
    if S.tag == "dP5":
        return has_fixed_point(S.get("Z5"))
    return False


def _multiset_isomorphic(xs: Sequence[GSet], ys: Sequence[GSet]) -> bool:
    if len(xs) != len(ys):
        return False
    unused = list(ys)
    for A in xs:
        for pos, B in enumerate(unused):
            if is_isomorphic(A, B):
                del unused[pos]
                break
        else:
            return False
    return True


def models_isomorphic(S: SurfaceModel, T: SurfaceModel) -> bool:
    """Same tag, isomorphic data and isomorphic stacks (as multisets)."""
    if S.tag != T.tag or S.galois != T.galois or S.severi_brauer != T.severi_brauer:
        return False
    for (k1, A), (k2, B) in zip(S.data, T.data):
        if k1 != k2 or not is_isomorphic(A, B):
            return False
    if S.tag == "P2Blowup" and S.lattice_action != T.lattice_action:
        return False
    return _multiset_isomorphic(S.stack, T.stack)


def split_model(tag: str, galois: Group) -> SurfaceModel:
    """Model whose data sets all carry the trivial action."""
    data = {k: trivial_gset(galois, n, name=k) for k, n in DATA_SIZES[tag].items()}
    if tag == "P2Blowup":
        raise ValidationError("P2Blowup needs an explicit lattice action")
    return make_model(tag, galois, **data)


__all__ = [
    "LatticeAction", "SurfaceModel", "TAGS", "LARGE_DEGREE_TAGS", "make_model", "virtual_ns_set",
    "ns_character", "picard_rank", "mj_set", "mj_duality_check", "singular_fiber_count",
    "has_conic_bundle", "models_isomorphic", "base_lattice_action", "quadric_action",
    "dp6_action", "dp5_action", "dp5_matrix", "split_model", "mu",
]
