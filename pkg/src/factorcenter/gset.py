"""Finite G-sets, the Burnside ring and Gassmann equivalence.

A G-set stores one image array per generator of its group. The action is a
right action, consistent with :mod:`factorcenter.permgrp`: point ``x`` goes
to ``action[s][x]`` under generator ``s``, and element ``g * h`` acts as
"g, then h".
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import _config
from .errors import ResourceError, ValidationError
from .permgrp import (Group, Permutation, Subgroup, are_conjugate, conjugacy_classes,
                      group_from_generators)


@lru_cache(maxsize=8192)
def _element_perms(group: Group, size: int, action: tuple[tuple[int, ...], ...]) -> np.ndarray:
    """Action of every group element, row i for element i. Verifies that the
    generator images satisfy every relation of the group."""
    n = group.order
    perms = np.empty((n, size), dtype=np.int64)
    gens = [np.array(a, dtype=np.int64) for a in action]
    order, parent, via = group.spanning_tree()
    perms[0] = np.arange(size)
    for j in order[1:]:
        perms[j] = gens[via[j]][perms[parent[j]]]
    # every edge of the Cayley graph, not just the tree ones, must agree
    for s, g in enumerate(gens):
        if not np.array_equal(g[perms], perms[group.gen_table[:, s]]):
            raise ValidationError("generator images do not define a group action "
                                  f"(relation check failed at generator {s})")
    perms.flags.writeable = False
    return perms


@dataclass(frozen=True)
class GSet:
    group: Group
    size: int
    action: tuple[tuple[int, ...], ...]
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        action = tuple(tuple(int(x) for x in a) for a in self.action)
        object.__setattr__(self, "action", action)
        if self.size < 0:
            raise ValidationError("size must be non-negative")
        if len(action) != len(self.group.generators):
            raise ValidationError(f"expected {len(self.group.generators)} generator images, "
                                  f"got {len(action)}")
        for a in action:
            if sorted(a) != list(range(self.size)):
                raise ValidationError(f"generator image {list(a)} is not a bijection of 0..{self.size - 1}")
        _element_perms(self.group, self.size, action)

    @property
    def element_perms(self) -> np.ndarray:
        return _element_perms(self.group, self.size, self.action)

    def act(self, point: int, element: int) -> int:
        return int(self.element_perms[element, point])

    def named(self, name: str | None) -> "GSet":
        return GSet(self.group, self.size, self.action, name)

    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        label = f"{self.name}: " if self.name else ""
        return f"GSet({label}size={self.size}, orbits={[len(o) for o in orbits(self)]})"


def gset_from_permutations(group: Group, images: Sequence[Sequence[int]], name=None) -> GSet:
    imgs = tuple(tuple(a) for a in images)
    size = len(imgs[0]) if imgs else 0
    return GSet(group, size, imgs, name)


def trivial_gset(group: Group, size: int = 1, name=None) -> GSet:
    ident = tuple(range(size))
    return GSet(group, size, tuple(ident for _ in group.generators), name)


def natural_gset(group: Group, name=None) -> GSet:
    """The group acting on its own points."""
    return GSet(group, group.degree, tuple(g.images for g in group.generators), name)


def gset_from_subgroup(G: Group, H: Subgroup, name=None) -> GSet:
    """Action of G on the right cosets Hx. Point 0 is the coset H itself."""
    if H.group != G:
        raise ValidationError("subgroup belongs to a different group")
    label = np.full(G.order, -1, dtype=np.int64)
    reps = []
    for x in range(G.order):
        if label[x] >= 0:
            continue
        coset = G.multiply(H.indices, np.full(H.order, x))
        label[coset] = len(reps)
        reps.append(x)
    reps = np.array(reps, dtype=np.int64)
    action = tuple(tuple(label[G.gen_table[reps, s]]) for s in range(len(G.generators)))
    return GSet(G, len(reps), action, name)


@lru_cache(maxsize=4096)
def coset_gset(G: Group, class_index: int) -> GSet:
    """Transitive G-set of the given subgroup class (cached)."""
    return gset_from_subgroup(G, G.subgroup_lattice.representatives[class_index])


def disjoint_union(*sets: GSet, name=None) -> GSet:
    if not sets:
        raise ValidationError("disjoint_union needs at least one set")
    G = sets[0].group
    for A in sets:
        if A.group != G:
            raise ValidationError("cannot join G-sets over different groups")
    action = []
    for s in range(len(G.generators)):
        row = []
        offset = 0
        for A in sets:
            row.extend(x + offset for x in A.action[s])
            offset += A.size
        action.append(tuple(row))
    return GSet(G, sum(A.size for A in sets), tuple(action), name)


def orbits(A: GSet) -> list[list[int]]:
    """Orbit partition, each orbit sorted, orbits sorted by least point.

    The count is cross-checked against the multiplicity of the trivial
    character (average number of fixed points).
    """
    seen = np.zeros(A.size, dtype=bool)
    out = []
    gens = [np.array(a) for a in A.action]
    for start in range(A.size):
        if seen[start]:
            continue
        orb = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = int(g[x])
                    if y not in orb:
                        orb.add(y)
                        nxt.append(y)
            frontier = nxt
        seen[list(orb)] = True
        out.append(sorted(orb))
    chi = fixed_point_character(A)
    sizes = np.array(conjugacy_classes(A.group).sizes)
    burnside_count, rem = divmod(int((chi * sizes).sum()), A.group.order)
    if rem or burnside_count != len(out):
        raise AssertionError("orbit count disagrees with the fixed-point average")
    return out


def fixed_point_character(A: GSet) -> np.ndarray:
    """Number of fixed points of each conjugacy class representative."""
    reps = np.array(conjugacy_classes(A.group).representatives)
    perms = A.element_perms[reps]
    return (perms == np.arange(A.size)).sum(axis=1).astype(np.int64)


def kernel(A: GSet) -> Subgroup:
    fixes_all = (A.element_perms == np.arange(A.size)).all(axis=1)
    return Subgroup(A.group, np.flatnonzero(fixes_all))


def faithful_quotient(A: GSet) -> tuple[Group, GSet]:
    """The image of G in Sym(A) and A as a set acted on by that image."""
    image = group_from_generators(A.size, [Permutation(a) for a in A.action])
    return image, GSet(image, A.size, A.action, A.name)


def stabilizer(A: GSet, point: int) -> Subgroup:
    return Subgroup(A.group, np.flatnonzero(A.element_perms[:, point] == point))


def has_fixed_point(A: GSet) -> bool:
    return any(len(o) == 1 for o in orbits(A))


def remove_fixed_point(A: GSet, name=None) -> GSet:
    """A with one fixed point deleted (the result is unique up to isomorphism)."""
    fixed = [o[0] for o in orbits(A) if len(o) == 1]
    if not fixed:
        raise ValidationError("G-set has no fixed point to remove")
    p = fixed[-1]
    keep = [x for x in range(A.size) if x != p]
    relabel = {x: i for i, x in enumerate(keep)}
    action = tuple(tuple(relabel[a[x]] for x in keep) for a in A.action)
    return GSet(A.group, A.size - 1, action, name)


def is_gassmann(A: GSet, B: GSet) -> bool:
    """Equal kernels and equal fixed-point counts on every conjugacy class."""
    if A.group != B.group:
        raise ValidationError("G-sets are attached to different groups")
    if A.size != B.size:
        return False
    if kernel(A) != kernel(B):
        return False
    return bool(np.array_equal(fixed_point_character(A), fixed_point_character(B)))


def orbit_stabilizers(A: GSet) -> list[Subgroup]:
    return [stabilizer(A, o[0]) for o in orbits(A)]


def is_isomorphic(A: GSet, B: GSet) -> bool:
    """Orbits can be paired so that paired stabilizers are conjugate.

    Conjugacy is an equivalence relation, so greedy pairing is exact.
    """
    if A.group != B.group:
        raise ValidationError("G-sets are attached to different groups")
    if A.size != B.size:
        return False
    G = A.group
    left = orbit_stabilizers(A)
    right = orbit_stabilizers(B)
    if len(left) != len(right):
        return False
    unused = list(range(len(right)))
    for H in left:
        for pos, k in enumerate(unused):
            if are_conjugate(G, H, right[k]):
                del unused[pos]
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# Burnside ring


@dataclass(frozen=True)
class BurnsideElement:
    """Integer combination of transitive G-sets, keyed by subgroup class index."""

    group: Group
    coefficients: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        merged: dict[int, int] = defaultdict(int)
        for k, c in self.coefficients:
            merged[int(k)] += int(c)
        n_classes = len(self.group.subgroup_lattice)
        for k in merged:
            if not 0 <= k < n_classes:
                raise ValidationError(f"subgroup class index {k} out of range")
        canon = tuple(sorted((k, c) for k, c in merged.items() if c != 0))
        object.__setattr__(self, "coefficients", canon)

    @classmethod
    def zero(cls, group: Group) -> "BurnsideElement":
        return cls(group, ())

    @classmethod
    def point(cls, group: Group, multiplicity: int = 1) -> "BurnsideElement":
        """multiplicity * [G/G], the class of a rational point."""
        top = len(group.subgroup_lattice) - 1
        return cls(group, ((top, multiplicity),))

    @classmethod
    def of(cls, A: GSet) -> "BurnsideElement":
        return burnside_canonicalize(A.group, [A], [])

    def as_dict(self) -> dict[int, int]:
        return dict(self.coefficients)

    def _check(self, other: "BurnsideElement"):
        if not isinstance(other, BurnsideElement):
            return NotImplemented
        if other.group != self.group:
            raise ValidationError("Burnside elements over different groups")

    def __add__(self, other):
        self._check(other)
        return BurnsideElement(self.group, self.coefficients + other.coefficients)

    def __neg__(self):
        return BurnsideElement(self.group, tuple((k, -c) for k, c in self.coefficients))

    def __sub__(self, other):
        self._check(other)
        return self + (-other)

    def __mul__(self, n: int):
        if not isinstance(n, (int, np.integer)):
            return NotImplemented
        return BurnsideElement(self.group, tuple((k, int(n) * c) for k, c in self.coefficients))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.coefficients

    def is_gset(self) -> bool:
        return all(c > 0 for _, c in self.coefficients)

    @property
    def degree(self) -> int:
        reps = self.group.subgroup_lattice.representatives
        return sum(c * reps[k].index_in_group for k, c in self.coefficients)

    @property
    def orbit_count(self) -> int:
        return sum(c for _, c in self.coefficients)

    def to_gset(self, name=None) -> GSet:
        if not self.is_gset():
            raise ValidationError("element has negative coefficients")
        parts = [coset_gset(self.group, k) for k, c in self.coefficients for _ in range(c)]
        if not parts:
            return GSet(self.group, 0, tuple(() for _ in self.group.generators), name)
        return disjoint_union(*parts, name=name)

    def describe(self) -> list[dict]:
        reps = self.group.subgroup_lattice.representatives
        return [{"class": k, "coefficient": c, "subgroup_order": reps[k].order,
                 "orbit_size": reps[k].index_in_group} for k, c in self.coefficients]

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        reps = self.group.subgroup_lattice.representatives
        terms = []
        for k, c in self.coefficients:
            label = f"[G/H{k}|{reps[k].index_in_group}]"
            terms.append(f"{c:+d}{label}")
        return " ".join(terms)


def orbit_classes(A: GSet) -> list[int]:
    """Subgroup-class index of the stabilizer of each orbit, in orbit order."""
    lattice = A.group.subgroup_lattice
    return [lattice.class_index(H) for H in orbit_stabilizers(A)]


@lru_cache(maxsize=8192)
def _orbit_classes_cached(A: GSet) -> tuple[int, ...]:
    return tuple(orbit_classes(A))


def burnside_canonicalize(G: Group, pos: Iterable[GSet], neg: Iterable[GSet]) -> BurnsideElement:
    """Sum of [A] over ``pos`` minus sum over ``neg``."""
    terms = []
    for sign, sets in ((1, pos), (-1, neg)):
        for A in sets:
            if A.group != G:
                raise ValidationError("G-set is attached to a different group")
            terms.extend((k, sign) for k in _orbit_classes_cached(A.named(None)))
    return BurnsideElement(G, tuple(terms))


@lru_cache(maxsize=4096)
def coset_character(G: Group, class_index: int) -> np.ndarray:
    """Permutation character of G/H from class data alone:
    value at class T is |G| * |T ∩ H| / (|T| * |H|)."""
    H = G.subgroup_lattice.representatives[class_index]
    cct = conjugacy_classes(G)
    meet = np.bincount(cct.class_of[H.indices], minlength=len(cct))
    num = G.order * meet
    den = np.array(cct.sizes) * H.order
    if np.any(num % den):
        raise AssertionError("non-integral coset character")
    out = num // den
    out.flags.writeable = False
    return out


def mu(e: BurnsideElement) -> np.ndarray:
    """Virtual permutation character of a Burnside element."""
    out = np.zeros(len(conjugacy_classes(e.group)), dtype=np.int64)
    for k, c in e.coefficients:
        out += c * coset_character(e.group, k)
    return out


# ---------------------------------------------------------------------------
# restriction, induction and relabelling


def restrict(A: GSet, H: Subgroup, H_group: Group | None = None) -> GSet:
    """A viewed as a set acted on by the subgroup H (as a standalone group)."""
    if H.group != A.group:
        raise ValidationError("subgroup belongs to a different group")
    Hg = H_group or H.to_group()
    idx = [A.group.index(g) for g in Hg.generators]
    return GSet(Hg, A.size, tuple(tuple(A.element_perms[i]) for i in idx), A.name)


def induce(G: Group, H: Subgroup, B: GSet) -> GSet:
    """Induced G-set from an H-set B, where B.group is H as a standalone group.

    Each orbit H/K of B becomes G/K.
    """
    Hg = B.group
    if H.group != G or Hg.order != H.order:
        raise ValidationError("B must be a set over the given subgroup")
    parts = []
    for K in orbit_stabilizers(B):
        in_g = G.indices_of(Hg.elements[K.indices])
        parts.append(gset_from_subgroup(G, Subgroup(G, in_g)))
    if not parts:
        return GSet(G, 0, tuple(() for _ in G.generators))
    return disjoint_union(*parts, name=B.name)


def conjugation_automorphism(G: Group, sigma: Permutation) -> np.ndarray:
    """Element map g -> sigma^-1 g sigma, for sigma normalizing G in Sym(n)."""
    s = np.array(sigma.images, dtype=np.int64)
    s_inv = np.argsort(s)
    # (sigma^-1 * g * sigma).images = sigma[g[sigma^-1]]
    conj = s[G.elements[:, s_inv].astype(np.int64)]
    try:
        return G.indices_of(conj)
    except ValidationError:
        raise ValidationError("permutation does not normalize the group") from None


def twist(A: GSet, aut: np.ndarray) -> GSet:
    """A with g acting as aut(g) acts on A."""
    G = A.group
    idx = G.generator_indices
    action = tuple(tuple(A.element_perms[aut[i]]) for i in idx)
    return GSet(G, A.size, action, A.name)


def twist_burnside(e: BurnsideElement, aut: np.ndarray) -> BurnsideElement:
    """Image of e under the relabelling induced by the automorphism ``aut``.

    The stabilizer of a point in the twisted set is aut^-1 of the original one.
    """
    G = e.group
    lattice = G.subgroup_lattice
    aut_inv = np.argsort(aut)
    terms = []
    for k, c in e.coefficients:
        H = lattice.representatives[k]
        terms.append((lattice.class_index(Subgroup(G, aut_inv[H.indices])), c))
    return BurnsideElement(G, tuple(terms))


# ---------------------------------------------------------------------------
# Gassmann search


@dataclass(frozen=True, eq=False)
class GassmannPair:
    A: GSet
    B: GSet
    certificate: np.ndarray
    isomorphic: bool
    a_classes: tuple[int, ...]
    b_classes: tuple[int, ...]

    @property
    def degree(self) -> int:
        return self.A.size

    def orbit_shapes(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return (tuple(sorted((len(o) for o in orbits(self.A)), reverse=True)),
                tuple(sorted((len(o) for o in orbits(self.B)), reverse=True)))


MAX_MULTISETS = 2_000_000


def gassmann_search(G: Group, max_degree: int, transitive_only: bool = False) -> list[GassmannPair]:
    """All non-isomorphic Gassmann-equivalent pairs of G-sets of size at most
    ``max_degree``, up to swapping and up to adding common orbits.

    Pairs are returned with disjoint stabilizer-class supports. Side A is the
    one with the lexicographically larger sorted class list.
    """
    cap = _config.max_search_degree()
    if max_degree > cap:
        raise ResourceError(f"max_degree {max_degree} exceeds the cap {cap}")
    if max_degree < 1:
        return []
    lattice = G.subgroup_lattice
    classes = [k for k, H in enumerate(lattice.representatives) if H.index_in_group <= max_degree]
    index = {k: lattice.representatives[k].index_in_group for k in classes}
    chars = {k: coset_character(G, k) for k in classes}

    buckets: dict = defaultdict(list)
    if transitive_only:
        for k in classes:
            buckets[(index[k], chars[k].tobytes())].append((k,))
    else:
        count = 0
        n_cls = len(classes)
        zero = np.zeros(len(conjugacy_classes(G)), dtype=np.int64)

        def walk(start: int, budget: int, chosen: list[int], chi: np.ndarray):
            nonlocal count
            if chosen:
                count += 1
                if count > MAX_MULTISETS:
                    raise ResourceError("too many candidate multisets; lower max_degree")
                buckets[chi.tobytes()].append(tuple(chosen))
            for pos in range(start, n_cls):
                k = classes[pos]
                if index[k] <= budget:
                    chosen.append(k)
                    walk(pos, budget - index[k], chosen, chi + chars[k])
                    chosen.pop()

        walk(0, max_degree, [], zero)

    pairs = []
    for members in buckets.values():
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                m1, m2 = members[i], members[j]
                if set(m1) & set(m2):
                    continue
                a, b = (m1, m2) if m1 > m2 else (m2, m1)
                pairs.append((a, b))
    pairs.sort(key=lambda ab: (sum(index[k] for k in ab[0]), ab))
    out = []
    for a, b in pairs:
        A = BurnsideElement(G, tuple((k, 1) for k in a)).to_gset()
        B = BurnsideElement(G, tuple((k, 1) for k in b)).to_gset()
        out.append(GassmannPair(A, B, fixed_point_character(A), is_isomorphic(A, B), a, b))
    return out
