"""Finite permutation groups.

Conventions used throughout the package:

* points are 0-based, a permutation is stored as its image array;
* ``p * q`` means "apply p, then q", so ``(p * q).images == q.images[p.images]``;
* groups act on the right: a point ``x`` is sent to ``x.g`` and
  ``x.(g*h) == (x.g).h``.

A :class:`Group` keeps its elements in lexicographic order of their image
arrays, so element indices are canonical and independent of the generating
set. Index 0 is always the identity.
"""

from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import _config, _kernels
from .errors import ResourceError, ValidationError

MAX_DEGREE = 20  # Lehmer ranks of Sym(20) still fit in int64


@dataclass(frozen=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        imgs = tuple(int(x) for x in self.images)
        if sorted(imgs) != list(range(len(imgs))):
            raise ValidationError(f"not a permutation of 0..{len(imgs) - 1}: {list(imgs)}")
        object.__setattr__(self, "images", imgs)

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, degree: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        imgs = list(range(degree))
        seen = set()
        for cyc in cycles:
            cyc = [int(c) for c in cyc]
            for c in cyc:
                if not 0 <= c < degree:
                    raise ValidationError(f"point {c} out of range for degree {degree}")
                if c in seen:
                    raise ValidationError(f"point {c} appears twice in cycle notation")
                seen.add(c)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                imgs[a] = b
        return cls(tuple(imgs))

    @classmethod
    def parse(cls, degree: int, text: str) -> "Permutation":
        """Parse cycle notation such as ``"(0 1 2)(3 4)"`` or ``"(0,1)"``."""
        text = text.strip()
        if text in ("", "()"):
            return cls.identity(degree)
        if not re.fullmatch(r"(\(\s*\d+(\s*[,\s]\s*\d+)*\s*\))+", text):
            raise ValidationError(f"cannot parse cycle notation {text!r}")
        cycles = [re.split(r"[,\s]+", c.strip()) for c in re.findall(r"\(([^)]*)\)", text)]
        return cls.from_cycles(degree, [[int(x) for x in c if x] for c in cycles])

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if other.degree != self.degree:
            raise ValidationError("degree mismatch in composition")
        return Permutation(tuple(other.images[i] for i in self.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for start in range(self.degree):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            nxt = self.images[start]
            while nxt != start:
                cyc.append(nxt)
                seen.add(nxt)
                nxt = self.images[nxt]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles())) if self.cycles() else 1

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(str(x) for x in c) + ")" for c in cyc)


def lehmer_ranks(perms: np.ndarray) -> np.ndarray:
    """Rank of each row among all permutations of its length, in lexicographic order."""
    perms = np.asarray(perms)
    m, n = perms.shape
    if n == 0:
        return np.zeros(m, dtype=np.int64)
    later_smaller = perms[:, None, :] < perms[:, :, None]
    upper = np.triu(np.ones((n, n), dtype=bool), k=1)
    counts = (later_smaller & upper).sum(axis=2).astype(np.int64)
    weights = np.array([math.factorial(n - 1 - i) for i in range(n)], dtype=np.int64)
    return counts @ weights


class Group:
    """A finite permutation group with canonically ordered elements.

    Build instances with :func:`group_from_generators`. Instances are treated
    as immutable; derived tables are computed lazily and cached.
    """

    def __init__(self, degree: int, generators: tuple[Permutation, ...], elements: np.ndarray,
                 gen_table: np.ndarray, bfs_parent: np.ndarray, bfs_via: np.ndarray,
                 bfs_order: np.ndarray):
        self.degree = degree
        self.generators = generators
        self.elements = elements
        self.elements.flags.writeable = False
        self.order = int(elements.shape[0])
        self.gen_table = gen_table
        self._bfs_parent = bfs_parent
        self._bfs_via = bfs_via
        self._bfs_order = bfs_order
        self._ranks = lehmer_ranks(elements)
        self._hash = hash((degree, self.order, elements.tobytes(), self.generators))

    def __repr__(self) -> str:
        gens = ", ".join(str(g) for g in self.generators)
        return f"Group(degree={self.degree}, order={self.order}, generators=[{gens}])"

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, Group):
            return NotImplemented
        # G-set actions are stored per generator, so the presentation matters too
        return (self.degree == other.degree and self.order == other.order
                and self.generators == other.generators
                and np.array_equal(self.elements, other.elements))

    def __hash__(self) -> int:
        return self._hash

    def spanning_tree(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(visit order, parent, generator used) of a breadth-first Cayley-graph tree.

        Every non-identity element satisfies ``e_j == e_parent[j] * gen[via[j]]``
        and parents are visited before children.
        """
        return self._bfs_order, self._bfs_parent, self._bfs_via

    # -- element access -------------------------------------------------

    def element(self, index: int) -> Permutation:
        return Permutation(tuple(int(x) for x in self.elements[index]))

    def __iter__(self):
        for i in range(self.order):
            yield self.element(i)

    def __len__(self) -> int:
        return self.order

    def indices_of(self, perms: np.ndarray) -> np.ndarray:
        """Element indices of the rows of ``perms`` (each must lie in the group)."""
        perms = np.atleast_2d(np.asarray(perms))
        ranks = lehmer_ranks(perms)
        pos = np.searchsorted(self._ranks, ranks)
        pos = np.clip(pos, 0, self.order - 1)
        if not np.array_equal(self._ranks[pos], ranks):
            raise ValidationError("permutation is not an element of the group")
        return pos

    def index(self, perm: Permutation | Sequence[int]) -> int:
        imgs = perm.images if isinstance(perm, Permutation) else tuple(perm)
        if len(imgs) != self.degree:
            raise ValidationError("degree mismatch")
        return int(self.indices_of(np.array([imgs]))[0])

    def contains(self, perm: Permutation) -> bool:
        try:
            self.index(perm)
        except ValidationError:
            return False
        return True

    @cached_property
    def generator_indices(self) -> tuple[int, ...]:
        return tuple(self.index(g) for g in self.generators)

    @cached_property
    def inverse_images(self) -> np.ndarray:
        """Row i is the image array of the inverse of element i."""
        return np.argsort(self.elements, axis=1).astype(self.elements.dtype)

    @cached_property
    def inverse_table(self) -> np.ndarray:
        return self.indices_of(self.inverse_images)

    @cached_property
    def mult_table(self) -> np.ndarray:
        """``mult_table[i, j]`` is the index of ``element(i) * element(j)``.

        Filled column by column along the breadth-first spanning tree of
        the Cayley graph: if ``e_j = e_p * s`` then ``x * e_j = (x * e_p) * s``.
        """
        n = self.order
        dtype = np.int16 if n < 2 ** 15 else np.int32
        table = np.empty((n, n), dtype=dtype)
        table[:, 0] = np.arange(n)
        gt = self.gen_table
        for j in self._bfs_order[1:]:
            table[:, j] = gt[table[:, self._bfs_parent[j]], self._bfs_via[j]]
        table.flags.writeable = False
        return table

    def multiply(self, i, j):
        """Index (or index array) of element i times element j, without the full table."""
        a = np.atleast_1d(np.asarray(i))
        b = np.atleast_1d(np.asarray(j))
        a, b = np.broadcast_arrays(a, b)
        prod = np.take_along_axis(self.elements[b.ravel()], self.elements[a.ravel()].astype(np.int64), axis=1)
        out = self.indices_of(prod).reshape(a.shape)
        return int(out[0]) if np.ndim(i) == 0 and np.ndim(j) == 0 else out

    def element_orders(self) -> np.ndarray:
        return np.array([self.element(i).order() for i in range(self.order)], dtype=np.int64)

    # -- cached structure ------------------------------------------------

    @cached_property
    def conjugacy_classes(self) -> "ConjugacyClassTable":
        return _compute_classes(self)

    @cached_property
    def subgroup_lattice(self) -> "SubgroupLattice":
        return _enumerate_lattice(self)

    def trivial_subgroup(self) -> "Subgroup":
        return Subgroup(self, np.array([0]), ())

    def whole(self) -> "Subgroup":
        return Subgroup(self, np.arange(self.order), self.generator_indices)

    def subgroup(self, gens: Iterable[int | Permutation]) -> "Subgroup":
        """The subgroup generated by the given elements (indices or permutations)."""
        idx = tuple(g if isinstance(g, (int, np.integer)) else self.index(g) for g in gens)
        idx = tuple(int(i) for i in idx)
        mask = _kernels.closure(self.mult_table, np.array([0]), np.array(idx, dtype=np.int64)) \
            if self.order <= 4096 else _closure_by_perms(self, idx)
        return Subgroup(self, np.flatnonzero(mask), idx)

    def is_transitive(self) -> bool:
        return len(point_orbits(self.degree, self.generators)) <= 1


def point_orbits(degree: int, gens: Sequence[Permutation]) -> list[list[int]]:
    """Orbits of the group generated by ``gens`` on 0..degree-1, sorted by least point."""
    seen = [False] * degree
    out = []
    for start in range(degree):
        if seen[start]:
            continue
        orb = [start]
        seen[start] = True
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = g.images[x]
                if not seen[y]:
                    seen[y] = True
                    orb.append(y)
                    queue.append(y)
        out.append(sorted(orb))
    return out


def _closure_by_perms(G: Group, gen_idx: Sequence[int]) -> np.ndarray:
    # avoids materializing the full table for large groups
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    frontier = np.array([0])
    gens = np.array(gen_idx, dtype=np.int64)
    while frontier.size and gens.size:
        a = np.repeat(frontier, gens.size)
        b = np.tile(gens, frontier.size)
        nxt = np.unique(G.multiply(a, b))
        nxt = nxt[~mask[nxt]]
        mask[nxt] = True
        frontier = nxt
    return mask


def group_from_generators(degree: int, gens: Sequence[Permutation | Sequence[int]],
                          max_order: int | None = None) -> Group:
    """Close ``gens`` under composition.

    Raises ResourceError once the order passes ``max_order`` (default from
    FACTORCENTER_MAX_GROUP_ORDER, 10080 if unset).
    """
    if degree < 0 or degree > MAX_DEGREE:
        raise ValidationError(f"degree must be in 0..{MAX_DEGREE}, got {degree}")
    if max_order is None:
        max_order = _config.max_group_order()
    perms = []
    for g in gens:
        p = g if isinstance(g, Permutation) else Permutation(tuple(g))
        if p.degree != degree:
            raise ValidationError(f"generator {p} has degree {p.degree}, expected {degree}")
        perms.append(p)
    perms = tuple(perms)
    ident = tuple(range(degree))
    found = {ident: 0}
    order_list = [ident]
    parent = [0]
    via = [-1]
    products = []
    head = 0
    while head < len(order_list):
        x = order_list[head]
        row = []
        for s, g in enumerate(perms):
            y = tuple(g.images[i] for i in x)
            k = found.get(y)
            if k is None:
                k = len(order_list)
                if k >= max_order:
                    raise ResourceError(f"group order exceeds the configured bound {max_order}")
                found[y] = k
                order_list.append(y)
                parent.append(head)
                via.append(s)
            row.append(k)
        products.append(row)
        head += 1
    n = len(order_list)
    dtype = np.int8 if degree <= 127 else np.int16
    raw = np.array(order_list, dtype=dtype).reshape(n, degree)
    # canonical lexicographic order
    perm = np.lexsort(raw.T[::-1]) if degree else np.arange(n)
    rank_of = np.empty(n, dtype=np.int64)
    rank_of[perm] = np.arange(n)
    elements = raw[perm]
    gen_table = np.zeros((n, len(perms)), dtype=np.int64)
    if perms:
        gen_table[rank_of] = rank_of[np.array(products, dtype=np.int64)]
    bfs_parent = np.empty(n, dtype=np.int64)
    bfs_parent[rank_of] = rank_of[np.array(parent)]
    bfs_via = np.empty(n, dtype=np.int64)
    bfs_via[rank_of] = np.array(via)
    bfs_order = rank_of  # rank_of[k] is the canonical index of the k-th discovered element
    return Group(degree, perms, elements, gen_table, bfs_parent, bfs_via, bfs_order)


def symmetric_group(n: int) -> Group:
    if n <= 1:
        return group_from_generators(n, [])
    gens = [Permutation.from_cycles(n, [tuple(range(n))]), Permutation.from_cycles(n, [(0, 1)])]
    return group_from_generators(n, gens)


def cyclic_group(n: int) -> Group:
    if n <= 1:
        return group_from_generators(max(n, 1), [])
    return group_from_generators(n, [Permutation.from_cycles(n, [tuple(range(n))])])


def klein_four() -> Group:
    return group_from_generators(4, [Permutation.from_cycles(4, [(0, 1)]),
                                     Permutation.from_cycles(4, [(2, 3)])])


def fano_group() -> Group:
    """The order-168 collineation group of the Fano plane on points 0..6.

    Lines are the translates {i, i+1, i+3} mod 7; the generators are the
    translation i -> i+1 and the involution fixing 0, 1, 3.
    """
    cyc = Permutation(tuple((i + 1) % 7 for i in range(7)))
    inv = Permutation.from_cycles(7, [(2, 6), (4, 5)])
    return group_from_generators(7, [cyc, inv])


FANO_LINES = tuple(tuple(sorted(((i) % 7, (i + 1) % 7, (i + 3) % 7))) for i in range(7))


# ---------------------------------------------------------------------------
# conjugacy classes


@dataclass(frozen=True, eq=False)
class ConjugacyClassTable:
    group: Group
    classes: tuple[np.ndarray, ...]
    representatives: tuple[int, ...]
    class_of: np.ndarray

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.classes)

    def __len__(self) -> int:
        return len(self.classes)


def conjugates_of_element(G: Group, g: int) -> np.ndarray:
    """Indices of x^-1 g x for every x in G (row order follows x)."""
    gi = G.elements[g].astype(np.int64)
    inner = gi[G.inverse_images.astype(np.int64)]
    return G.indices_of(np.take_along_axis(G.elements, inner, axis=1))


def _compute_classes(G: Group) -> ConjugacyClassTable:
    class_of = np.full(G.order, -1, dtype=np.int64)
    classes = []
    for g in range(G.order):
        if class_of[g] >= 0:
            continue
        members = np.unique(conjugates_of_element(G, g))
        class_of[members] = len(classes)
        classes.append(members)
    for c in classes:
        c.flags.writeable = False
    class_of.flags.writeable = False
    return ConjugacyClassTable(G, tuple(classes), tuple(int(c[0]) for c in classes), class_of)


def conjugacy_classes(G: Group) -> ConjugacyClassTable:
    """Conjugacy classes, ordered by least element index (identity first)."""
    return G.conjugacy_classes


# ---------------------------------------------------------------------------
# subgroups


class Subgroup:
    """A subgroup of a parent :class:`Group`, stored as sorted element indices."""

    __slots__ = ("group", "indices", "generators", "_key", "_mask")

    def __init__(self, group: Group, indices, generators: Sequence[int] = ()):
        idx = np.unique(np.asarray(indices, dtype=np.int64))
        idx.flags.writeable = False
        self.group = group
        self.indices = idx
        self.generators = tuple(int(g) for g in generators)
        self._key = None
        self._mask = None

    @property
    def order(self) -> int:
        return int(self.indices.size)

    @property
    def index_in_group(self) -> int:
        return self.group.order // self.order

    @property
    def mask(self) -> np.ndarray:
        if self._mask is None:
            m = np.zeros(self.group.order, dtype=bool)
            m[self.indices] = True
            m.flags.writeable = False
            self._mask = m
        return self._mask

    @property
    def key(self) -> bytes:
        if self._key is None:
            self._key = np.packbits(self.mask).tobytes()
        return self._key

    def __contains__(self, g) -> bool:
        if isinstance(g, Permutation):
            g = self.group.index(g)
        return bool(self.mask[int(g)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.group == other.group and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order}, index={self.index_in_group})"

    def validate(self) -> "Subgroup":
        """Check closure, identity membership and Lagrange; return self."""
        G = self.group
        if self.order == 0 or self.indices[0] != 0:
            raise ValidationError("subgroup must contain the identity")
        if G.order % self.order:
            raise ValidationError("subgroup order does not divide the group order")
        # S contains 1 and S*T is inside S for a set T that generates a group containing S,
        # so S equals that group
        gens = np.array(self.small_generators(), dtype=np.int64)
        if gens.size:
            prods = G.multiply(np.repeat(self.indices, gens.size), np.tile(gens, self.order))
            if not self.mask[prods].all():
                raise ValidationError("element set is not closed under composition")
        return self

    def gens_or_all(self) -> tuple[int, ...]:
        return self.generators if self.generators else tuple(int(i) for i in self.indices)

    def small_generators(self) -> tuple[int, ...]:
        """A short generating set found greedily (deterministic)."""
        G = self.group
        gens: list[int] = []
        have = np.zeros(G.order, dtype=bool)
        have[0] = True
        for g in self.indices:
            if have[g]:
                continue
            gens.append(int(g))
            have = _closure_by_perms(G, gens) if G.order > 4096 else \
                _kernels.closure(G.mult_table, np.array([0]), np.array(gens, dtype=np.int64))
        return tuple(gens)

    def permutations(self) -> list[Permutation]:
        return [self.group.element(int(i)) for i in self.indices]

    def to_group(self) -> Group:
        """The subgroup as a standalone permutation group on the same points."""
        gens = [self.group.element(g) for g in (self.generators or self.small_generators())]
        H = group_from_generators(self.group.degree, gens)
        if H.order != self.order:
            raise ValidationError("stored generators do not generate the subgroup")
        return H

    def conjugate_by(self, x: int) -> "Subgroup":
        """The subgroup x^-1 H x."""
        G = self.group
        xi = int(G.inverse_table[x])
        members = G.multiply(G.multiply(np.full(self.order, xi), self.indices), np.full(self.order, x))
        gens = [int(G.multiply(G.multiply(xi, g), x)) for g in self.generators]
        return Subgroup(G, members, gens)

    def normalizer(self) -> "Subgroup":
        G = self.group
        conj = _kernels.conjugates(G.mult_table, G.inverse_table, np.array(self.gens_or_all()))
        ok = self.mask[conj].all(axis=1)
        return Subgroup(G, np.flatnonzero(ok))

    def is_normal(self) -> bool:
        return self.normalizer().order == self.group.order

    def orbits(self) -> list[list[int]]:
        return point_orbits(self.group.degree, self.permutations())

    def is_transitive(self) -> bool:
        return len(self.orbits()) <= 1


def subgroup_from_elements(G: Group, elements: Iterable[int | Permutation]) -> Subgroup:
    idx = [e if isinstance(e, (int, np.integer)) else G.index(e) for e in elements]
    return Subgroup(G, idx).validate()


def are_conjugate(G: Group, H: Subgroup, K: Subgroup) -> bool:
    """True iff x^-1 H x = K for some x in G.

    Works directly on permutations (no subgroup lattice needed).
    """
    if H.group != G or K.group != G:
        raise ValidationError("subgroups must belong to the given group")
    if H.order != K.order:
        return False
    if H == K:
        return True
    gens = H.generators or H.small_generators()
    ok = np.ones(G.order, dtype=bool)
    for h in gens:
        ok &= K.mask[conjugates_of_element(G, h)]
        if not ok.any():
            return False
    return bool(ok.any())


@dataclass(frozen=True, eq=False)
class SubgroupLattice:
    """All subgroups of a group, grouped into conjugacy classes."""

    group: Group
    representatives: tuple[Subgroup, ...]
    class_sizes: tuple[int, ...]
    _lookup: dict = field(repr=False)

    @property
    def total(self) -> int:
        return sum(self.class_sizes)

    def __len__(self) -> int:
        return len(self.representatives)

    def class_index(self, H: Subgroup) -> int:
        if H.group != self.group:
            raise ValidationError("subgroup belongs to a different group")
        try:
            return self._lookup[H.key]
        except KeyError:
            raise ValidationError("element set is not a subgroup") from None


def _row_key(row: np.ndarray, n: int) -> bytes:
    m = np.zeros(n, dtype=bool)
    m[row] = True
    return np.packbits(m).tobytes()


def _enumerate_lattice(G: Group) -> SubgroupLattice:
    """Layered closure: extend each class representative H by one element g
    at a time. Elements g in the same (N(H)-conjugated) double coset HgH give
    conjugate extensions, so one g per such orbit suffices."""
    max_classes = _config.max_subgroup_classes()
    max_total = _config.max_subgroups()
    n = G.order
    mult = G.mult_table
    inv = G.inverse_table
    lookup: dict[bytes, int] = {}
    reps: list[tuple[np.ndarray, tuple[int, ...]]] = []
    sizes: list[int] = []
    total = 0

    def register(indices: np.ndarray, gens: tuple[int, ...]) -> tuple[int, bool]:
        nonlocal total
        key = _row_key(indices, n)
        cid = lookup.get(key)
        if cid is not None:
            return cid, False
        conj = _kernels.conjugates(mult, inv, indices)
        conj.sort(axis=1)
        uniq, first = np.unique(conj, axis=0, return_index=True)
        total += uniq.shape[0]
        if total > max_total:
            raise ResourceError(f"more than {max_total} subgroups; raise FACTORCENTER_MAX_SUBGROUPS")
        cid = len(reps)
        if cid + 1 > max_classes:
            raise ResourceError(f"more than {max_classes} subgroup classes")
        for row in uniq:
            lookup[_row_key(row, n)] = cid
        x = int(first[0])
        xi = int(inv[x])
        new_gens = tuple(int(mult[mult[xi, g], x]) for g in gens)
        reps.append((uniq[0].astype(np.int64), new_gens))
        sizes.append(int(uniq.shape[0]))
        return cid, True

    start, _ = register(np.array([0], dtype=np.int64), ())
    queue = deque([start])
    while queue:
        cid = queue.popleft()
        h_idx, h_gens = reps[cid]
        if h_idx.size == n:
            continue
        hmask = np.zeros(n, dtype=bool)
        hmask[h_idx] = True
        conj_gens = _kernels.conjugates(mult, inv, np.array(h_gens or (0,), dtype=np.int64))
        norm = np.flatnonzero(hmask[conj_gens].all(axis=1))
        norm_inv = inv[norm]
        done = hmask.copy()
        for g in range(n):
            if done[g]:
                continue
            cg = np.unique(mult[mult[norm_inv, g], norm])
            left = np.unique(mult[h_idx[:, None], cg[None, :]])
            orbit = mult[left[:, None], h_idx[None, :]]
            done[orbit.ravel()] = True
            gens = h_gens + (g,)
            k_mask = _kernels.closure(mult, h_idx, np.array(gens, dtype=np.int64))
            kid, new = register(np.flatnonzero(k_mask), gens)
            if new:
                queue.append(kid)

    order = sorted(range(len(reps)), key=lambda c: (reps[c][0].size, tuple(reps[c][0])))
    remap = {old: new for new, old in enumerate(order)}
    final_lookup = {k: remap[v] for k, v in lookup.items()}
    reps_out = tuple(Subgroup(G, reps[c][0], reps[c][1]) for c in order)
    return SubgroupLattice(G, reps_out, tuple(sizes[c] for c in order), final_lookup)


def subgroups_up_to_conjugacy(G: Group) -> list[Subgroup]:
    """One representative per conjugacy class of subgroups.

    The representative is the conjugate with the lexicographically least
    sorted element-index list; classes are sorted by (order, that list).
    """
    return list(G.subgroup_lattice.representatives)


def subgroup_class_index(G: Group, H: Subgroup) -> int:
    return G.subgroup_lattice.class_index(H)
