"""Picard lattices of plane blow-ups and of the quadric, and enumeration of
rational curve classes.

On a blow-up of the plane in r points a class is written ``D = aH - sum b_i E_i``
and stored as the integer vector ``(a, b_1, ..., b_r)``. With that sign
convention the form is ``D.D' = a a' - sum b_i b_i'``, and the canonical class
``K = -3H + sum E_i`` is the vector ``(-3, -1, ..., -1)``.

On the quadric a class ``(a, b)`` is ``a F_1 + b F_2`` for the two rulings,
with ``F_1.F_2 = 1`` and ``K = (-2, -2)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import ValidationError


@dataclass(frozen=True)
class PicardLattice:
    kind: str  # "blowup" or "quadric"
    r: int = 0

    def __post_init__(self):
        if self.kind == "blowup":
            if not 0 <= self.r <= 8:
                raise ValidationError(f"blow-up of the plane needs 0 <= r <= 8, got {self.r}")
        elif self.kind == "quadric":
            if self.r != 0:
                raise ValidationError("quadric lattice takes no r")
        else:
            raise ValidationError(f"unknown lattice kind {self.kind!r}")

    @property
    def rank(self) -> int:
        return self.r + 1 if self.kind == "blowup" else 2

    @property
    def form(self) -> np.ndarray:
        if self.kind == "quadric":
            return np.array([[0, 1], [1, 0]], dtype=np.int64)
        return np.diag([1] + [-1] * self.r).astype(np.int64)

    @property
    def canonical(self) -> "DivisorClass":
        if self.kind == "quadric":
            return DivisorClass((-2, -2))
        return DivisorClass((-3,) + (-1,) * self.r)

    @property
    def degree(self) -> int:
        """K.K"""
        return intersection(self, self.canonical, self.canonical)

    def describe(self) -> dict:
        return {"kind": self.kind, "r": self.r}

    def __str__(self) -> str:
        return "Quadric" if self.kind == "quadric" else f"BlowupP2({self.r})"


def BlowupP2(r: int) -> PicardLattice:  # noqa: N802 - mirrors the mathematical name
    return PicardLattice("blowup", r)


def Quadric() -> PicardLattice:  # noqa: N802
    return PicardLattice("quadric")


def parse_lattice(text: str) -> PicardLattice:
    """``"blowup:6"`` or ``"quadric"``."""
    text = text.strip().lower()
    if text == "quadric":
        return Quadric()
    if text.startswith("blowup:"):
        try:
            return BlowupP2(int(text.split(":", 1)[1]))
        except ValueError:
            pass
    raise ValidationError(f"lattice kind must be 'blowup:<r>' or 'quadric', got {text!r}")


@dataclass(frozen=True, order=True)
class DivisorClass:
    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(x) for x in self.coords))

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.coords, dtype=np.int64)

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        _same_rank(self, other)
        return DivisorClass(tuple(x + y for x, y in zip(self.coords, other.coords)))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        _same_rank(self, other)
        return DivisorClass(tuple(x - y for x, y in zip(self.coords, other.coords)))

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(tuple(-x for x in self.coords))

    def __len__(self) -> int:
        return len(self.coords)

    def label(self, kind: str = "blowup") -> str:
        """Human-readable form such as ``2H - E1 - E2``."""
        if kind == "quadric":
            return f"({self.coords[0]},{self.coords[1]})"
        a, bs = self.coords[0], self.coords[1:]
        parts = []
        if a:
            parts.append(f"{a}H" if a != 1 else "H")
        for i, b in enumerate(bs, start=1):
            if b == 0:
                continue
            mag = "" if abs(b) == 1 else str(abs(b))
            sign = "-" if b > 0 else "+"
            parts.append(f"{sign} {mag}E{i}")
        if not parts:
            return "0"
        text = " ".join(parts)
        if text.startswith("- "):
            text = "-" + text[2:]
        elif text.startswith("+ "):
            text = text[2:]
        return text


def _same_rank(d1: DivisorClass, d2: DivisorClass):
    if len(d1) != len(d2):
        raise ValidationError(f"rank mismatch: {len(d1)} vs {len(d2)}")


def H(r: int) -> DivisorClass:
    return DivisorClass((1,) + (0,) * r)


def E(r: int, i: int) -> DivisorClass:
    """Exceptional class E_i, 1-based, so E_i = (0; 0..,-1,..0) in (a; b) coordinates."""
    if not 1 <= i <= r:
        raise ValidationError(f"E_{i} does not exist for r={r}")
    v = [0] * (r + 1)
    v[i] = -1
    return DivisorClass(tuple(v))


def cls(a: int, *b: int) -> DivisorClass:
    """Shorthand for aH - sum b_i E_i."""
    return DivisorClass((a,) + tuple(b))


def intersection(L: PicardLattice, D: DivisorClass, D2: DivisorClass) -> int:
    if len(D) != L.rank or len(D2) != L.rank:
        raise ValidationError(f"class of rank {len(D)}/{len(D2)} on lattice of rank {L.rank}")
    return int(D.vector @ L.form @ D2.vector)


def anticanonical_degree(L: PicardLattice, D: DivisorClass) -> int:
    """(-K).D"""
    return -intersection(L, L.canonical, D)


def adjoint_dual(L: PicardLattice, D: DivisorClass) -> DivisorClass:
    """-K - D"""
    if len(D) != L.rank:
        raise ValidationError("rank mismatch")
    return -L.canonical - D


@dataclass(frozen=True)
class ClassList:
    lattice: PicardLattice
    j: int
    classes: tuple[DivisorClass, ...]

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(sorted(self.classes)))

    def __len__(self) -> int:
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    def __contains__(self, D) -> bool:
        return D in self.classes

    def index(self, D: DivisorClass) -> int:
        return self.classes.index(D)

    def vectors(self) -> list[list[int]]:
        return [list(D.coords) for D in self.classes]

    def to_json(self) -> dict:
        return {"kind": self.lattice.kind, "r": self.lattice.r, "j": self.j,
                "count": len(self.classes), "classes": self.vectors(),
                "labels": [D.label(self.lattice.kind) for D in self.classes]}


def _vectors_with_sum_and_squares(n: int, total: int, squares: int) -> Iterable[tuple[int, ...]]:
    """All integer n-tuples with the given sum and sum of squares.

    Pruned by Cauchy-Schwarz: the remaining m entries need total^2 <= m * squares.
    """
    if n == 0:
        if total == 0 and squares == 0:
            yield ()
        return
    if squares < 0 or total * total > n * squares:
        return
    bound = math.isqrt(squares)
    for x in range(-bound, bound + 1):
        for rest in _vectors_with_sum_and_squares(n - 1, total - x, squares - x * x):
            yield (x,) + rest


def a_range(r: int, t: int, s: int) -> range:
    """Values of a allowing a solution of 3a - sum b = t, a^2 - sum b^2 = s.

    Cauchy-Schwarz gives (3a - t)^2 <= r (a^2 - s), i.e.
    (9 - r) a^2 - 6 t a + t^2 + r s <= 0.
    """
    A, B, C = 9 - r, -6 * t, t * t + r * s
    disc = B * B - 4 * A * C
    if disc < 0:
        return range(0)
    root = math.sqrt(disc)
    lo = math.floor((-B - root) / (2 * A)) - 1
    hi = math.ceil((-B + root) / (2 * A)) + 1
    return range(lo, hi + 1)


def solve_degree_equations(r: int, t: int, s: int) -> list[DivisorClass]:
    """All (a; b) with (-K).D = t and D.D = s on the blow-up in r points."""
    out = []
    for a in a_range(r, t, s):
        for b in _vectors_with_sum_and_squares(r, 3 * a - t, a * a - s):
            out.append(DivisorClass((a,) + b))
    return sorted(out)


def rational_degree_classes(L: PicardLattice, j: int) -> ClassList:
    """Classes with D.D = j - 2 and (-K).D = j.

    On a plane blow-up of degree d this requires 1 <= j <= d - 1; then every
    solution automatically has 0 <= a <= 3 (checked). On the quadric j must be
    even and at least 2.
    """
    if L.kind == "quadric":
        if j < 2 or j % 2:
            raise ValidationError(f"on the quadric j must be even and >= 2, got {j}")
        half = j // 2
        found = {DivisorClass((1, half - 1)), DivisorClass((half - 1, 1))}
        # cross-check against the two defining equations
        for D in found:
            assert intersection(L, D, D) == j - 2 and anticanonical_degree(L, D) == j
        return ClassList(L, j, tuple(found))
    d = L.degree
    if not 1 <= j <= d - 1:
        raise ValidationError(f"j must satisfy 1 <= j <= {d - 1} on {L}, got {j}")
    found = solve_degree_equations(L.r, j, j - 2)
    for D in found:
        if not 0 <= D.coords[0] <= 3:
            raise AssertionError(f"solution {D} outside 0 <= a <= 3")
    return ClassList(L, j, tuple(found))


def neg_one_classes(L: PicardLattice) -> ClassList:
    """All classes with D.D = -1 and K.D = -1."""
    if L.kind != "blowup":
        raise ValidationError("(-1)-classes are enumerated on plane blow-ups only")
    return ClassList(L, 1, tuple(solve_degree_equations(L.r, 1, -1)))


def box_scan(r: int, bound: int, j: int) -> list[DivisorClass]:
    """Brute-force oracle: every vector with entries in [-bound, bound] solving
    the degree-j equations. Independent of :func:`solve_degree_equations`."""
    rows = _kernels.box_scan(r, bound, j, j - 2)
    return sorted(DivisorClass(tuple(int(x) for x in row)) for row in rows)


def classes_through(C: ClassList, points: Iterable[int], multiplicity_exact: bool = False) -> ClassList:
    """Members with b_i >= 1 (or b_i == 1) for every listed 1-based point i."""
    if C.lattice.kind != "blowup":
        raise ValidationError("classes_through needs a plane blow-up lattice")
    pts = sorted(set(points))
    for i in pts:
        if not 1 <= i <= C.lattice.r:
            raise ValidationError(f"point index {i} out of range 1..{C.lattice.r}")
    if multiplicity_exact:
        keep = [D for D in C if all(D.coords[i] == 1 for i in pts)]
    else:
        keep = [D for D in C if all(D.coords[i] >= 1 for i in pts)]
    return ClassList(C.lattice, C.j, tuple(keep))


def pullback(D: DivisorClass, r_new: int) -> DivisorClass:
    """Pull a class on BlowupP2(r) back to BlowupP2(r_new), r_new >= r."""
    if r_new + 1 < len(D):
        raise ValidationError("cannot pull back to a smaller blow-up")
    return DivisorClass(D.coords + (0,) * (r_new + 1 - len(D)))


def proper_transform(D: DivisorClass, r_new: int, points: Sequence[int]) -> DivisorClass:
    """Pull back and subtract E_i for each listed (1-based) new point."""
    v = list(pullback(D, r_new).coords)
    for i in points:
        v[i] += 1
    return DivisorClass(tuple(v))


def reflection_matrix(L: PicardLattice, root: DivisorClass) -> np.ndarray:
    """Matrix of x -> x + (x.root) root for a root with root.root = -2."""
    if intersection(L, root, root) != -2:
        raise ValidationError("reflection needs a (-2)-class")
    v = root.vector
    return np.eye(L.rank, dtype=np.int64) + np.outer(v, v @ L.form)


def simple_roots(r: int) -> list[DivisorClass]:
    """E_i - E_{i+1} and H - E_1 - E_2 - E_3 (when r >= 3)."""
    roots = []
    for i in range(1, r):
        v = [0] * (r + 1)
        v[i], v[i + 1] = -1, 1
        roots.append(DivisorClass(tuple(v)))
    if r >= 3:
        roots.append(DivisorClass((1, 1, 1, 1) + (0,) * (r - 3)))
    return roots


def weyl_orbit(L: PicardLattice, start: DivisorClass) -> list[DivisorClass]:
    """Orbit of a class under the group generated by the simple reflections."""
    mats = [reflection_matrix(L, a) for a in simple_roots(L.r)]
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for D in frontier:
            for M in mats:
                img = DivisorClass(tuple(M @ D.vector))
                if img not in seen:
                    seen.add(img)
                    nxt.append(img)
        frontier = nxt
    return sorted(seen)


def cremona_matrix(r: int) -> np.ndarray:
    """Standard quadratic transformation on E_1, E_2, E_3 (r >= 3).

    H -> 2H - E1 - E2 - E3 and E_i -> H - E_j - E_k.
    """
    if r < 3:
        raise ValidationError("Cremona involution needs r >= 3")
    return reflection_matrix(BlowupP2(r), DivisorClass((1, 1, 1, 1) + (0,) * (r - 3)))


def permutation_matrix(r: int, sigma: Sequence[int]) -> np.ndarray:
    """Matrix sending E_{i+1} to E_{sigma[i]+1} and fixing H."""
    M = np.zeros((r + 1, r + 1), dtype=np.int64)
    M[0, 0] = 1
    for i, s in enumerate(sigma):
        M[s + 1, i + 1] = 1
    return M


def is_isometry(L: PicardLattice, M: np.ndarray) -> bool:
    M = np.asarray(M, dtype=np.int64)
    if M.shape != (L.rank, L.rank):
        return False
    K = L.canonical.vector
    return bool(np.array_equal(M.T @ L.form @ M, L.form) and np.array_equal(M @ K, K))


def neg_one_count_table(max_r: int = 8) -> list[int]:
    return [len(neg_one_classes(BlowupP2(r))) for r in range(max_r + 1)]


def families_of_neg_one(r: int) -> dict[str, list[DivisorClass]]:
    """(-1)-classes written down by shape: E_i, H - E_i - E_j, and conics
    2H - (sum of five E's). For r = 6 the last family is -K - H + E_i."""
    fam = {"E_i": [], "H-E_i-E_j": [], "2H-5E": []}
    for i in range(1, r + 1):
        fam["E_i"].append(E(r, i))
    for i, j in itertools.combinations(range(1, r + 1), 2):
        v = [1] + [0] * r
        v[i] = v[j] = 1
        fam["H-E_i-E_j"].append(DivisorClass(tuple(v)))
    for five in itertools.combinations(range(1, r + 1), 5):
        v = [2] + [0] * r
        for i in five:
            v[i] = 1
        fam["2H-5E"].append(DivisorClass(tuple(v)))
    return fam
