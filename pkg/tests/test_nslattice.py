import itertools

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from factorcenter.errors import ValidationError
from factorcenter.nslattice import (BlowupP2, DivisorClass, E, H, Quadric, adjoint_dual,
                                    anticanonical_degree, box_scan, classes_through, cls,
                                    cremona_matrix, families_of_neg_one, intersection, is_isometry,
                                    neg_one_classes, parse_lattice, proper_transform,
                                    rational_degree_classes, weyl_orbit)


def scan(r, bound, j):
    """Plain itertools scan of the two degree equations."""
    out = []
    for v in itertools.product(range(-bound, bound + 1), repeat=r + 1):
        a, b = v[0], v[1:]
        if 3 * a - sum(b) == j and a * a - sum(x * x for x in b) == j - 2:
            out.append(DivisorClass(v))
    return sorted(out)


def test_form_basics():
    L = BlowupP2(3)
    assert intersection(L, H(3), H(3)) == 1
    for i, j in itertools.product(range(1, 4), repeat=2):
        assert intersection(L, E(3, i), E(3, j)) == (-1 if i == j else 0)
    assert L.degree == 6
    Q = Quadric()
    assert intersection(Q, DivisorClass((1, 0)), DivisorClass((0, 1))) == 1
    assert Q.degree == 8
    with pytest.raises(ValidationError):
        intersection(L, H(3), H(2))


def test_signature():
    for L in [BlowupP2(r) for r in range(9)] + [Quadric()]:
        eig = np.linalg.eigvalsh(L.form.astype(float))
        assert (eig > 0).sum() == 1 and (eig < 0).sum() == L.rank - 1
        assert L.degree == (8 if L.kind == "quadric" else 9 - L.r)


def test_parse_lattice():
    assert parse_lattice("blowup:6") == BlowupP2(6)
    assert parse_lattice("quadric") == Quadric()
    with pytest.raises(ValidationError):
        parse_lattice("blowup:x")
    with pytest.raises(ValidationError):
        BlowupP2(9)


def test_rational_classes_examples():
    L3 = BlowupP2(3)
    assert set(rational_degree_classes(L3, 2)) == {H(3) - E(3, i) for i in range(1, 4)}
    assert set(rational_degree_classes(L3, 3)) == {H(3), cls(2, 1, 1, 1)}
    assert len(rational_degree_classes(BlowupP2(4), 2)) == 5
    assert set(rational_degree_classes(Quadric(), 2)) == {DivisorClass((1, 0)), DivisorClass((0, 1))}
    assert len(rational_degree_classes(Quadric(), 4)) == 1


def test_rational_classes_range_guard():
    with pytest.raises(ValidationError):
        rational_degree_classes(BlowupP2(3), 6)
    with pytest.raises(ValidationError):
        rational_degree_classes(BlowupP2(3), 0)
    with pytest.raises(ValidationError):
        rational_degree_classes(Quadric(), 3)


@pytest.mark.parametrize("r", range(0, 6))
def test_rational_classes_match_itertools_scan(r):
    for j in range(1, 9 - r):
        got = list(rational_degree_classes(BlowupP2(r), j))
        assert got == scan(r, 3, j)
        assert all(0 <= D.coords[0] <= 3 for D in got)


def test_class_list_sorted_and_consistent():
    L = BlowupP2(5)
    C = rational_degree_classes(L, 2)
    assert list(C.classes) == sorted(C.classes)
    for D in C:
        assert intersection(L, D, D) == 0 and anticanonical_degree(L, D) == 2


def test_neg_one_examples():
    assert len(neg_one_classes(BlowupP2(0))) == 0
    C3 = neg_one_classes(BlowupP2(3))
    assert len(C3) == 6
    assert sum(1 for D in C3 if D.coords[0] == 0) == 3
    C6 = neg_one_classes(BlowupP2(6))
    fam = families_of_neg_one(6)
    assert [len(fam[k]) for k in ("E_i", "H-E_i-E_j", "2H-5E")] == [6, 15, 6]
    assert set(C6) == set(fam["E_i"]) | set(fam["H-E_i-E_j"]) | set(fam["2H-5E"])


def test_neg_one_counts_against_scans():
    counts = [len(neg_one_classes(BlowupP2(r))) for r in range(9)]
    assert counts == [0, 1, 3, 6, 10, 16, 27, 56, 240]
    for r in range(0, 5):
        assert list(neg_one_classes(BlowupP2(r))) == scan(r, 5, 1)
    # beyond the small box the Weyl orbit of E1 is the oracle
    for r in (7, 8):
        assert set(neg_one_classes(BlowupP2(r))) == set(weyl_orbit(BlowupP2(r), E(r, 1)))


def test_small_box_misses_classes_for_r8():
    # the largest (-1)-class on the blow-up in 8 points has a = 6
    assert max(D.coords[0] for D in neg_one_classes(BlowupP2(8))) == 6
    assert len(box_scan(8, 3, 1)) < 240


def test_box_scan_matches_itertools():
    for r in range(0, 4):
        for j in (1, 2, 3):
            assert box_scan(r, 4, j) == scan(r, 4, j)


def test_neg_one_pairs_meet_at_most_once():
    for r in range(2, 7):
        L = BlowupP2(r)
        C = list(neg_one_classes(L))
        for x, y in itertools.combinations(C, 2):
            assert intersection(L, x, y) <= 1


def test_adjoint_dual_examples():
    L = BlowupP2(3)
    assert adjoint_dual(L, H(3) - E(3, 1)) == cls(2, 0, 1, 1)
    assert adjoint_dual(Quadric(), DivisorClass((1, 0))) == DivisorClass((1, 2))


@given(st.integers(0, 7), st.data())
def test_adjoint_dual_is_involution_and_bijection(r, data):
    L = BlowupP2(r)
    if L.degree < 2:
        return
    j = data.draw(st.integers(1, L.degree - 1))
    C = rational_degree_classes(L, j)
    dual = rational_degree_classes(L, L.degree - j)
    image = {adjoint_dual(L, D) for D in C}
    assert image == set(dual.classes)
    for D in C:
        assert adjoint_dual(L, adjoint_dual(L, D)) == D


def test_classes_through_examples():
    L = BlowupP2(6)
    C = rational_degree_classes(L, 2)
    assert classes_through(C, []) == C
    # conics through five of the six points
    deg6 = [D for D in rational_degree_classes(L, 1) if D.coords[0] == 2]
    assert len(deg6) == 6
    for D in deg6:
        assert sum(D.coords[1:]) == 5
    C1 = rational_degree_classes(L, 1)
    through = classes_through(C1, [4, 5], multiplicity_exact=True)
    assert all(D.coords[4] == 1 and D.coords[5] == 1 for D in through)
    with pytest.raises(ValidationError):
        classes_through(C1, [7])


@given(st.integers(0, 6), st.data())
def test_proper_transform_arithmetic(r0, data):
    L0 = BlowupP2(r0)
    delta = data.draw(st.integers(1, min(L0.degree - 1, 9 - r0)))
    r = r0 + delta - 1
    pool = list(rational_degree_classes(L0, delta))
    assume(r <= 8 and pool)
    C = data.draw(st.sampled_from(pool))
    L = BlowupP2(r)
    T = proper_transform(C, r, range(r0 + 1, r + 1))
    assert intersection(L, T, T) == -1 and anticanonical_degree(L, T) == 1


def test_proper_transform_of_conics_through_five_points():
    L = BlowupP2(6)
    conic = cls(2, *([0] * 6))  # degree 6, self-intersection 4
    for omit in range(1, 7):
        T = proper_transform(conic, 6, [i for i in range(1, 7) if i != omit])
        assert intersection(L, T, T) == -1 and anticanonical_degree(L, T) == 1


def test_cremona_is_isometry():
    for r in range(3, 9):
        M = cremona_matrix(r)
        assert is_isometry(BlowupP2(r), M)
        assert np.array_equal(M @ M, np.eye(r + 1, dtype=np.int64))
    assert tuple(cremona_matrix(3) @ H(3).vector) == (2, 1, 1, 1)


def test_classlist_json():
    doc = neg_one_classes(BlowupP2(2)).to_json()
    assert doc["kind"] == "blowup" and doc["r"] == 2 and doc["j"] == 1 and doc["count"] == 3
