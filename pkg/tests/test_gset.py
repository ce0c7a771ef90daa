import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from factorcenter.errors import ResourceError, ValidationError
from factorcenter.gset import (BurnsideElement, GSet, burnside_canonicalize, coset_gset,
                               conjugation_automorphism, disjoint_union, faithful_quotient,
                               fixed_point_character, gassmann_search, gset_from_subgroup, induce,
                               is_gassmann, is_isomorphic, kernel, mu, natural_gset, orbits,
                               restrict, stabilizer, trivial_gset, twist, twist_burnside)
from factorcenter.links import random_gset
from factorcenter.permgrp import (FANO_LINES, Permutation, conjugacy_classes, cyclic_group,
                                  fano_group, group_from_generators, klein_four, subgroup_from_elements,
                                  symmetric_group)


def brute_fixed_points(A: GSet) -> list[int]:
    """Fixed points per class representative, with each element's action rebuilt
    by a plain BFS over generator words (independent of the library's tables)."""
    G = A.group
    n = G.degree
    ident = tuple(range(n))
    act = {ident: tuple(range(A.size))}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g, img in zip(G.generators, A.action):
                q = tuple(g.images[p[i]] for i in range(n))  # p then g
                if q not in act:
                    act[q] = tuple(img[act[p][x]] for x in range(A.size))
                    nxt.append(q)
        frontier = nxt
    table = conjugacy_classes(G)
    out = []
    for rep in table.representatives:
        perm = act[tuple(int(x) for x in G.elements[rep])]
        out.append(sum(1 for x in range(A.size) if perm[x] == x))
    return out


def klein_pair():
    G = klein_four()
    reps = G.subgroup_lattice.representatives
    order2 = [k for k, H in enumerate(reps) if H.order == 2]
    top = len(reps) - 1
    A = disjoint_union(*(coset_gset(G, k) for k in order2), name="A")
    B = disjoint_union(coset_gset(G, 0), coset_gset(G, top), coset_gset(G, top), name="B")
    return G, A, B


def fano_points_lines():
    F = fano_group()
    points = natural_gset(F, "points")
    lines = sorted(FANO_LINES)
    index = {frozenset(l): i for i, l in enumerate(lines)}
    action = tuple(tuple(index[frozenset(g(x) for x in l)] for l in lines) for g in F.generators)
    return F, points, GSet(F, 7, action, "lines")


def test_action_must_respect_relations():
    S3 = symmetric_group(3)  # generators: a 3-cycle, then a transposition
    assert S3.generators[0].order() == 3
    GSet(S3, 2, ((0, 1), (1, 0)))
    with pytest.raises(ValidationError):
        GSet(S3, 2, ((1, 0), (1, 0)))


def test_action_must_be_bijection():
    with pytest.raises(ValidationError):
        GSet(cyclic_group(2), 2, ((0, 0),))


def test_coset_sets():
    G = klein_four()
    whole = gset_from_subgroup(G, G.whole())
    assert whole.size == 1
    H1 = G.subgroup_lattice.representatives[1]
    A = gset_from_subgroup(G, H1)
    assert A.size == 2 and len(orbits(A)) == 1
    assert stabilizer(A, 0) == H1
    F = fano_group()
    pt = subgroup_from_elements(F, [i for i in range(F.order) if F.elements[i][0] == 0])
    P = gset_from_subgroup(F, pt)
    assert P.size == 7 and len(orbits(P)) == 1


def test_orbits_examples():
    G, A, B = klein_pair()
    assert len(orbits(trivial_gset(G, 3))) == 3
    assert sorted(len(o) for o in orbits(A)) == [2, 2, 2]
    assert sorted(len(o) for o in orbits(B)) == [1, 1, 4]


def test_fixed_point_character_examples():
    C2 = cyclic_group(2)
    reg = gset_from_subgroup(C2, C2.trivial_subgroup())
    assert fixed_point_character(reg).tolist() == [2, 0]
    G, A, B = klein_pair()
    assert fixed_point_character(A).tolist() == [6, 2, 2, 2]
    assert fixed_point_character(A).tolist() == brute_fixed_points(A)
    F, P, L = fano_points_lines()
    assert np.array_equal(fixed_point_character(P), fixed_point_character(L))


def test_faithful_quotient_examples():
    G, A, B = klein_pair()
    Q, A2 = faithful_quotient(A)
    assert Q.order == 4 and A2.size == 6
    Q, _ = faithful_quotient(trivial_gset(G, 3))
    assert Q.order == 1
    H1 = G.subgroup_lattice.representatives[1]
    Q, X = faithful_quotient(gset_from_subgroup(G, H1))
    assert Q.order == 2
    assert kernel(gset_from_subgroup(G, H1)) == H1


def test_gassmann_and_isomorphism_examples():
    G, A, B = klein_pair()
    assert is_gassmann(A, A) and is_isomorphic(A, A)
    assert is_gassmann(A, B) and not is_isomorphic(A, B)
    F, P, L = fano_points_lines()
    assert is_gassmann(P, L) and not is_isomorphic(P, L)
    assert not is_gassmann(P, trivial_gset(F, 7))


def test_is_gassmann_needs_same_group():
    with pytest.raises(ValidationError):
        is_gassmann(trivial_gset(cyclic_group(2)), trivial_gset(cyclic_group(3)))


def test_burnside_examples():
    G, A, B = klein_pair()
    assert burnside_canonicalize(G, [A], [A]).is_zero()
    e = burnside_canonicalize(G, [A], [B])
    assert len(e.coefficients) == 5  # three order-2 classes, the trivial class, the whole group
    assert e.degree == 0
    assert not np.any(mu(e))
    assert not np.any(mu(BurnsideElement.zero(G)))
    C1 = cyclic_group(1)
    Z2, Z3 = trivial_gset(C1, 2), trivial_gset(C1, 3)
    v = burnside_canonicalize(C1, [disjoint_union(Z2, Z3)], [trivial_gset(C1, 1)])
    assert mu(v).tolist() == [4]


def test_dp6_virtual_set_coefficients():
    S3 = symmetric_group(3)
    Z3 = natural_gset(S3, "Z3")
    Z2 = GSet(S3, 2, tuple((1, 0) if g.order() == 2 else (0, 1) for g in S3.generators), "Z2")
    e = burnside_canonicalize(S3, [disjoint_union(Z2, Z3)], [trivial_gset(S3)])
    as_dict = e.as_dict()
    reps = S3.subgroup_lattice.representatives
    by_order = {reps[k].order: c for k, c in as_dict.items()}
    # [S3/A3] + [S3/C2] - [pt]
    assert by_order == {3: 1, 2: 1, 6: -1}


def test_gassmann_search_examples():
    pairs = gassmann_search(klein_four(), 6)
    assert len(pairs) == 1
    assert pairs[0].orbit_shapes() == ((2, 2, 2), (4, 1, 1))
    assert not pairs[0].isomorphic
    for n in (1, 4, 6):
        assert gassmann_search(cyclic_group(n), 8) == []
    pairs = gassmann_search(fano_group(), 7, transitive_only=True)
    assert len(pairs) == 1 and pairs[0].degree == 7


def test_gassmann_search_cap():
    with pytest.raises(ResourceError):
        gassmann_search(cyclic_group(2), 13)


groups = st.sampled_from([cyclic_group(4), klein_four(), symmetric_group(3), symmetric_group(4),
                          group_from_generators(4, [(1, 2, 3, 0), (0, 3, 2, 1)])])


@st.composite
def gset_pairs(draw):
    G = draw(groups)
    rng = random.Random(draw(st.integers(0, 10**6)))
    A = random_gset(G, draw(st.integers(1, 6)), rng)
    B = random_gset(G, draw(st.integers(1, 6)), rng)
    return G, A, B


@given(gset_pairs())
def test_mu_is_additive(data):
    G, A, B = data
    eA, eB = BurnsideElement.of(A), BurnsideElement.of(B)
    assert np.array_equal(mu(eA + eB), mu(eA) + mu(eB))
    assert np.array_equal(mu(eA), fixed_point_character(A))
    assert mu(eA)[0] == A.size
    assert fixed_point_character(A).tolist() == brute_fixed_points(A)


@given(gset_pairs())
def test_isomorphic_implies_gassmann(data):
    G, A, B = data
    if is_isomorphic(A, B):
        assert is_gassmann(A, B)
    if is_gassmann(A, B):
        assert len(orbits(A)) == len(orbits(B))


@given(gset_pairs(), st.integers(0, 10**6))
def test_relabelled_sets_are_isomorphic(data, seed):
    G, A, _ = data
    rng = random.Random(seed)
    perm = list(range(A.size))
    rng.shuffle(perm)
    inv = np.argsort(perm)
    action = tuple(tuple(perm[a[inv[i]]] for i in range(A.size)) for a in A.action)
    B = GSet(G, A.size, action)
    assert is_isomorphic(A, B) and is_gassmann(A, B)


@given(gset_pairs())
def test_canonicalize_zero_iff_same_stabilizer_classes(data):
    G, A, B = data
    e = burnside_canonicalize(G, [A], [B])
    assert e.is_zero() == is_isomorphic(A, B)


@given(gset_pairs())
def test_normal_stabilizer_transitive_sets(data):
    G, _, _ = data
    for k, H in enumerate(G.subgroup_lattice.representatives):
        if not H.is_normal():
            continue
        A = coset_gset(G, k)
        for k2 in range(len(G.subgroup_lattice)):
            B = coset_gset(G, k2)
            if B.size == A.size and is_gassmann(A, B):
                assert is_isomorphic(A, B)


def test_galois_relabelling_commutes_with_burnside():
    G, A, B = klein_pair()
    sigma = Permutation.parse(4, "(0 2)(1 3)")  # swaps the two generators
    aut = conjugation_automorphism(G, sigma)
    e = burnside_canonicalize(G, [A], [B])
    assert twist_burnside(e, aut) == burnside_canonicalize(G, [twist(A, aut)], [twist(B, aut)])
    assert is_gassmann(twist(A, aut), twist(B, aut))
    assert not is_isomorphic(twist(A, aut), twist(B, aut))


def test_restriction_and_induction_smoke():
    G = symmetric_group(3)
    H = G.subgroup_lattice.representatives[1]
    Hg = H.to_group()
    X = natural_gset(G)
    R = restrict(X, H, Hg)
    assert R.size == 3
    assert sorted(len(o) for o in orbits(R)) == sorted(len(o) for o in H.orbits())
    pt = trivial_gset(Hg)
    I = induce(G, H, pt)
    assert I.size == G.order // H.order
    assert is_isomorphic(I, gset_from_subgroup(G, H))
