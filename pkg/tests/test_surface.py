import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from factorcenter.errors import ValidationError
from factorcenter.gset import GSet, fixed_point_character, is_isomorphic, mu, natural_gset, orbits, trivial_gset
from factorcenter.links import metacyclic20, random_gset, random_model
from factorcenter.nslattice import BlowupP2, Quadric, cremona_matrix, is_isometry, permutation_matrix
from factorcenter.permgrp import cyclic_group, klein_four, symmetric_group
from factorcenter.surface import (LatticeAction, base_lattice_action, dp5_matrix, has_conic_bundle,
                                  make_model, mj_duality_check, mj_set, models_isomorphic,
                                  ns_character, picard_rank, singular_fiber_count, split_model,
                                  virtual_ns_set)


def five_cycle_model():
    C5 = cyclic_group(5)
    return make_model("dP5", C5, Z5=natural_gset(C5, "Z5"))


def test_virtual_ns_set_examples():
    G = klein_four()
    assert mu(virtual_ns_set(split_model("dP9", G))).tolist() == [1, 1, 1, 1]
    assert mu(virtual_ns_set(split_model("C8", G))).tolist() == [2, 2, 2, 2]
    assert mu(virtual_ns_set(split_model("dP6", G))).tolist() == [4, 4, 4, 4]
    assert mu(virtual_ns_set(split_model("dP5", G))).tolist() == [5, 5, 5, 5]
    S = five_cycle_model()
    # identity fixes all five pencils, a 5-cycle fixes none
    assert mu(virtual_ns_set(S)).tolist() == [5, 0, 0, 0, 0]


def test_ns_character_trace_examples():
    S3 = symmetric_group(3)
    Z2 = GSet(S3, 2, tuple((1, 0) if g.order() == 2 else (0, 1) for g in S3.generators), "Z2")
    S = make_model("dP6", S3, Z2=Z2, Z3=natural_gset(S3, "Z3"))
    chi = ns_character(S)
    assert chi[0] == 4
    assert np.array_equal(chi, mu(virtual_ns_set(S)))
    assert picard_rank(S) == 1


def test_trivial_blowup_character_is_constant():
    G = cyclic_group(3)
    act = LatticeAction.trivial(BlowupP2(6), G)
    S = make_model("P2Blowup", G, lattice_action=act)
    assert ns_character(S).tolist() == [7, 7, 7]
    assert picard_rank(S) == 7
    with pytest.raises(ValidationError):
        virtual_ns_set(S)


def test_stack_adds_permutation_characters():
    G = cyclic_group(4)
    W = natural_gset(G, "W")
    S = split_model("dP9", G).push(W)
    assert ns_character(S).tolist() == (1 + fixed_point_character(W)).tolist()
    assert picard_rank(S) == 2


def test_mj_examples():
    G = cyclic_group(2)
    S = make_model("P2Blowup", G, lattice_action=LatticeAction.trivial(BlowupP2(3), G))
    M2 = mj_set(S, 2)
    assert M2.size == 3 and len(orbits(M2)) == 3
    assert mj_set(S, 1).size == 6
    M2 = mj_set(five_cycle_model(), 2)
    assert M2.size == 5 and len(orbits(M2)) == 1
    assert mj_set(five_cycle_model(), 1).size == 10
    Q = split_model("dP8", G)
    assert mj_set(Q, 4).size == 1
    assert mj_set(Q, 2).size == 2


def test_mj_on_stacked_model_rejected():
    G = cyclic_group(2)
    S = split_model("dP9", G).push(trivial_gset(G))
    with pytest.raises(ValidationError):
        mj_set(S, 1)


def test_dp5_conic_pencils_are_the_data():
    S = five_cycle_model()
    assert is_isomorphic(mj_set(S, 2), S.get("Z5"))


def test_singular_fiber_count():
    assert singular_fiber_count(8) == 0
    assert singular_fiber_count(5) == 3
    assert singular_fiber_count(0) == 8
    with pytest.raises(ValidationError):
        singular_fiber_count(9)


def test_picard_rank_examples():
    G = klein_four()
    assert picard_rank(split_model("dP9", G)) == 1
    assert picard_rank(split_model("dP8", G)) == 2
    assert picard_rank(split_model("dP6", G)) == 4
    assert picard_rank(split_model("dP5", G)) == 5
    assert picard_rank(five_cycle_model()) == 1


def test_corrupted_matrix_rejected():
    G = cyclic_group(2)
    M = np.eye(4, dtype=np.int64)
    M[0, 1] = 1
    with pytest.raises(ValidationError):
        LatticeAction(BlowupP2(3), G, [M])
    # an isometry of order 2 cannot represent a generator of order 3
    with pytest.raises(ValidationError):
        LatticeAction(BlowupP2(3), cyclic_group(3), [cremona_matrix(3)])
    with pytest.raises(ValidationError):
        LatticeAction(BlowupP2(3), G, [np.eye(3, dtype=np.int64)])


def test_dp5_permutations_are_unimodular():
    # every permutation of the five pencils comes from an integral isometry
    for sigma in [(1, 2, 3, 4, 0), (1, 0, 2, 3, 4), (0, 1, 2, 3, 4)]:
        M = dp5_matrix(sigma)
        assert M.dtype == np.int64
        assert round(abs(np.linalg.det(M))) == 1


def test_model_validation():
    G = cyclic_group(2)
    with pytest.raises(ValidationError):
        make_model("dP7", G)
    with pytest.raises(ValidationError):
        make_model("dP8", G, Z2=trivial_gset(G, 3))
    with pytest.raises(ValidationError):
        make_model("dP6", G, Z2=trivial_gset(G, 2))
    with pytest.raises(ValidationError):
        make_model("dP8", G, Z2=trivial_gset(cyclic_group(3), 2))
    with pytest.raises(ValidationError):
        make_model("dP8", G, Z2=trivial_gset(G, 2), severi_brauer=True)


def test_conic_bundle_detection():
    G = cyclic_group(2)
    assert has_conic_bundle(split_model("C8", G))
    assert has_conic_bundle(split_model("dP8", G))
    assert not has_conic_bundle(make_model("dP8", G, Z2=natural_gset(G)))
    assert not has_conic_bundle(split_model("dP9", G))
    assert not has_conic_bundle(five_cycle_model())


def test_models_isomorphic_up_to_relabelling():
    G = cyclic_group(2)
    A = GSet(G, 2, ((1, 0),), "Z2")
    S, T = make_model("dP8", G, Z2=A), make_model("dP8", G, Z2=natural_gset(G, "Z2"))
    assert models_isomorphic(S, T)
    assert not models_isomorphic(S, split_model("dP8", G))


groups = st.sampled_from([cyclic_group(2), cyclic_group(5), klein_four(), symmetric_group(3),
                          metacyclic20()])
tags = st.sampled_from(["dP9", "dP8", "C8", "dP6", "dP5"])


@given(groups, tags, st.integers(0, 10**6))
def test_ns_character_equals_mu_of_virtual_set(G, tag, seed):
    rng = random.Random(seed)
    S = random_model(tag, G, rng) if tag != "C8" else split_model("C8", G)
    if rng.random() < 0.5:
        S = S.push(random_gset(G, rng.randint(1, 4), rng))
    expect = mu(virtual_ns_set(S.without_stack()))
    for Z in S.stack:
        expect = expect + fixed_point_character(Z)
    assert np.array_equal(ns_character(S), expect)
    assert picard_rank(S) == base_lattice_action(S.without_stack()).invariant_rank() + sum(
        len(orbits(Z)) for Z in S.stack)


@given(groups, st.sampled_from(["dP9", "dP8", "dP6", "dP5"]), st.integers(0, 10**6))
def test_mj_duality(G, tag, seed):
    S = random_model(tag, G, random.Random(seed))
    js = range(2, 8, 2) if tag == "dP8" else range(1, S.degree)
    for j in js:
        assert mj_duality_check(S, j)


@given(st.permutations(range(6)))
def test_point_permutation_action(sigma):
    G = cyclic_group(1)
    act = LatticeAction(BlowupP2(6), G, [])
    assert act.character().tolist() == [7]
    P = permutation_matrix(6, sigma)
    assert is_isometry(BlowupP2(6), P)
    assert int(np.trace(P)) == 1 + sum(1 for i, s in enumerate(sigma) if i == s)


def test_quadric_swap_character():
    G = cyclic_group(2)
    S = make_model("dP8", G, Z2=natural_gset(G, "Z2"))
    assert ns_character(S).tolist() == [2, 0]
    assert base_lattice_action(S).lattice == Quadric()
