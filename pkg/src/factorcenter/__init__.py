"""Gassmann equivalence, del Pezzo Picard lattices and factorization centers of Sarkisov links."""

from .errors import FactorCenterError, ResourceError, ValidationError
from .gset import (BurnsideElement, GSet, gassmann_search, is_gassmann, is_isomorphic, mu,
                   fixed_point_character)
from .links import (BlowDown, BlowUp, Isom, Link, LinkTag, Move, MoveWord, apply_link, c_of_word,
                    evaluate_word, loop_invariance_check, rationality_center, verify_delta_row,
                    verify_link_mu)
from .nslattice import BlowupP2, DivisorClass, Quadric, neg_one_classes, rational_degree_classes
from .permgrp import Group, Permutation, group_from_generators, symmetric_group
from .surface import SurfaceModel, make_model, ns_character, virtual_ns_set

__version__ = "0.1.0"
