"""Finite groups, series, classification and the decomposition tower."""

from .groups import (FIXTURES, Group, GroupError, SemidirectSpec, alternating, cyclic, dihedral,
                     direct_product, fixture, from_elements, is_prime, permutation_group, quaternion,
                     semidirect, semidirect_pq, symmetric, zpn)
from .structure import (Classification, ConjugacyClass, Quotient, SeriesChain, centralizer, classify,
                        commutator_subgroup, conjugacy_class_of, conjugacy_classes, generate, is_normal,
                        is_subgroup, normal_closure, normal_subgroups, quotient, series)
from .words import Arg, ArgInv, Comm, ConjWord, Const, Inv, Pow, UnboundSlot, eval_word, word_to_str
from .decompose import (AlgebraMap, Decomposition, DecompositionError, LambdaData, balanced_maps,
                        base_case_exponent, compute_lambda, decompose)
