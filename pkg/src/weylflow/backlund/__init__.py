"""Backlund transformations of the D4(1) systems and exact checks of their properties."""

from .maps import (GENERATORS, VARIANTS, RationalMap, apply_map_point, apply_word_point,
                   build_pi, build_s, compose, compose_params, compose_word, generator,
                   parse_word)
from .verify import (DEFAULT_SEED, FAIL, PASS, SKIPPED, VerificationReport,
                     coefficient_perturbations, conjugation_permutation, detects,
                     divisor_remainders, fig1_relations, first_integral_residuals,
                     invariance_residuals, invariance_suite, lie_derivative,
                     reduction_residuals, relations_suite, sample_point,
                     verify_diagram_automorphism, verify_first_integrals,
                     verify_hamiltonian_form, verify_invariance, verify_invariant_divisors,
                     verify_reduction, verify_relation)
