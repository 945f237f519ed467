"""Learning and property testing of sparse GF(2) multilinear polynomials
from black-box membership queries, with exact query accounting."""

from .poly import (Assignment, SparsePoly, distance, load_poly, monomial,
                   poly_from_dict, poly_from_json, poly_from_table,
                   poly_to_dict, poly_to_json, prob_one_exact,
                   prob_one_product, random_sparse_poly, save_poly,
                   truth_table, witness_pair)
from .oracle import (BudgetExceededError, QueryCounter, QueryOracle,
                     and_restrict, attach_trace, hash_project,
                     oracle_from_function, oracle_from_poly,
                     oracle_from_table, pin_bucket, sample_product,
                     scan_product, uniform_compare, xor_local, xor_oracles,
                     zero_project)
from .learner import (LearnParams, LearnReport, Literal,
                      PromiseViolationError, auto_branch, equivalence_ceiling,
                      equivalence_test, find_monomial, identify_literal,
                      learn_auto, learn_by_sampling, learn_exact_low_degree,
                      learn_reduced_vars, learn_small_beta,
                      learn_sparse_main)
from .tester import TestVerdict, test_sparsity, tester_budget
from .bounds import (BoundsProfile, beta_of, beta_threshold, binary_entropy,
                     gamma, gamma_prime, predicted_queries, profile)

__version__ = "0.1.0"

__all__ = [
    "Assignment", "SparsePoly", "monomial", "truth_table", "poly_from_table",
    "prob_one_exact", "prob_one_product", "distance", "witness_pair",
    "random_sparse_poly", "poly_to_dict", "poly_from_dict", "poly_to_json",
    "poly_from_json", "save_poly", "load_poly",
    "QueryOracle", "QueryCounter", "BudgetExceededError", "oracle_from_poly",
    "oracle_from_table", "oracle_from_function", "and_restrict",
    "zero_project", "xor_local", "xor_oracles", "hash_project", "pin_bucket",
    "attach_trace", "sample_product", "scan_product", "uniform_compare",
    "PromiseViolationError", "LearnParams", "LearnReport", "Literal",
    "auto_branch", "equivalence_ceiling",
    "equivalence_test", "find_monomial", "learn_exact_low_degree",
    "identify_literal", "learn_reduced_vars", "learn_sparse_main",
    "learn_by_sampling", "learn_small_beta", "learn_auto",
    "TestVerdict", "test_sparsity", "tester_budget",
    "binary_entropy", "gamma", "gamma_prime", "beta_of", "beta_threshold",
    "predicted_queries", "BoundsProfile", "profile",
    "__version__",
]
