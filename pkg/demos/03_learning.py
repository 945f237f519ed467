"""Running the learners and reading their instrumentation.

Four entry points, in increasing ambition:

  equivalence_test        is f equal to g? certified witness if not
  find_monomial           extract one monomial of a nonzero target
  learn_exact_low_degree  exact recovery under a degree + sparsity promise
  learn_sparse_main /     approximate recovery to accuracy epsilon with
  learn_small_beta        only a sparsity promise

Run with: python3 demos/03_learning.py  (takes ~5 s)
"""

import numpy as np

from sparsepoly import (LearnParams, SparsePoly, auto_branch, distance,
                        equivalence_ceiling, equivalence_test, find_monomial,
                        learn_auto, learn_exact_low_degree,
                        learn_reduced_vars, learn_sparse_main,
                        oracle_from_poly, random_sparse_poly)

rng = np.random.default_rng(42)

# --- equivalence -----------------------------------------------------------

f = random_sparse_poly(14, 3, 4, rng)
g = f + SparsePoly(14, [{2, 9}])
o = oracle_from_poly(f)
w = equivalence_test(o, g, 8, 3, 0.1, rng)
print("equivalence witness:", sorted(w.support),
      "| f:", f.evaluate(w), "g:", g.evaluate(w),
      "| queries:", o.queries_used, "of at most",
      equivalence_ceiling(8, 3, 0.1))

# --- monomial extraction ---------------------------------------------------

target = SparsePoly(16, [frozenset({1, 7, 9})])
o = oracle_from_poly(target)
a = find_monomial(o, 3, 1, 0.1, rng)
print("found monomial:", sorted(a.support), "with", o.queries_used,
      "queries")

# --- exact learning under the full promise ---------------------------------

f = random_sparse_poly(64, 4, 8, rng)
o = oracle_from_poly(f)
h = learn_exact_low_degree(o, 64, 4, 8, 0.1, rng)
print("exact learn over n=64:", h == f, "| queries:", o.queries_used)

# The hashing front end pushes the arity up while the query cost stays
# polylogarithmic in n. `known` caches identified variables across calls.
f = random_sparse_poly(50_000, 3, 4, rng)
o = oracle_from_poly(f)
known: set = set()
h = learn_reduced_vars(o, 50_000, 3, 4, 0.1, known, rng)
print("exact learn over n=50000:", h == f, "| queries:", o.queries_used,
      "| variables identified:", sorted(known))

# --- approximate learning with only a sparsity promise ----------------------

params = LearnParams(s=8, epsilon=1 / 64, delta=0.1, n=256)
print("chosen branch at (s=8, eps=1/64):",
      auto_branch(params.s, params.epsilon))

f = random_sparse_poly(256, 4, 8, rng)
o = oracle_from_poly(f)
collector: list = []
report = learn_auto(o, params, rng=rng, collector=collector)
print("outcome:", report.outcome, "| algorithm:", report.algorithm)
print("distance:", float(distance(f, report.hypothesis)))
print("queries:", report.queries_used, "of predicted ceiling",
      report.predicted_bound)

# The collector explains where every query went. Each record satisfies
# used <= ceiling, and the weighted total matches the oracle counter.
ops = {}
for r in collector:
    ops.setdefault(r["op"], [0, 0])
    ops[r["op"]][0] += 1
    ops[r["op"]][1] += r["used"] * r["factor"]
print("per-subroutine charges:")
for op, (count, charged) in sorted(ops.items()):
    print(f"  {op:18s} x{count:<5d} {charged} queries")
total = sum(r["used"] * r["factor"] for r in collector)
print("records account for", total, "queries; counter says",
      report.queries_used)

# A hard budget turns a long run into an honest partial answer.
o = oracle_from_poly(f, budget=2000)
report = learn_sparse_main(o, params, rng=rng)
print("with budget 2000:", report.outcome, "after", report.queries_used,
      "queries")
