"""Property testing: is the black box close to some s-sparse polynomial?

The tester runs the automatic learner at accuracy epsilon/4 under a hard
query budget, then estimates the distance between the box and whatever
hypothesis came back. Sparse targets pass both gates; far targets trip a
promise check, blow the budget, or fail the estimate.

Run with: python3 demos/04_testing.py  (takes ~20 s)
"""

import numpy as np

from sparsepoly import (oracle_from_poly, oracle_from_table,
                        random_sparse_poly, test_sparsity, tester_budget)

rng = np.random.default_rng(5)

print("learner budget at (n=12, s=4, eps=0.05):",
      tester_budget(12, 4, 0.05))

# Honest case: a genuinely 4-sparse target.
target = random_sparse_poly(12, 3, 4, rng)
verdict = test_sparsity(oracle_from_poly(target), 4, 0.05, rng)
print("sparse target ->", verdict.decision,
      "| queries:", verdict.queries_used)
print("  evidence:", {k: v for k, v in verdict.evidence.items()
                      if k != "budget"})

# Adversarial case: a uniformly random truth table over 12 variables is
# far from every 4-sparse polynomial with overwhelming probability.
table = rng.integers(0, 2, size=4096, dtype=np.uint8)
verdict = test_sparsity(oracle_from_table(table, 12), 4, 0.05, rng)
print("random table ->", verdict.decision,
      "| queries:", verdict.queries_used)
print("  evidence:", verdict.evidence)

# Decisions are one-sided per run (2/3 confidence each way); repeat runs
# to push the error down.
votes = [test_sparsity(oracle_from_poly(target), 4, 0.05, rng).accepted
         for _ in range(5)]
print("5 repeated votes on the sparse target:", votes)
