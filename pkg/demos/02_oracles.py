"""Membership oracles: exact query accounting, budgets, and composition.

Every algorithm in this package sees its target only through a black box
that answers point evaluations. The box counts every answer, refuses to
exceed a budget, and supports the restriction operators the learners lean
on, all without the caller touching the underlying polynomial.

Run with: python3 demos/02_oracles.py
"""

import io

import numpy as np

from sparsepoly import (Assignment, BudgetExceededError, SparsePoly,
                        and_restrict, attach_trace, hash_project,
                        oracle_from_function, oracle_from_poly, scan_product,
                        xor_oracles, zero_project)

f = SparsePoly(8, [{0, 1}, {2, 5}, {7}])
oracle = oracle_from_poly(f)
print("f =", f)

oracle.query(Assignment.ones_at(8, [0, 1]))
oracle.query(0)
print("queries so far:", oracle.queries_used)

# Budgets are hard: the refusing call first consumes what remains, so the
# final count is exactly the refusal point.
capped = oracle_from_poly(f, budget=3)
try:
    for k in range(10):
        capped.query(k)
except BudgetExceededError as e:
    print("refused:", e)
print("count after refusal:", capped.queries_used)

# Views re-express the oracle without extra query cost. zero_project kills
# every variable outside the keep set; queries pass through to the root
# and are charged there.
keep = Assignment.ones_at(8, [0, 1, 7])
proj = zero_project(oracle, keep)
print("projection answers:", proj.query(Assignment.ones_at(8, [0, 1])),
      "root charged:", oracle.queries_used, "total queries")

# hash_project merges variables; and_restrict fixes the off-support to 0
# while keeping arity. Views nest arbitrarily.
phi = np.array([0, 0, 1, 1, 2, 2, 3, 3])
hashed = hash_project(oracle, phi, 4)
print("hashed arity:", hashed.n)

# xor_oracles compares two boxes; each query charges both roots.
g = oracle_from_poly(SparsePoly(8, [{0, 1}]))
diff = xor_oracles(oracle, g)
before = oracle.queries_used + g.queries_used
diff.query(0)
print("one xor query charged", oracle.queries_used + g.queries_used - before,
      "root queries")

# scan_product draws biased random points until one satisfies the view.
rng = np.random.default_rng(1)
used, row = scan_product(and_restrict(oracle, Assignment.ones_at(8, [0, 1])),
                         0.5, 200, rng)
print("scan found a satisfying point after", used, "draws:", row)

# Opaque targets work too: wrap any callable taking an integer bit mask.
# Polynomial roots handle arity into the billions by tracking only their
# relevant coordinates; an opaque function has no such structure, so its
# arity is capped at 10^6.
blackbox = oracle_from_function(lambda x: (x >> 3) & (x >> 6) & 1, 10**6)
print("arity 10^6 function oracle:",
      blackbox.query(Assignment.ones_at(10**6, [3, 6])))

# attach_trace logs each semantic query as "<point hex> <response>".
traced = oracle_from_poly(f)
log = io.StringIO()
attach_trace(traced, log)
traced.query(3)
traced.query(0b10000000)
print("trace:")
print(log.getvalue().strip())
