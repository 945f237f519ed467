"""Tour of the polynomial layer: construction, evaluation, probabilities.

Run with: python3 demos/01_polynomials.py
"""

from fractions import Fraction

import numpy as np

from sparsepoly import (Assignment, SparsePoly, distance, prob_one_exact,
                        prob_one_product, random_sparse_poly, witness_pair)

# A polynomial is a XOR of monomials; a monomial is a set of variable
# indices. The empty set is the constant 1.
f = SparsePoly(6, [{0, 2}, {1}, set()])
print("f =", f)
print("sparsity:", f.sparsity, " degree:", f.degree)
print("relevant variables:", sorted(f.relevant_variables()))

# Evaluation takes an Assignment or a plain bit mask (bit j = variable j).
a = Assignment.ones_at(6, [0, 2])
print("f(x0=x2=1, rest 0) =", f.evaluate(a))
print("f(0b000110)        =", f.evaluate(0b000110))

# Duplicate monomials cancel in pairs, GF(2) style.
g = SparsePoly(6, [{0, 2}, {3}])
print("f + g =", f + g, "   (the shared monomial x0 x2 vanished)")

# Exact satisfaction probability under independent biased bits. Feeding
# a Fraction keeps the whole computation in exact arithmetic.
p = prob_one_exact(f, Fraction(1, 2))
print("Pr[f = 1] at bias 1/2 =", p, "=", float(p))
print("Pr[f = 1] at bias 3/4 =", prob_one_exact(f, Fraction(3, 4)))

# For huge arity the exhaustive route is closed, but when the monomials
# split into small independent clusters the product rule still gives an
# exact answer.
big = SparsePoly(10**9, [{0, 1}, {10**8, 10**8 + 1}, {999_999_999}])
print("product-rule Pr[big = 1] =", prob_one_product(big, 0.5))

# distance() is the uniform disagreement probability, again exact.
print("dist(f, g) =", distance(f, g))

# witness_pair produces two assignments differing only at one variable
# that flip the value: direct evidence the variable matters.
lo, hi = witness_pair(f, 1)
print("witness pair for x1:", lo.support, "->", f.evaluate(lo),
      "vs", hi.support, "->", f.evaluate(hi))

# Random targets: exactly s distinct monomials of degree <= d, uniform.
rng = np.random.default_rng(7)
r = random_sparse_poly(20, 3, 5, rng)
print("random 5-sparse target:", r)

# Polynomials round-trip through plain JSON dictionaries.
from sparsepoly import poly_from_json, poly_to_json  # noqa: E402

blob = poly_to_json(r)
print("JSON:", blob[:60], "...")
assert poly_from_json(blob) == r
print("round-trip ok")
