"""Theoretical cost profile: exponents, thresholds, predicted query counts.

Costs are written as (s/eps)^c up to lower-order factors, with
beta = log2(1/eps) / log2(s) measuring how accuracy compares to sparsity.
Two exponent curves matter: gamma(beta) for the projection-based learner
(optimized over its sampling rate eta) and gamma_prime(beta) for the
uniform-sampling learner. Whichever is smaller wins at a given beta.

Run with: python3 demos/05_bounds.py
"""

from sparsepoly import (beta_of, beta_threshold, gamma, gamma_prime,
                        predicted_queries, profile)

print("beta   gamma(beta)  eta*     gamma_prime(beta)")
for beta in (1, 2, 3, 4, 5, 6, 7, 10, 20):
    g, eta = gamma(beta)
    print(f"{beta:4d}   {g:.6f}   {eta:.4f}   {gamma_prime(beta):.6f}")

print()
print("gamma_prime hits 1 at beta =", round(beta_threshold(
    "gamma_prime_eq_1"), 4))
print("gamma drops below 1 at beta =", round(beta_threshold("gamma_lt_1"),
                                             4))
print("the curves cross at beta =", round(beta_threshold("crossover"), 4))

print()
s, eps, n = 8, 1 / 256, 4096
print(f"scenario: s={s}, eps=1/256, n={n}, beta={beta_of(s, eps):.3f}")
for alg in ("main", "small_beta", "tester", "lower"):
    print(f"  {alg:12s} ~ {predicted_queries(s, eps, n, alg):,.0f} queries")

print()
prof = profile(s, eps, n)
for note in prof.to_dict()["notes"]:
    print("note:", note)
