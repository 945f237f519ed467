"""Query-complexity exponents and predicted query counts.

The central quantity is beta = log2(1/epsilon) / log2(s), the accuracy/
sparsity tradeoff. Two exponents govern the (s/epsilon)^x query bounds:

  gamma(beta)       = min over eta in (0, 1] of
                      (eta+1)/(beta+1) + (1 + 1/eta) * H2(1 / ((1+1/eta)(beta+1)))
  gamma_prime(beta) = max(1, 1/(beta+1) + H2(min(1/(beta+1), 1/2)))

where H2 is the binary entropy. gamma_prime wins (is smaller) for small
beta, gamma for large beta; thresholds of interest are where gamma_prime
reaches 1 and where gamma drops below 1.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, asdict

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
ETA_FLOOR = 1e-6

# Direct evaluation of the gamma_prime formula at beta = 2 and beta = 3
# gives 1.2516 and 1.0613; the transposed variants 1.1252 and 1.1061 float
# around and fail the formula. It is authoritative here; reports carry
# this note rather than patching either value.
GAMMA_PRIME_TABLE_NOTE = (
    "gamma_prime(2) = 1.25163 and gamma_prime(3) = 1.06128 by direct "
    "evaluation of the defining formula; the quoted values 1.1252 and "
    "1.1061 sometimes given for these points are digit transpositions and "
    "do not satisfy the formula, so they are not reproduced."
)


def binary_entropy(x: float) -> float:
    """H2(x) in bits; H2(0) = H2(1) = 0."""
    if x < 0.0 or x > 1.0:
        raise ValueError(f"binary entropy needs x in [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def _gamma_objective(eta: float, beta: float) -> float:
    c = 1.0 + 1.0 / eta
    return (eta + 1.0) / (beta + 1.0) + c * binary_entropy(
        1.0 / (c * (beta + 1.0)))


def gamma(beta: float, tol: float = 1e-6) -> tuple[float, float]:
    """Minimize the gamma objective over eta; returns (value, optimal eta).

    Intended for beta >= 1; smaller positive beta is accepted with a
    warning since the minimization itself stays well defined."""
    if beta <= 0.0:
        raise ValueError("beta must be positive")
    if beta < 1.0:
        warnings.warn(f"gamma evaluated outside its intended range "
                      f"(beta = {beta} < 1)", stacklevel=2)
    if math.isinf(beta):
        return 0.0, 1.0
    # dense scan to localize the minimum, then golden-section refinement
    grid_n = 2001
    lo, hi = ETA_FLOOR, 1.0
    best_i, best_v = 0, math.inf
    for i in range(grid_n):
        eta = lo + (hi - lo) * i / (grid_n - 1)
        if eta < ETA_FLOOR:
            eta = ETA_FLOOR
        v = _gamma_objective(eta, beta)
        if v < best_v:
            best_i, best_v = i, v
    step = (hi - lo) / (grid_n - 1)
    a = max(lo, lo + (best_i - 1) * step)
    b = min(hi, lo + (best_i + 1) * step)
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc = _gamma_objective(c, beta)
    fd = _gamma_objective(d, beta)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = _gamma_objective(c, beta)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = _gamma_objective(d, beta)
    eta_star = (a + b) / 2.0
    return _gamma_objective(eta_star, beta), eta_star


def gamma_prime(beta: float) -> float:
    if beta <= 0.0:
        raise ValueError("beta must be positive")
    if math.isinf(beta):
        return 1.0
    x = 1.0 / (beta + 1.0)
    return max(1.0, x + binary_entropy(min(x, 0.5)))


def beta_of(s: int, epsilon: float) -> float:
    """beta = log2(1/epsilon) / log2(s); infinite for s = 1 (degenerate)."""
    if s < 1:
        raise ValueError("sparsity must be >= 1")
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    if s == 1:
        return math.inf
    return math.log2(1.0 / epsilon) / math.log2(s)


ALGORITHMS = ("main", "small_beta", "lower", "tester")


def predicted_queries(s: int, epsilon: float, n: int,
                      algorithm: str = "main") -> float:
    """Leading-order query count shape, constants and polylog factors set
    to 1. For s = 1 beta degenerates and the power term is dropped."""
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    if n < 1:
        raise ValueError("arity must be >= 1")
    if algorithm == "tester":
        return s / epsilon
    additive = s * math.log2(1.0 / epsilon) * math.log2(max(n, 2))
    if algorithm == "lower":
        return additive
    if s == 1:
        return additive
    beta = beta_of(s, epsilon)
    if algorithm == "main":
        expo, _ = gamma(beta) if beta >= 1.0 else _gamma_quiet(beta)
    else:
        expo = gamma_prime(beta)
    return (s / epsilon) ** expo + additive


def _gamma_quiet(beta: float) -> tuple[float, float]:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return gamma(beta)


THRESHOLDS = ("gamma_prime_eq_1", "gamma_lt_1", "crossover")


def beta_threshold(which: str, tol: float = 1e-6) -> float:
    """Root-find the beta where the named transition happens (bisection).

    gamma_prime_eq_1: largest beta with gamma_prime(beta) > 1
    gamma_lt_1:       beta where gamma(beta) crosses 1
    crossover:        beta where gamma and gamma_prime cross
    """
    if which not in THRESHOLDS:
        raise ValueError(f"unknown threshold {which!r}")
    if which == "gamma_prime_eq_1":
        # x + H2(x) = 1 with x = 1/(beta+1), x < 1/2
        def fn(b):
            x = 1.0 / (b + 1.0)
            return x + binary_entropy(min(x, 0.5)) - 1.0
        lo, hi = 1.0, 20.0
    elif which == "gamma_lt_1":
        def fn(b):
            return _gamma_quiet(b)[0] - 1.0
        lo, hi = 1.0, 20.0
    else:
        def fn(b):
            return _gamma_quiet(b)[0] - gamma_prime(b)
        lo, hi = 1.0, 20.0
    flo, fhi = fn(lo), fn(hi)
    if flo * fhi > 0:
        raise RuntimeError("bisection bracket does not straddle a root")
    while hi - lo > tol:
        mid = (lo + hi) / 2.0
        if fn(mid) * flo <= 0:
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2.0


@dataclass
class BoundsProfile:
    """All exponents and predicted counts for one (s, epsilon, n) setting."""

    s: int
    epsilon: float
    n: int
    beta: float
    gamma: float
    gamma_prime: float
    optimal_eta: float
    q_upper_main: float
    q_upper_small_beta: float
    q_lower: float
    q_tester: float
    degenerate_beta: bool
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        if math.isinf(d["beta"]):
            d["beta"] = "inf"
        return d


def profile(s: int, epsilon: float, n: int) -> BoundsProfile:
    beta = beta_of(s, epsilon)
    if math.isinf(beta):
        g, eta = 0.0, 1.0
        gp = 1.0
    else:
        g, eta = _gamma_quiet(beta)
        gp = gamma_prime(beta)
    notes = [GAMMA_PRIME_TABLE_NOTE]
    if s == 1:
        notes.append("s = 1 makes beta degenerate; power-law terms are "
                     "dropped and only additive terms reported")
    return BoundsProfile(
        s=s, epsilon=epsilon, n=n, beta=beta, gamma=g, gamma_prime=gp,
        optimal_eta=eta,
        q_upper_main=predicted_queries(s, epsilon, n, "main"),
        q_upper_small_beta=predicted_queries(s, epsilon, n, "small_beta"),
        q_lower=predicted_queries(s, epsilon, n, "lower"),
        q_tester=predicted_queries(s, epsilon, n, "tester"),
        degenerate_beta=(s == 1),
        notes=notes,
    )
