"""Property testing for s-sparse multilinear polynomials over GF(2).

Tolerant-style reduction: run the automatic learner at accuracy epsilon/4
under a hard query budget tied to its worst-case ceiling. A target that is
genuinely s-sparse fits the budget and yields a close hypothesis; a target
epsilon-far from every s-sparse polynomial either trips the promise checks,
exhausts the budget, or produces a hypothesis that a direct distance
estimate rejects.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import learner
from .learner import LearnParams, PromiseViolationError
from .oracle import BudgetExceededError, QueryOracle, uniform_compare


@dataclass
class TestVerdict:
    decision: str  # accept | reject
    queries_used: int
    evidence: dict = field(default_factory=dict)

    @property
    def accepted(self) -> bool:
        return self.decision == "accept"


def tester_budget(n: int, s: int, epsilon: float,
                  budget_factor: float = 10.0) -> int:
    """Hard cap handed to the learning phase."""
    ceiling = learner.auto_ceiling(n, s, epsilon / 4.0, 1 / 10)
    return math.ceil(budget_factor * ceiling)


def estimation_draws(epsilon: float) -> int:
    return math.ceil((48.0 / epsilon) * math.log(20.0))


def test_sparsity(f: QueryOracle, s: int, epsilon: float,
                  rng: np.random.Generator,
                  budget_factor: float = 10.0,
                  collector=None) -> TestVerdict:
    """Accept s-sparse targets with probability >= 2/3; reject targets
    epsilon-far from every s-sparse multilinear polynomial with
    probability >= 2/3. Uses O(s/epsilon + poly log) queries when the
    target is far, since the budget cuts the learner off."""
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    start = f.queries_used
    budget = tester_budget(f.n, s, epsilon, budget_factor)
    f.set_budget(budget)
    params = LearnParams(s=s, epsilon=epsilon / 4.0, delta=1 / 10, n=f.n)
    try:
        report = learner.learn_auto(f, params, rng, collector)
        failure = None
    except PromiseViolationError as exc:
        report = None
        failure = f"promise violation: {exc}"
    except BudgetExceededError as exc:
        # raised outside the learner's own recovery (defensive)
        report = None
        failure = f"budget exhausted: {exc}"
    finally:
        f.set_budget(None)
    if report is not None and report.outcome == "gave-up-budget":
        failure = "budget exhausted"
    if failure is not None:
        return TestVerdict("reject", f.queries_used - start,
                           {"reason": failure, "budget": budget})
    draws = estimation_draws(epsilon)
    mism = uniform_compare(f, report.hypothesis, draws, rng)
    learner._log(collector, "estimate", draws, draws, 1, False)
    est = mism / draws
    decision = "accept" if est <= epsilon / 2.0 else "reject"
    return TestVerdict(decision, f.queries_used - start,
                       {"estimated_distance": est,
                        "estimation_draws": draws,
                        "budget": budget,
                        "learner_outcome": report.outcome,
                        "hypothesis_sparsity": report.hypothesis.sparsity})
