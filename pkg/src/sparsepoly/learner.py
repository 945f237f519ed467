"""Learning algorithms for sparse multilinear polynomials over GF(2).

The stack, bottom to top:

- equivalence_test: biased-sampling witness finder between an oracle and a
  local polynomial (or a second oracle).
- find_monomial: iterative restriction thinning that isolates one monomial
  of a nonzero function.
- learn_exact_low_degree: exact learner for degree- and sparsity-bounded
  targets, alternating equivalence tests and monomial extraction.
- identify_literal: non-adaptive 2 + ceil(log2 k) query decoder for a
  promised constant-or-literal function.
- learn_reduced_vars: variable hashing to (2ds)^2 buckets, exact learning
  there, and per-variable unhashing via pinning + literal identification.
- learn_sparse_main: random zero projections on top of learn_reduced_vars;
  the workhorse for large accuracy/sparsity ratios.
- learn_by_sampling: the uniform-sampling learner (positive example ->
  double monomial extraction), preferable for small ratios.
- learn_small_beta: keep-almost-everything projection + hashing wrapper
  around learn_by_sampling, with variable recovery.
- learn_auto: picks the branch with the smaller proven exponent.

Every subroutine appends (op, used, ceiling, factor, witness) records to an
optional collector list; `used * factor` summed over records equals the
root counter movement exactly, and `used` never exceeds `ceiling`.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import bounds
from .oracle import (BudgetExceededError, QueryOracle, RestrictionMask,
                     and_restrict, hash_project, materialize_point,
                     pin_bucket, scan_product, uniform_compare, xor_local,
                     xor_oracles, zero_project, MATERIALIZE_CAP)
from .poly import Assignment, SparsePoly, witness_pair

EQUAL = "equal"
REDUCED_RETRIES = 3


class PromiseViolationError(RuntimeError):
    """The oracle's behavior is inconsistent with the promised class."""


@dataclass
class LearnParams:
    s: int
    epsilon: float
    delta: float = 1 / 3
    n: int = 0
    budget: int | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.s < 1:
            raise ValueError("sparsity must be >= 1")
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must lie in (0, 1)")
        if not 0.0 < self.delta < 1.0:
            raise ValueError("delta must lie in (0, 1)")

    @property
    def beta(self) -> float:
        return bounds.beta_of(self.s, self.epsilon)


@dataclass
class LearnReport:
    hypothesis: SparsePoly
    queries_used: int
    predicted_bound: float
    elapsed: float
    outcome: str  # exact | approx | gave-up-budget | declared-zero
    algorithm: str = ""


@dataclass
class Literal:
    kind: str  # constant0 | constant1 | positive | negative
    var: int | None = None

    def __post_init__(self):
        if self.kind in ("positive", "negative") and self.var is None:
            raise ValueError("literal needs a variable index")
        if self.kind in ("constant0", "constant1") and self.var is not None:
            raise ValueError("constants carry no variable index")


def _log(collector, op, used, ceiling, factor=1, witness=False):
    if collector is not None:
        collector.append({"op": op, "used": int(used),
                          "ceiling": int(ceiling), "factor": int(factor),
                          "witness": bool(witness)})


def _charge_factor(view: QueryOracle) -> int:
    return sum(mult for _, mult in view._root_counters().values())


def _log_refusal(collector, mark, consumed):
    """On budget refusal the counter consumed its remainder, but the scan
    that tripped it never reported. Book the unrecorded residue so that
    sum(used * factor) over the records still equals the counter delta."""
    if collector is None:
        return
    logged = sum(r["used"] * r["factor"] for r in collector[mark:])
    residual = consumed - logged
    if residual:
        _log(collector, "budget_refusal", residual, residual, 1)


# ---------------------------------------------------------------------------
# Repetition formulas


def equivalence_bias(s: int, d: float) -> float:
    """Sampling bias p = max(1 - (floor(log2 s) + 1)/d, 1/2)."""
    if d <= 0:
        raise ValueError("degree bound must be positive")
    return max(1.0 - (math.floor(math.log2(s)) + 1) / d, 0.5)


def equivalence_ceiling(s: int, d: float, delta: float) -> int:
    """Repetitions guaranteeing a witness with probability >= 1 - delta."""
    if d == 0:
        return 1
    x = min((math.floor(math.log2(s)) + 1) / d, 0.5)
    return math.ceil(2.0 ** (bounds.binary_entropy(x) * d)
                     * math.log(1.0 / delta))


def find_rounds(d: int, arity: int, delta: float) -> int:
    return math.ceil(8.0 * d * math.log(arity / delta))


def find_ceiling(arity: int, d: int, s: int, delta: float) -> int:
    return find_rounds(d, arity, delta) * equivalence_ceiling(s, d, 0.5)


def exact_learn_ceiling(arity: int, d: int, s: int, delta: float) -> int:
    eq = equivalence_ceiling(2 * s, d, delta / (2 * s))
    if d == 0:
        return s + 1
    return (s + 1) * eq + s * find_ceiling(arity, d, 2 * s, delta / (2 * s))


def identify_ceiling(k: int) -> int:
    if k < 1:
        raise ValueError("need at least one candidate")
    return (math.ceil(math.log2(k)) if k > 1 else 0) + 2


def reduced_learn_ceiling(n: int, d: int, s: int, delta: float,
                          retries: int = REDUCED_RETRIES) -> int:
    m = (2 * d * s) ** 2
    per = exact_learn_ceiling(m, d, s, min(delta, 1 / 16)) \
        + s * max(d, 1) * identify_ceiling(n)
    return (retries + 1) * per


def _main_plan(n: int, s: int, epsilon: float, delta: float,
               eta: float | None):
    beta = bounds.beta_of(s, epsilon)
    # s = 1 degenerates beta; any p in (0,1) keeps the reduction valid, so
    # fall back to the beta the formulas would see at s = 2
    beta_eff = beta if math.isfinite(beta) else math.log2(1.0 / epsilon)
    if eta is None:
        eta = bounds._gamma_quiet(max(beta_eff, 1e-3))[1]
    p = 2.0 ** (-eta / (beta_eff + 1.0))
    log1p = math.log2(1.0 / p)
    logs = math.log2(s)
    loglogs = math.log2(math.log2(s)) if s > 2 else 0.0
    D = math.ceil(math.log2(s / epsilon) + (logs + loglogs + 6.0) / log1p)
    w = math.ceil((s / epsilon) ** log1p * math.log(16.0 * s))
    attempts = max(1, math.ceil(math.log2(1.0 / delta)))
    validate = 0 if attempts == 1 else \
        math.ceil((12.0 / epsilon) * math.log(6.0 * attempts / delta))
    return {"eta": eta, "p": p, "D": D, "w": w, "attempts": attempts,
            "validate_draws": validate, "round_delta": 1.0 / (16.0 * w),
            "size_cap": math.log2(s / epsilon)}


def main_learn_ceiling(n: int, s: int, epsilon: float, delta: float,
                       eta: float | None = None) -> int:
    plan = _main_plan(n, s, epsilon, delta, eta)
    per_round = reduced_learn_ceiling(n, plan["D"], s, plan["round_delta"])
    return plan["attempts"] * (plan["w"] * per_round
                               + plan["validate_draws"])


def _sampling_plan(s: int, epsilon: float):
    return {
        "inner_bound": math.ceil((8.0 / (7.0 * epsilon))
                                 * math.log(128.0 * s)),
        "halt_cap": math.ceil(64.0 * s * math.log(128.0 * s)),
        "find_degree": math.ceil(math.log2(s / epsilon)) + 3,
        "find_delta": 1.0 / (128.0 * s),
        "weight_threshold": math.log2(s / epsilon) + 3.0,
    }


def sampling_learn_ceiling(arity: int, s: int, epsilon: float) -> int:
    plan = _sampling_plan(s, epsilon)
    per_find = find_ceiling(arity, plan["find_degree"], 2 * s,
                            plan["find_delta"])
    return s * plan["inner_bound"] + 2 * plan["halt_cap"] * per_find


def _small_beta_plan(n: int, s: int, epsilon: float, delta: float):
    logterm = math.log2(2.0 * s / epsilon)
    keep = 1.0 - 1.0 / (64.0 * s * logterm)
    d = 64.0 * s * logterm * math.log(64.0 * s)
    m = math.ceil(16.0 * (d * s) ** 2)
    attempts = max(1, math.ceil(math.log2(1.0 / delta)))
    validate = 0 if attempts == 1 else \
        math.ceil((12.0 / epsilon) * math.log(6.0 * attempts / delta))
    return {"keep": keep, "m": m, "ident_degree": logterm + 3.0,
            "ident_delta_inv": 32.0 * m, "attempts": attempts,
            "validate_draws": validate,
            "relevant_cap": s * (math.ceil(logterm) + 3)}


def small_beta_ceiling(n: int, s: int, epsilon: float,
                       delta: float = 1 / 3) -> int:
    plan = _small_beta_plan(n, s, epsilon, delta)
    fig = sampling_learn_ceiling(plan["m"], s, epsilon / 2.0)
    per_var = equivalence_ceiling(2 * s, plan["ident_degree"],
                                  1.0 / plan["ident_delta_inv"]) * 2 \
        + identify_ceiling(n)
    return plan["attempts"] * (fig + plan["relevant_cap"] * per_var
                               + plan["validate_draws"])


def auto_branch(s: int, epsilon: float) -> str:
    beta = bounds.beta_of(s, epsilon)
    if math.isinf(beta):
        return "main"
    g, _ = bounds._gamma_quiet(max(beta, 1e-3))
    return "small_beta" if bounds.gamma_prime(beta) < g else "main"


def auto_ceiling(n: int, s: int, epsilon: float, delta: float) -> int:
    if auto_branch(s, epsilon) == "small_beta":
        return small_beta_ceiling(n, s, epsilon, delta)
    return main_learn_ceiling(n, s, epsilon, delta)


# ---------------------------------------------------------------------------
# Equivalence testing


def _equivalence_scan(view: QueryOracle, s: int, d: float, delta: float,
                      rng: np.random.Generator,
                      mask: RestrictionMask | None = None,
                      collector=None, op: str = "equivalence_scan"):
    """Core witness scan on a pre-composed difference view (nonzero test).

    Returns (witness_row | None, bias). Charges exactly like the loop."""
    reps = equivalence_ceiling(s, d, delta)
    p = equivalence_bias(s, d)
    used, row = scan_product(view, p, reps, rng, mask)
    _log(collector, op, used, reps, _charge_factor(view), row is not None)
    return row, p


def equivalence_test(f: QueryOracle, g, s: int, d: int, delta: float,
                     rng: np.random.Generator, collector=None):
    """Return a certified assignment where f and g differ, or "equal".

    g may be a local polynomial (costs nothing) or a second oracle (each
    draw then charges both roots). Promise: both sides in P_{m,d,s}. The
    witness is found with probability >= 1 - delta whenever f != g; "equal"
    is always returned when f = g."""
    if isinstance(g, QueryOracle):
        view = xor_oracles(f, g)
    else:
        view = xor_local(f, g)
    if d == 0:
        zero = Assignment.zeros(view.n)
        v = view.query(zero)
        _log(collector, "equivalence_scan", 1, 1, _charge_factor(view), v == 1)
        return zero if v else EQUAL
    row, p = _equivalence_scan(view, s, d, delta, rng, None, collector)
    if row is None:
        return EQUAL
    return materialize_point(view, row, p, None, rng)


# ---------------------------------------------------------------------------
# Monomial extraction


class FindResult:
    """Outcome of a monomial search: one-positions split into observed
    (active) coordinates and lazily-counted off-active leftovers."""

    __slots__ = ("n", "active_ones", "extra_ones", "extra_count")

    def __init__(self, n, active_ones, extra_ones, extra_count):
        self.n = n
        self.active_ones = active_ones  # np.int64, sorted
        self.extra_ones = extra_ones    # np.int64 or None if too dense
        self.extra_count = extra_count

    def weight(self) -> int:
        return len(self.active_ones) + self.extra_count

    def materialized(self) -> bool:
        return self.extra_ones is not None

    def support(self) -> frozenset:
        if not self.materialized():
            raise PromiseViolationError(
                f"found assignment of weight {self.weight()} cannot be "
                f"materialized")
        return frozenset(map(int, self.active_ones)) \
            | frozenset(map(int, self.extra_ones))

    def assignment(self) -> Assignment:
        return Assignment(self.n, ones=self.support())


def _find_monomial(view: QueryOracle, d: int, s: int, delta: float,
                   rng: np.random.Generator,
                   mask: RestrictionMask | None = None,
                   collector=None) -> FindResult:
    """Figure-2 style monomial search on `view` (optionally pre-restricted
    by `mask`): start from the all-ones assignment, repeatedly draw b from
    the 2^(-1/d)-biased product distribution, and keep b's zeros whenever
    the doubly-restricted function is certified nonzero."""
    if d < 1:
        raise ValueError("degree bound must be >= 1")
    active = view.active()
    arity = view.n
    t = find_rounds(d, arity, delta)
    p = 2.0 ** (-1.0 / d)
    if view._is_literal():
        return _find_monomial_literal(view, d, s, delta, rng, mask,
                                      collector)
    base_row = mask.row if mask is not None else \
        np.ones(len(active), dtype=np.uint8)
    off_positions = mask.off_positions if mask is not None else \
        np.zeros(0, dtype=np.int64)
    off_density = mask.off_density if mask is not None else 1.0
    a_row = np.ones(len(active), dtype=np.uint8)
    accepted = 0
    for _ in range(t):
        b_row = (rng.random(len(active)) < p).astype(np.uint8)
        probe = RestrictionMask(base_row & a_row & b_row,
                                np.zeros(0, dtype=np.int64), 0.0)
        row, _ = _equivalence_scan(view, s, d, 0.5, rng, probe, collector,
                                   op="find_round")
        if row is not None:
            a_row &= b_row
            accepted += 1
    # coordinates never observed: each survives all accepted thinnings
    # independently with probability p^accepted (and the mask's own density)
    p_keep = p ** accepted
    extra = []
    if len(off_positions):
        keep = rng.random(len(off_positions)) < p_keep
        extra.extend(int(j) for j in off_positions[keep])
    blocked = np.union1d(active, off_positions)
    free = arity - len(blocked)
    q = off_density * p_keep
    extra_ones: np.ndarray | None
    if free > 0 and q > 0.0:
        count = int(rng.binomial(free, q)) if q < 1.0 else free
        if count > MATERIALIZE_CAP:
            extra_ones = None
            extra_count = count + len(extra)
        else:
            extra.extend(_sample_outside_sorted(arity, blocked, count, rng))
            extra_ones = np.array(sorted(extra), dtype=np.int64)
            extra_count = len(extra)
    else:
        extra_ones = np.array(sorted(extra), dtype=np.int64)
        extra_count = len(extra)
    chosen = active[a_row.astype(bool) & base_row.astype(bool)]
    return FindResult(arity, chosen, extra_ones, extra_count)


def _sample_outside_sorted(n, blocked, count, rng):
    from .oracle import _sample_outside
    return _sample_outside(n, blocked, count, rng)


def _find_monomial_literal(view, d, s, delta, rng, mask, collector):
    """Reference path: dense a and b, no lazy bookkeeping."""
    arity = view.n
    t = find_rounds(d, arity, delta)
    p = 2.0 ** (-1.0 / d)
    active = view.active()
    realized = mask.realize_dense(view, rng) if mask is not None \
        else Assignment.all_ones(arity)
    a = Assignment.all_ones(arity)
    for _ in range(t):
        b = _sample_dense(arity, p, rng)
        probe_point = realized.product(a).product(b)
        probe = RestrictionMask(
            np.array([probe_point.bit(int(j)) for j in active],
                     dtype=np.uint8),
            _ones_outside(probe_point, active), 0.0)
        row, _ = _equivalence_scan(view, s, d, 0.5, rng, probe, collector,
                                   op="find_round")
        if row is not None:
            a = a.product(b)
    final = a.product(realized) if mask is not None else a
    ones = np.array(sorted(final.support), dtype=np.int64)
    on_active = np.isin(ones, active)
    return FindResult(arity, ones[on_active], ones[~on_active],
                      int((~on_active).sum()))


def _sample_dense(n, p, rng):
    from .oracle import sample_product
    return sample_product(n, p, rng)


def _ones_outside(a: Assignment, active: np.ndarray) -> np.ndarray:
    ones = np.array(sorted(a.support), dtype=np.int64)
    return ones[~np.isin(ones, active)]


def find_monomial(f: QueryOracle, d: int, s: int, delta: float,
                  rng: np.random.Generator, collector=None) -> Assignment:
    """Public monomial search: requires f != 0 (certify with a prior
    equivalence_test against 0). Returns the final assignment; its support
    is a monomial of f with probability >= 1 - delta."""
    return _find_monomial(f, d, s, delta, rng, None, collector).assignment()


# ---------------------------------------------------------------------------
# Exact learner for bounded degree and sparsity


def learn_exact_low_degree(f: QueryOracle, m: int, d: int, s: int,
                           delta: float, rng: np.random.Generator,
                           collector=None) -> SparsePoly:
    """Exactly learn a target promised in P_{m,d,s}: alternate nonzero
    tests of f + h with monomial extraction until f + h tests equal."""
    if m != f.n:
        raise ValueError("arity mismatch")
    monos: set = set()
    for round_no in range(s + 1):
        h = SparsePoly(m, monos)
        view = xor_local(f, h)
        if d == 0:
            zero = Assignment.zeros(m)
            v = view.query(zero)
            _log(collector, "equivalence_scan", 1, 1, _charge_factor(view),
                 v == 1)
            row = "hit" if v else None
        else:
            row, _ = _equivalence_scan(view, 2 * s, d, delta / (2 * s), rng,
                                       None, collector)
        if row is None:
            return h
        if round_no == s:
            raise PromiseViolationError(
                f"target shows more than {s} monomials")
        if d == 0:
            mono = frozenset()
        else:
            fr = _find_monomial(view, d, 2 * s, delta / (2 * s), rng, None,
                                collector)
            mono = fr.support()
        monos ^= {mono}
    raise AssertionError("unreachable")


# ---------------------------------------------------------------------------
# Literal identification


def identify_literal(g: QueryOracle, candidates, collector=None) -> Literal:
    """Non-adaptive decoding of a promised constant-or-literal function.

    Queries the all-zeros and all-ones patterns on the candidate
    coordinates plus one pattern per rank bit; 2 + ceil(log2 k) queries."""
    cand = sorted(int(c) for c in candidates)
    k = len(cand)
    if k < 1:
        raise PromiseViolationError("no candidates to identify over")
    nbits = math.ceil(math.log2(k)) if k > 1 else 0
    n = g.n
    patterns = [Assignment.zeros(n),
                Assignment.ones_at(n, cand)]
    for bit in range(nbits):
        patterns.append(Assignment.ones_at(
            n, [c for j, c in enumerate(cand) if (j >> bit) & 1]))
    responses = [g.query(a) for a in patterns]
    _log(collector, "identify", len(patterns), identify_ceiling(k),
         _charge_factor(g))
    r0, r1 = responses[0], responses[1]
    if r0 == r1:
        if any(r != r0 for r in responses):
            raise PromiseViolationError("responses fit no constant")
        return Literal("constant1" if r0 else "constant0")
    positive = r1 == 1
    rank = 0
    for bit in range(nbits):
        b = responses[2 + bit]
        if not positive:
            b ^= 1
        rank |= b << bit
    if rank >= k:
        raise PromiseViolationError(
            f"decoded rank {rank} outside {k} candidates")
    return Literal("positive" if positive else "negative", cand[rank])


# ---------------------------------------------------------------------------
# Variable-reduction learner


def learn_reduced_vars(f: QueryOracle, n: int, d: int, s: int, delta: float,
                       known: set | None, rng: np.random.Generator,
                       collector=None,
                       retries: int = REDUCED_RETRIES) -> SparsePoly:
    """Hash the n variables into m = (2ds)^2 buckets, learn the hashed
    target exactly, then map every relevant hashed variable back to an
    original variable by pinning its bucket and identifying the literal.

    `known` (a set of original variable indices already identified as
    relevant, updated in place) lets pipeline callers skip the pin-and-
    identify step when a bucket holds exactly one known variable."""
    if n != f.n:
        raise ValueError("arity mismatch")
    if known is None:
        known = set()
    m = (2 * max(d, 1) * s) ** 2
    last_error: Exception | None = None
    for _ in range(retries + 1):
        phi = rng.integers(0, m, size=n)
        hashed = hash_project(f, phi, m)
        try:
            learned = learn_exact_low_degree(hashed, m, d, s,
                                             min(delta, 1 / 16), rng,
                                             collector)
            mapping: dict = {}
            new_known: set = set()
            for i in sorted(learned.relevant_variables()):
                bucket = [int(j) for j in np.flatnonzero(phi == i)]
                if not bucket:
                    raise PromiseViolationError(
                        "learned variable has an empty bucket")
                hits = sorted(set(bucket) & known)
                if len(hits) == 1:
                    mapping[i] = hits[0]
                    continue
                a, _ = witness_pair(learned, i)
                pinned = pin_bucket(f, phi, i, a)
                lit = identify_literal(pinned, bucket, collector)
                if lit.var is None:
                    raise PromiseViolationError(
                        "pinned bucket decoded as a constant")
                mapping[i] = lit.var
                new_known.add(lit.var)
            hypothesis = learned.substitute_vars(mapping, n)
            known |= new_known
            return hypothesis
        except PromiseViolationError as exc:
            last_error = exc
            continue
    raise PromiseViolationError(
        f"variable reduction failed after {retries + 1} attempts: "
        f"{last_error}")


# ---------------------------------------------------------------------------
# Main pipeline (zero projections + variable reduction)


def learn_sparse_main(f: QueryOracle, params: LearnParams,
                      eta: float | None = None,
                      rng: np.random.Generator | None = None,
                      collector=None) -> LearnReport:
    """Union-of-projections learner: w independent p-zero projections,
    each learned through learn_reduced_vars with degree cap D; keeps all
    distinct monomials small enough to matter at accuracy epsilon.

    Confidence is boosted to 1 - delta by restarting up to
    ceil(log2(1/delta)) times and validating candidates by sampling."""
    if rng is None:
        rng = np.random.default_rng(params.seed)
    s, eps, n = params.s, params.epsilon, f.n
    plan = _main_plan(n, s, eps, params.delta, eta)
    predicted = main_learn_ceiling(n, s, eps, params.delta, eta)
    start = f.queries_used
    mark = len(collector) if collector is not None else 0
    t0 = time.perf_counter()
    known: set = set()
    best: SparsePoly | None = None
    best_est = math.inf
    outcome = "approx"
    try:
        for _ in range(plan["attempts"]):
            monos: set = set()
            for _ in range(plan["w"]):
                keep_bits = rng.random(n) < plan["p"]
                keep = Assignment.ones_at(n, np.flatnonzero(keep_bits))
                projected = zero_project(f, keep)
                try:
                    piece = learn_reduced_vars(projected, n, plan["D"], s,
                                               plan["round_delta"], known,
                                               rng, collector)
                except PromiseViolationError:
                    continue  # this projection contributes nothing
                for mono in piece.monomial_sets:
                    if len(mono) <= plan["size_cap"]:
                        monos.add(mono)
            candidate = SparsePoly(n, monos)
            if plan["attempts"] == 1:
                best = candidate
                break
            draws = plan["validate_draws"]
            mism = uniform_compare(f, candidate, draws, rng)
            _log(collector, "validate", draws, draws, 1, False)
            est = mism / draws
            if est < best_est:
                best, best_est = candidate, est
            if est <= 1.5 * eps:
                break
    except BudgetExceededError:
        outcome = "gave-up-budget"
        _log_refusal(collector, mark, f.queries_used - start)
        if best is None:
            best = SparsePoly(n)
    if best is None:
        raise PromiseViolationError("every projection round failed")
    if outcome != "gave-up-budget":
        outcome = "exact" if best_est == 0.0 else "approx"
        if plan["attempts"] == 1:
            outcome = "approx"
    return LearnReport(best, f.queries_used - start, predicted,
                       time.perf_counter() - t0, outcome, "main")


# ---------------------------------------------------------------------------
# Uniform-sampling learner (small beta)


def learn_by_sampling(f: QueryOracle, m: int, s: int, epsilon: float,
                      rng: np.random.Generator,
                      collector=None) -> SparsePoly:
    poly, _ = _learn_by_sampling(f, m, s, epsilon, rng, collector)
    return poly


def _learn_by_sampling(f: QueryOracle, m: int, s: int, epsilon: float,
                       rng: np.random.Generator, collector=None):
    """Sampling learner: repeat s times; scan uniform points for a
    positive example of f + h; extract a monomial by two restricted
    searches (the second on the oracle re-restricted by the first result)
    and add it to h. A global counter over positive examples caps runaway
    extraction; hitting the cap declares the zero hypothesis.

    Returns (hypothesis, declared_zero)."""
    if m != f.n:
        raise ValueError("arity mismatch")
    plan = _sampling_plan(s, epsilon)
    monos: set = set()
    ell = 0
    for _ in range(s):
        h = SparsePoly(m, monos)
        view = xor_local(f, h)
        budget_draws = plan["inner_bound"]
        added = False
        while budget_draws > 0:
            used, row = scan_product(view, 0.5, budget_draws, rng)
            _log(collector, "uniform_scan", used, budget_draws,
                 _charge_factor(view), row is not None)
            budget_draws -= used
            if row is None:
                break
            ell += 1
            if ell == plan["halt_cap"]:
                return SparsePoly(m), True
            outer = RestrictionMask(row, np.zeros(0, dtype=np.int64), 0.5)
            first = _find_monomial(view, plan["find_degree"], 2 * s,
                                   plan["find_delta"], rng, outer, collector)
            if first.weight() > plan["weight_threshold"] or \
                    not first.materialized():
                continue
            active = view.active()
            support = np.array(sorted(first.support()), dtype=np.int64)
            on_active = np.isin(active, support).astype(np.uint8)
            inner = RestrictionMask(
                on_active, support[~np.isin(support, active)], 0.0)
            second = _find_monomial(view, plan["find_degree"], 2 * s,
                                    plan["find_delta"], rng, inner,
                                    collector)
            if not second.materialized():
                continue
            monos ^= {second.support()}
            added = True
            break
        if not added:
            return SparsePoly(m, monos), False
    return SparsePoly(m, monos), False


# ---------------------------------------------------------------------------
# Small-beta wrapper


def learn_small_beta(f: QueryOracle, params: LearnParams,
                     rng: np.random.Generator | None = None,
                     collector=None) -> LearnReport:
    """Near-identity zero projection + hashing wrapper around the sampling
    learner, recovering original variables by restricted equivalence tests
    and pinned literal identification. Restarted with validation to reach
    confidence 1 - delta (one pass succeeds with probability >= 2/3)."""
    if rng is None:
        rng = np.random.default_rng(params.seed)
    s, eps, n = params.s, params.epsilon, f.n
    plan = _small_beta_plan(n, s, eps, params.delta)
    predicted = small_beta_ceiling(n, s, eps, params.delta)
    start = f.queries_used
    mark = len(collector) if collector is not None else 0
    t0 = time.perf_counter()
    best: SparsePoly | None = None
    best_est = math.inf
    outcome = "approx"
    declared_zero = False
    try:
        for _ in range(plan["attempts"]):
            candidate, dz = _small_beta_once(f, s, eps, plan, rng, collector)
            if plan["attempts"] == 1:
                best, declared_zero = candidate, dz
                break
            draws = plan["validate_draws"]
            mism = uniform_compare(f, candidate, draws, rng)
            _log(collector, "validate", draws, draws, 1, False)
            est = mism / draws
            if est < best_est:
                best, best_est, declared_zero = candidate, est, dz
            if est <= 1.5 * eps:
                break
    except BudgetExceededError:
        outcome = "gave-up-budget"
        _log_refusal(collector, mark, f.queries_used - start)
        if best is None:
            best = SparsePoly(n)
    if outcome != "gave-up-budget":
        if declared_zero:
            outcome = "declared-zero"
        elif best_est == 0.0 and plan["attempts"] > 1:
            outcome = "exact"
        else:
            outcome = "approx"
    return LearnReport(best, f.queries_used - start, predicted,
                       time.perf_counter() - t0, outcome, "small_beta")


def _small_beta_once(f, s, eps, plan, rng, collector):
    n = f.n
    keep_bits = rng.random(n) < plan["keep"]
    keep = Assignment.ones_at(n, np.flatnonzero(keep_bits))
    projected = zero_project(f, keep)
    m = plan["m"]
    phi = rng.integers(0, m, size=n)
    hashed = hash_project(projected, phi, m)
    learned, declared_zero = _learn_by_sampling(hashed, m, s, eps / 2.0,
                                                rng, collector)
    d_id = plan["ident_degree"]
    delta_id = 1.0 / plan["ident_delta_inv"]
    var_map: dict = {}
    for i in sorted(learned.relevant_variables()):
        mono = min((mm for mm in learned.monomial_sets if i in mm),
                   key=lambda mm: (len(mm), sorted(mm)))
        g_full = and_restrict(hashed, Assignment.ones_at(m, mono))
        g_drop = and_restrict(hashed, Assignment.ones_at(m, mono - {i}))
        diff = xor_oracles(g_full, g_drop)
        row, bias = _equivalence_scan(diff, 2 * s, d_id, delta_id, rng,
                                      None, collector, op="ident_scan")
        if row is None:
            continue  # variable shows no influence; drop its monomials
        # diff depends only on coordinates inside mono, all of them active,
        # so the witness row pins the whole restriction
        act = diff.active()
        w_ones = {int(j) for j in act[row.astype(bool)]}
        pin_a = Assignment(m, ones=frozenset((w_ones & mono) - {i}))
        bucket = [int(j) for j in np.flatnonzero(phi == i)]
        try:
            lit = identify_literal(pin_bucket(projected, phi, i, pin_a),
                                   bucket, collector)
        except PromiseViolationError:
            continue
        if lit.var is None:
            continue
        var_map[i] = lit.var
    monos = []
    for mm in learned.monomial_sets:
        if all(i in var_map for i in mm):
            monos.append(frozenset(var_map[i] for i in mm))
    return SparsePoly(n, monos), declared_zero


# ---------------------------------------------------------------------------
# Automatic dispatch


def learn_auto(f: QueryOracle, params: LearnParams,
               rng: np.random.Generator | None = None,
               collector=None) -> LearnReport:
    """Pick the branch with the smaller proven exponent at (s, epsilon)."""
    if auto_branch(params.s, params.epsilon) == "small_beta":
        return learn_small_beta(f, params, rng, collector)
    return learn_sparse_main(f, params, None, rng, collector)
