"""Acceptance suite: one verdict line per stated guarantee.

Each criterion prints `PASS criterion N: ...` or `FAIL criterion N: ...`
on the real stdout (bypassing pytest capture, so the scoreboard shows up
live in a plain run) and then asserts the same condition.
"""

import json
import math
import sys
import time
from fractions import Fraction
from itertools import combinations

import numpy as np

import conftest
from sparsepoly import bounds
from sparsepoly.cli import main as cli_main
from sparsepoly.learner import (LearnParams, PromiseViolationError,
                                equivalence_ceiling, equivalence_test,
                                find_monomial, identify_literal, learn_auto,
                                learn_by_sampling, learn_exact_low_degree,
                                learn_reduced_vars, learn_small_beta,
                                learn_sparse_main)
from sparsepoly.oracle import (oracle_from_poly, oracle_from_table,
                               uniform_compare)
from sparsepoly.poly import (SparsePoly, _satisfying_weight_counts, distance,
                             prob_one_exact, random_sparse_poly)
from sparsepoly.tester import test_sparsity as run_tester


def verdict(num, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {num}: {detail}"
    # streams live under -s; the conftest summary replays it otherwise
    sys.__stdout__.write(line + "\n")
    sys.__stdout__.flush()
    conftest.SCOREBOARD.append(line)
    assert ok, line


def _lemma_instances(count, seed, need=None):
    """Random nonzero targets over 14 variables, degree <= d in 1..7,
    exactly s in 1..16 distinct monomials."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        d = int(rng.integers(1, 8))
        s = int(rng.integers(1, 17))
        if s > sum(math.comb(14, i) for i in range(d + 1)):
            continue  # fewer than s monomials of degree <= d exist
        if need is not None and not need(d, s):
            continue
        f = random_sparse_poly(14, d, s, rng)
        assert not f.is_zero()
        out.append((d, s, f))
    return out


def test_criterion_1_half_bias_probability_floor():
    t0 = time.perf_counter()
    bad = 0
    for d, s, f in _lemma_instances(200, 101):
        if prob_one_exact(f, Fraction(1, 2)) < Fraction(1, 2**d):
            bad += 1
    el = time.perf_counter() - t0
    verdict(1, bad == 0 and el < 60,
            f"Pr[f=1] >= 2^-d on 200/200 random nonzero targets "
            f"(violations={bad}, {el:.1f}s < 60s)")


def test_criterion_2_heavy_satisfying_assignment():
    t0 = time.perf_counter()
    bad = 0
    for d, s, f in _lemma_instances(200, 101):
        thr = 14 - (s.bit_length() - 1)
        if _satisfying_weight_counts(f)[thr:].sum() == 0:
            bad += 1
    el = time.perf_counter() - t0
    verdict(2, bad == 0 and el < 60,
            f"satisfying assignment of weight >= n - floor(log2 s) exists "
            f"for 200/200 targets (violations={bad}, {el:.1f}s < 60s)")


def test_criterion_3_biased_zero_test_floor():
    qs = [Fraction(1, 2), Fraction(3, 5), Fraction(3, 4), Fraction(9, 10)]
    bad = 0
    insts = _lemma_instances(100, 303,
                             need=lambda d, s: d >= s.bit_length() - 1)
    for d, s, f in insts:
        k = s.bit_length() - 1
        for q in qs:
            if prob_one_exact(f, q) < q ** (d - k) * (1 - q) ** k:
                bad += 1
    verdict(3, bad == 0,
            f"Pr_q[f=1] >= q^(d-k) (1-q)^k in exact arithmetic for 100 "
            f"targets x 4 biases (violations={bad})")


def test_criterion_4_equivalence_testing():
    t0 = time.perf_counter()
    rng = np.random.default_rng(404)
    delta = 0.1
    pairs = []
    while len(pairs) < 1000:
        d = int(rng.integers(2, 8))
        sp = int(rng.integers(1, 9))
        f = random_sparse_poly(14, d, sp, rng)
        g = random_sparse_poly(14, d, sp, rng)
        if f != g:
            pairs.append((d, sp, f, g))
    witnessed = 0
    cap_ok = True
    for d, sp, f, g in pairs:
        s2 = 2 * sp
        o = oracle_from_poly(f)
        w = equivalence_test(o, g, s2, d, delta, rng)
        x = min((math.floor(math.log2(s2)) + 1) / d, 0.5)
        stated = math.ceil(2 ** (bounds.binary_entropy(x) * d)
                           * math.log(1 / delta))
        cap_ok &= equivalence_ceiling(s2, d, delta) == stated
        cap_ok &= o.queries_used <= stated
        if w != "equal":
            assert f.evaluate(w) != g.evaluate(w)  # witness is certified
            witnessed += 1
    equal_hits = 0
    for d, sp, f, _ in pairs:
        o = oracle_from_poly(f)
        if equivalence_test(o, f, 2 * sp, d, delta, rng) == "equal":
            equal_hits += 1
        cap_ok &= o.queries_used <= equivalence_ceiling(2 * sp, d, delta)
    el = time.perf_counter() - t0
    verdict(4, witnessed >= 890 and equal_hits == 1000 and cap_ok,
            f"witness on {witnessed}/1000 unequal pairs (>= 890), equal on "
            f"{equal_hits}/1000 identical pairs, every call within the "
            f"stated repetition cap ({el:.0f}s)")


def test_criterion_5_monomial_search():
    rng = np.random.default_rng(505)
    exact = 0
    superset_bad = 0
    rounds_ok = True
    trials = 500
    for _ in range(trials):
        d = int(rng.integers(2, 7))
        mono = frozenset(int(v) for v in rng.choice(16, d, replace=False))
        o = oracle_from_poly(SparsePoly(16, [mono]))
        col = []
        a = find_monomial(o, d, 1, 0.1, rng, col)
        if not mono <= a.support:
            superset_bad += 1
        exact += a.support == mono
        rounds = sum(1 for r in col if r["op"] == "find_round")
        rounds_ok &= rounds <= math.ceil(8 * d * math.log(16 / 0.1))
    verdict(5, superset_bad == 0 and exact >= 425 and rounds_ok,
            f"support == monomial on {exact}/{trials} (>= 425), superset on "
            f"{trials - superset_bad}/{trials}, rounds always within "
            f"ceil(8 d ln(m/delta))")


def test_criterion_6_exact_low_degree_learning():
    t0 = time.perf_counter()
    rng = np.random.default_rng(606)
    wins = 0
    for _ in range(50):
        f = random_sparse_poly(256, 8, 16, rng)
        o = oracle_from_poly(f)
        try:
            wins += learn_exact_low_degree(o, 256, 8, 16, 0.1, rng) == f
        except PromiseViolationError:
            pass
    el = time.perf_counter() - t0
    verdict(6, wins >= 45 and el < 300,
            f"symbolically exact on {wins}/50 runs over (n=256, d=8, s=16) "
            f"(>= 45), {el:.0f}s < 300s")


def test_criterion_7_variable_reduction():
    rng = np.random.default_rng(707)
    wins = 0
    ident_ok = True
    for _ in range(50):
        f = random_sparse_poly(10_000, 5, 8, rng)
        o = oracle_from_poly(f)
        col = []
        try:
            wins += learn_reduced_vars(o, 10_000, 5, 8, 1 / 3, set(), rng,
                                       col) == f
        except PromiseViolationError:
            pass
        for r in col:
            if r["op"] == "identify":
                ident_ok &= r["used"] <= r["ceiling"]
    verdict(7, wins >= 34 and ident_ok,
            f"exact recovery over n=10^4 on {wins}/50 runs (>= 34), every "
            f"identification within ceil(log2 bucket) + 2 queries")


def test_criterion_8_main_learner_monomial_recovery():
    rng = np.random.default_rng(808)
    s, eps, n = 8, 1 / 64, 10_000
    size_cap = math.log2(s / eps)  # 9
    wins = 0
    for _ in range(30):
        f = random_sparse_poly(n, 5, s, rng)
        o = oracle_from_poly(f)
        try:
            rep = learn_sparse_main(o, LearnParams(s=s, epsilon=eps,
                                                   delta=1 / 3, n=n),
                                    rng=rng)
        except PromiseViolationError:
            continue
        hyp = set(rep.hypothesis.monomial_sets)
        tgt = set(f.monomial_sets)
        small = {m for m in tgt if len(m) <= size_cap}
        wins += small <= hyp and hyp <= tgt
    verdict(8, wins >= 20,
            f"all target monomials of size <= log2(s/eps) recovered with no "
            f"extras on {wins}/30 runs (>= 20) at s=8, eps=1/64, n=10^4")


def test_criterion_9_sampling_learner():
    t0 = time.perf_counter()
    rng = np.random.default_rng(909)
    eps = 2.0 ** -9
    wins = 0
    estimated = 0
    for _ in range(100):
        f = random_sparse_poly(64, 6, 8, rng)
        o = oracle_from_poly(f)
        h = learn_by_sampling(o, 64, 8, eps, rng)
        try:
            wins += float(distance(f, h)) <= eps
        except ValueError:
            estimated += 1
            draws = 10**6
            probe = oracle_from_poly(f)
            est = uniform_compare(probe, h, draws, rng) / draws
            slack = 3.0 * math.sqrt(eps * (1 - eps) / draws)
            wins += est <= eps + slack
    el = time.perf_counter() - t0
    verdict(9, wins >= 85,
            f"distance <= 2^-9 on {wins}/100 runs (>= 85, consistent with "
            f"the 15/16 per-run guarantee; {estimated} runs needed a "
            f"sampled estimate; {el:.0f}s)")


def test_criterion_10_bound_constants():
    t0 = time.perf_counter()
    table = {1: 2.617, 2: 1.961, 3: 1.582, 4: 1.336, 5: 1.157, 6: 1.025,
             7: 0.921}
    gamma_ok = all(abs(bounds.gamma(b)[0] - v) <= 0.005
                   for b, v in table.items())
    gp_ok = True
    for b in np.arange(1.0, 10.01, 0.25):
        x = 1.0 / (float(b) + 1.0)
        direct = max(1.0, x + bounds.binary_entropy(min(x, 0.5)))
        gp_ok &= abs(bounds.gamma_prime(float(b)) - direct) <= 1e-5
    # the often-quoted transposed digits do not satisfy the formula
    gp_ok &= abs(bounds.gamma_prime(2.0) - 1.1252) > 0.01
    note_ok = any("gamma_prime" in note
                  for note in bounds.profile(4, 0.01, 64).to_dict()["notes"])
    thr1 = bounds.beta_threshold("gamma_prime_eq_1")
    thr2 = bounds.beta_threshold("gamma_lt_1")
    thr_ok = abs(thr1 - 3.404) <= 0.01 and abs(thr2 - 6.219) <= 0.02
    el = time.perf_counter() - t0
    verdict(10, gamma_ok and gp_ok and note_ok and thr_ok and el < 10,
            f"gamma table matched to 0.005, gamma_prime matches its formula "
            f"to 1e-5 with the discrepancy note present, thresholds "
            f"{thr1:.3f} and {thr2:.3f} by root-finding ({el:.1f}s < 10s)")


# -- criterion 11 helpers ----------------------------------------------------


def _candidate_levels():
    """Truth tables (as uint64) of all XORs of k monomials over the 6 free
    variables, degree <= 3, for k = 0..4."""
    monos = [m for k in range(4) for m in combinations(range(6), k)]
    fs = np.arange(64, dtype=np.uint64)
    tts = []
    for m in monos:
        mask = np.uint64(sum(1 << v for v in m))
        bits = ((fs & mask) == mask).astype(np.uint8)
        tts.append(int.from_bytes(
            np.packbits(bits, bitorder="little").tobytes(), "little"))
    mono_tt = np.array(tts, dtype=np.uint64)
    levels = [np.zeros(1, dtype=np.uint64)]
    for k in (1, 2, 3, 4):
        idx = np.array(list(combinations(range(len(monos)), k)),
                       dtype=np.int64)
        acc = mono_tt[idx[:, 0]].copy()
        for j in range(1, k):
            acc ^= mono_tt[idx[:, j]]
        levels.append(acc)
    return levels


def _far_certificate(table, levels):
    """Certified lower bound on the distance from `table` (n = 12) to every
    4-sparse multilinear polynomial.

    Split the cube into 64 cosets over variables 6..11. A restriction of a
    4-sparse polynomial has at most 4 monomials over the free variables;
    each monomial of degree >= 4 is within 2^-4 of zero, so dropping j of
    them lands in the enumerated (<= 4-j)-sparse degree-<= 3 set at an
    extra cost of j/16. Averaging the per-coset bounds is sound because
    restriction distributes over the average."""
    rows = np.packbits(table.reshape(64, 64), axis=1,
                       bitorder="little").copy().view(np.uint64).ravel()
    total = 0.0
    for r in rows:
        cum = []
        best = math.inf
        for lv in levels:
            best = min(best, int(np.bitwise_count(lv ^ r).min()))
            cum.append(best / 64.0)
        bound = min(cum[4 - j] - j / 16.0 for j in range(5))
        total += max(bound, 0.0)
    return total / 64.0


def test_criterion_11_property_tester():
    t0 = time.perf_counter()
    rng = np.random.default_rng(1111)
    accepts = 0
    for _ in range(100):
        target = random_sparse_poly(12, 3, 4, rng)
        o = oracle_from_poly(target)
        accepts += run_tester(o, 4, 0.05, rng).accepted
    levels = _candidate_levels()
    certified = 0
    rejects = 0
    min_cert = math.inf
    for _ in range(50):
        table = rng.integers(0, 2, size=4096, dtype=np.uint8)
        cert = _far_certificate(table, levels)
        if cert < 0.05:
            continue  # not certifiably far at this epsilon; discard
        min_cert = min(min_cert, cert)
        certified += 1
        o = oracle_from_table(table, 12)
        rejects += not run_tester(o, 4, 0.05, rng).accepted
    el = time.perf_counter() - t0
    sound = certified > 0 and rejects * 3 >= certified * 2
    verdict(11, accepts >= 67 and sound and el < 600,
            f"accepted {accepts}/100 sparse targets (>= 67); rejected "
            f"{rejects}/{certified} tables certified >= 0.05-far (min "
            f"certificate {min_cert:.3f}); {el:.0f}s < 600s")


def _reconciles(col, *oracles):
    total = sum(r["used"] * r["factor"] for r in col)
    charged = sum(o.queries_used for o in oracles)
    return total == charged and all(0 <= r["used"] <= r["ceiling"]
                                    for r in col)


def test_criterion_12_query_accounting():
    rng = np.random.default_rng(1212)
    checks = []

    f = random_sparse_poly(20, 3, 4, rng)
    g = random_sparse_poly(20, 3, 4, rng)
    o = oracle_from_poly(f)
    c = []
    equivalence_test(o, g, 8, 3, 0.1, rng, c)
    checks.append(("equivalence/poly", _reconciles(c, o)))

    o1, o2 = oracle_from_poly(f), oracle_from_poly(g)
    c = []
    equivalence_test(o1, o2, 8, 3, 0.1, rng, c)
    checks.append(("equivalence/two-oracle", _reconciles(c, o1, o2)))

    o = oracle_from_poly(SparsePoly(16, [frozenset({2, 9, 14})]))
    c = []
    find_monomial(o, 3, 1, 0.1, rng, c)
    checks.append(("find", _reconciles(c, o)))

    f = random_sparse_poly(32, 4, 6, rng)
    o = oracle_from_poly(f)
    c = []
    learn_exact_low_degree(o, 32, 4, 6, 0.1, rng, c)
    checks.append(("exact", _reconciles(c, o)))

    o = oracle_from_poly(SparsePoly(16, [{5}]))
    c = []
    identify_literal(o, [3, 5, 9], c)
    checks.append(("identify", _reconciles(c, o)))

    f = random_sparse_poly(2000, 3, 4, rng)
    o = oracle_from_poly(f)
    c = []
    learn_reduced_vars(o, 2000, 3, 4, 0.1, set(), rng, c)
    checks.append(("reduced", _reconciles(c, o)))

    f = random_sparse_poly(128, 3, 4, rng)
    for budget, tag in ((None, "main"), (500, "main/refused")):
        o = oracle_from_poly(f, budget=budget)
        c = []
        rep = learn_sparse_main(o, LearnParams(s=4, epsilon=0.05, delta=0.1,
                                               n=128), rng=rng, collector=c)
        ok = _reconciles(c, o) and rep.queries_used == o.queries_used
        if budget is not None:
            ok &= rep.outcome == "gave-up-budget"
        checks.append((tag, ok))

    f = random_sparse_poly(48, 4, 6, rng)
    o = oracle_from_poly(f)
    c = []
    learn_by_sampling(o, 48, 6, 2**-8, rng, c)
    checks.append(("sampling", _reconciles(c, o)))

    f = random_sparse_poly(40, 3, 4, rng)
    for budget, tag in ((None, "small_beta"), (500, "small_beta/refused")):
        o = oracle_from_poly(f, budget=budget)
        c = []
        rep = learn_small_beta(o, LearnParams(s=4, epsilon=1 / 16,
                                              delta=0.1, n=40),
                               rng=rng, collector=c)
        ok = _reconciles(c, o)
        if budget is not None:
            ok &= rep.outcome == "gave-up-budget"
        checks.append((tag, ok))

    f = random_sparse_poly(64, 3, 4, rng)
    o = oracle_from_poly(f)
    c = []
    learn_auto(o, LearnParams(s=4, epsilon=1 / 16, delta=0.2, n=64),
               rng=rng, collector=c)
    checks.append(("auto", _reconciles(c, o)))

    p = random_sparse_poly(12, 3, 4, rng)
    o = oracle_from_poly(p)
    c = []
    run_tester(o, 4, 0.05, rng, collector=c)
    checks.append(("tester/sparse", _reconciles(c, o)))

    table = rng.integers(0, 2, size=4096, dtype=np.uint8)
    o = oracle_from_table(table, 12)
    c = []
    run_tester(o, 4, 0.05, rng, collector=c)
    checks.append(("tester/far", _reconciles(c, o)))

    bad = [name for name, ok in checks if not ok]
    verdict(12, not bad,
            f"sum(used x factor) equals the counter delta with every record "
            f"within its ceiling across {len(checks)} instrumented runs"
            + (f"; mismatches: {bad}" if bad else ""))


def test_criterion_13_bench_determinism(tmp_path):
    def run(tag):
        csvp = tmp_path / f"{tag}.csv"
        jsp = tmp_path / f"{tag}.jsonl"
        code = cli_main(["bench", "--s-values", "2,4", "--epsilon-values",
                         "0.25,0.1", "--n", "20", "--trials", "2", "--seed",
                         "99", "--csv", str(csvp), "--jsonl", str(jsp)])
        assert code == 0
        body = [ln for ln in jsp.read_text().splitlines()
                if json.loads(ln).get("kind") != "meta"]
        return body, csvp.read_text()

    first, second = run("a"), run("b")
    verdict(13, first == second and len(first[0]) >= 5,
            f"two identically seeded bench sweeps produced byte-identical "
            f"payloads ({len(first[0])} lines + CSV)")
