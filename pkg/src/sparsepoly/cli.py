"""Command-line interface.

Subcommands:

- gen:    sample random sparse polynomials and write them as JSON
- learn:  run a learning algorithm against a stored target, per-trial
          JSON lines plus an aggregate line
- test:   run the sparsity property tester the same way
- bounds: print the theoretical profile for (s, epsilon, n)
- bench:  sweep a (s, epsilon) grid, emit a CSV of measured vs predicted

All streams are JSON lines with schema "v1". Trial i uses the generator
seeded by SeedSequence(seed, spawn_key=(i,)), so outputs are reproducible
line for line; wall-clock data lives only in "meta" lines.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time

import numpy as np

from . import bounds as bounds_mod
from . import learner as learner_mod
from . import tester as tester_mod
from .learner import LearnParams, PromiseViolationError
from .oracle import BudgetExceededError, oracle_from_poly, uniform_compare
from .poly import (SparsePoly, distance, load_poly, poly_from_dict,
                   poly_to_dict, random_sparse_poly, save_poly)

SCHEMA = "v1"


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


class _Sink:
    def __init__(self, path: str | None):
        self._fh = open(path, "w") if path else sys.stdout
        self._own = path is not None

    def emit(self, obj):
        self._fh.write(_dumps(obj) + "\n")
        self._fh.flush()

    def close(self):
        if self._own:
            self._fh.close()


def _meta(command: str, args: argparse.Namespace) -> dict:
    skip = {"func", "out"}
    return {"schema": SCHEMA, "kind": "meta", "command": command,
            "timestamp": time.time(),
            "args": {k: v for k, v in sorted(vars(args).items())
                     if k not in skip}}


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence(seed, spawn_key=(trial,)))


def _load_target(path: str) -> SparsePoly:
    return load_poly(path)


# ---------------------------------------------------------------------------


def cmd_gen(args) -> int:
    sink = _Sink(args.out)
    rng = np.random.default_rng(np.random.SeedSequence(args.seed))
    polys = [random_sparse_poly(args.n, args.degree, args.sparsity, rng)
             for _ in range(args.count)]
    if args.count == 1 and args.out:
        save_poly(polys[0], args.out)
    else:
        for p in polys:
            sink.emit(poly_to_dict(p))
    sink.close()
    return 0


def _measure_distance(target: SparsePoly, hypothesis: SparsePoly,
                      epsilon: float, rng) -> tuple[float, bool]:
    try:
        return distance(target, hypothesis), False
    except ValueError:
        probe = oracle_from_poly(target)
        draws = math.ceil((48.0 / epsilon) * math.log(40.0))
        mism = uniform_compare(probe, hypothesis, draws, rng)
        return mism / draws, True


def _run_learn_trial(target, args, trial):
    rng = _trial_rng(args.seed, trial)
    oracle = oracle_from_poly(target)
    if args.budget:
        oracle.set_budget(args.budget)
    params = LearnParams(s=args.s, epsilon=args.epsilon, delta=args.delta,
                         n=target.n)
    collector = [] if args.instrument else None
    t0 = time.perf_counter()
    if args.algorithm == "sampling":
        try:
            h = learner_mod.learn_by_sampling(oracle, target.n, args.s,
                                              args.epsilon, rng, collector)
            outcome = "approx"
        except BudgetExceededError:
            h, outcome = SparsePoly(target.n), "gave-up-budget"
            learner_mod._log_refusal(collector, 0, oracle.queries_used)
        report = learner_mod.LearnReport(
            h, oracle.queries_used,
            learner_mod.sampling_learn_ceiling(target.n, args.s,
                                               args.epsilon),
            time.perf_counter() - t0, outcome, "sampling")
    else:
        fn = {"auto": learner_mod.learn_auto,
              "main": learner_mod.learn_sparse_main,
              "small-beta": learner_mod.learn_small_beta}[args.algorithm]
        report = fn(oracle, params, rng=rng, collector=collector)
    dist, estimated = _measure_distance(target, report.hypothesis,
                                        args.epsilon, rng)
    success = report.outcome != "gave-up-budget" and dist <= args.epsilon
    row = {"schema": SCHEMA, "kind": "trial", "trial": trial,
           "algorithm": report.algorithm, "queries": report.queries_used,
           "predicted": report.predicted_bound,
           "ratio": report.queries_used / report.predicted_bound
           if report.predicted_bound else None,
           "outcome": report.outcome, "distance": dist,
           "distance_estimated": estimated, "success": success,
           "hypothesis_sparsity": report.hypothesis.sparsity}
    return row, report, collector


def cmd_learn(args) -> int:
    target = _load_target(args.target)
    sink = _Sink(args.out)
    sink.emit(_meta("learn", args))
    inst_fh = open(args.instrument, "w") if args.instrument else None
    successes = 0
    queries = []
    ratios = []
    for trial in range(args.trials):
        row, report, collector = _run_learn_trial(target, args, trial)
        sink.emit(row)
        if inst_fh is not None:
            for rec in collector:
                inst_fh.write(_dumps({"trial": trial, **rec}) + "\n")
        successes += row["success"]
        queries.append(row["queries"])
        if row["ratio"] is not None:
            ratios.append(row["ratio"])
    sink.emit({"schema": SCHEMA, "kind": "aggregate", "trials": args.trials,
               "successes": successes,
               "success_rate": successes / args.trials,
               "mean_queries": float(np.mean(queries)),
               "max_queries": int(np.max(queries)),
               "mean_ratio": float(np.mean(ratios)) if ratios else None})
    sink.close()
    if inst_fh is not None:
        inst_fh.close()
    return 0 if successes >= 1 else 1


def cmd_test(args) -> int:
    target = _load_target(args.target)
    sink = _Sink(args.out)
    sink.emit(_meta("test", args))
    successes = 0
    accepts = 0
    for trial in range(args.trials):
        rng = _trial_rng(args.seed, trial)
        oracle = oracle_from_poly(target)
        verdict = tester_mod.test_sparsity(oracle, args.s, args.epsilon,
                                           rng, args.budget_factor)
        accepts += verdict.accepted
        if args.expect == "sparse":
            ok = verdict.accepted
        elif args.expect == "far":
            ok = not verdict.accepted
        else:
            ok = True
        successes += ok
        sink.emit({"schema": SCHEMA, "kind": "trial", "trial": trial,
                   "decision": verdict.decision,
                   "queries": verdict.queries_used,
                   "expected_ok": ok,
                   "evidence": verdict.evidence})
    sink.emit({"schema": SCHEMA, "kind": "aggregate", "trials": args.trials,
               "accepts": accepts, "accept_rate": accepts / args.trials,
               "successes": successes,
               "success_rate": successes / args.trials})
    sink.close()
    return 0 if successes >= 1 else 1


def cmd_bounds(args) -> int:
    sink = _Sink(args.out)
    prof = bounds_mod.profile(args.s, args.epsilon, args.n)
    payload = {"schema": SCHEMA, "kind": "bounds", **prof.to_dict()}
    sink.emit(payload)
    sink.close()
    return 0


def cmd_bench(args) -> int:
    s_values = [int(x) for x in args.s_values.split(",")]
    eps_values = [float(x) for x in args.epsilon_values.split(",")]
    sink = _Sink(args.jsonl)
    sink.emit(_meta("bench", args))
    rows = []
    trial_counter = 0
    for s in s_values:
        for eps in eps_values:
            beta = bounds_mod.beta_of(s, eps)
            branch = args.algorithm
            if branch == "auto":
                branch = learner_mod.auto_branch(s, eps)
            degree = min(args.n, max(1, math.ceil(math.log2(max(s, 2)))))
            succ = 0
            queries = []
            for _ in range(args.trials):
                rng = _trial_rng(args.seed, trial_counter)
                trial_counter += 1
                target = random_sparse_poly(args.n, degree, s, rng)
                oracle = oracle_from_poly(target)
                params = LearnParams(s=s, epsilon=eps, delta=args.delta,
                                     n=args.n)
                fn = {"main": learner_mod.learn_sparse_main,
                      "small_beta": learner_mod.learn_small_beta}[branch]
                try:
                    report = fn(oracle, params, rng=rng)
                    dist, _ = _measure_distance(target, report.hypothesis,
                                                eps, rng)
                    ok = report.outcome != "gave-up-budget" and dist <= eps
                except PromiseViolationError:
                    report, ok = None, False
                succ += ok
                queries.append(oracle.queries_used)
            predicted = (learner_mod.main_learn_ceiling(args.n, s, eps,
                                                        args.delta)
                         if branch == "main" else
                         learner_mod.small_beta_ceiling(args.n, s, eps,
                                                        args.delta))
            mean_q = float(np.mean(queries))
            row = {"s": s, "epsilon": eps,
                   "beta": "inf" if math.isinf(beta) else round(beta, 6),
                   "algorithm": branch, "trials": args.trials,
                   "success_rate": succ / args.trials,
                   "mean_queries": mean_q, "predicted": predicted,
                   "ratio": mean_q / predicted}
            rows.append(row)
            sink.emit({"schema": SCHEMA, "kind": "cell", **row,
                       "asymptotic": bounds_mod.predicted_queries(
                           s, eps, args.n,
                           "main" if branch == "main" else "small_beta")})
    sink.emit({"schema": SCHEMA, "kind": "aggregate", "cells": len(rows)})
    sink.close()
    with open(args.csv, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=[
            "s", "epsilon", "beta", "algorithm", "trials", "success_rate",
            "mean_queries", "predicted", "ratio"])
        writer.writeheader()
        writer.writerows(rows)
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sparsepoly",
        description="learn and test sparse GF(2) multilinear polynomials "
                    "from membership queries")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="sample random sparse polynomials")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--degree", type=int, required=True)
    g.add_argument("--sparsity", type=int, required=True)
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default=None)
    g.set_defaults(func=cmd_gen)

    l = sub.add_parser("learn", help="run a learner against a stored target")
    l.add_argument("--target", required=True)
    l.add_argument("--s", type=int, required=True)
    l.add_argument("--epsilon", type=float, required=True)
    l.add_argument("--delta", type=float, default=1 / 3)
    l.add_argument("--algorithm", default="auto",
                   choices=["auto", "main", "small-beta", "sampling"])
    l.add_argument("--trials", type=int, default=1)
    l.add_argument("--seed", type=int, default=0)
    l.add_argument("--budget", type=int, default=None)
    l.add_argument("--instrument", default=None,
                   help="write per-subroutine query records to this file")
    l.add_argument("--out", default=None)
    l.set_defaults(func=cmd_learn)

    t = sub.add_parser("test", help="run the sparsity property tester")
    t.add_argument("--target", required=True)
    t.add_argument("--s", type=int, required=True)
    t.add_argument("--epsilon", type=float, required=True)
    t.add_argument("--trials", type=int, default=1)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--budget-factor", type=float, default=10.0)
    t.add_argument("--expect", choices=["sparse", "far"], default=None)
    t.add_argument("--out", default=None)
    t.set_defaults(func=cmd_test)

    b = sub.add_parser("bounds", help="print the theoretical profile")
    b.add_argument("--s", type=int, required=True)
    b.add_argument("--epsilon", type=float, required=True)
    b.add_argument("--n", type=int, default=1024)
    b.add_argument("--out", default=None)
    b.set_defaults(func=cmd_bounds)

    be = sub.add_parser("bench", help="sweep a grid, CSV of measured costs")
    be.add_argument("--s-values", required=True)
    be.add_argument("--epsilon-values", required=True)
    be.add_argument("--n", type=int, required=True)
    be.add_argument("--trials", type=int, default=3)
    be.add_argument("--delta", type=float, default=1 / 3)
    be.add_argument("--seed", type=int, default=0)
    be.add_argument("--algorithm", default="auto",
                    choices=["auto", "main", "small_beta"])
    be.add_argument("--csv", required=True)
    be.add_argument("--jsonl", default=None)
    be.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, KeyError, PromiseViolationError,
            BudgetExceededError) as exc:
        sys.stderr.write(_dumps({"schema": SCHEMA, "kind": "error",
                                 "error": type(exc).__name__,
                                 "message": str(exc)}) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
