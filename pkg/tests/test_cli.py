"""CLI: subcommand flows, stream shapes, exit codes, reproducibility."""

import csv
import json

import pytest

from sparsepoly.cli import main
from sparsepoly.poly import load_poly


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def lines_of(text):
    return [json.loads(ln) for ln in text.splitlines() if ln]


def body_lines(path):
    """All JSON lines except meta ones (which carry wall-clock data)."""
    with open(path) as fh:
        return [ln for ln in fh.read().splitlines()
                if json.loads(ln).get("kind") != "meta"]


class TestGen:
    def test_single_poly_to_file(self, tmp_path, capsys):
        out = tmp_path / "f.json"
        code, _, _ = run(["gen", "--n", "16", "--degree", "3", "--sparsity",
                          "4", "--seed", "7", "--out", str(out)], capsys)
        assert code == 0
        p = load_poly(str(out))
        assert p.n == 16 and p.sparsity == 4 and p.degree <= 3

    def test_count_to_stdout(self, capsys):
        code, out, _ = run(["gen", "--n", "8", "--degree", "2", "--sparsity",
                            "3", "--count", "4", "--seed", "1"], capsys)
        assert code == 0
        rows = lines_of(out)
        assert len(rows) == 4
        assert all(r["n"] == 8 and len(r["monomials"]) == 3 for r in rows)

    def test_same_seed_same_output(self, capsys):
        argv = ["gen", "--n", "10", "--degree", "3", "--sparsity", "2",
                "--count", "3", "--seed", "5"]
        _, out1, _ = run(argv, capsys)
        _, out2, _ = run(argv, capsys)
        assert out1 == out2

    def test_impossible_request_is_error_object(self, capsys):
        code, _, err = run(["gen", "--n", "3", "--degree", "2", "--sparsity",
                            "100"], capsys)
        assert code == 2
        obj = json.loads(err)
        assert obj["kind"] == "error" and obj["schema"] == "v1"


@pytest.fixture()
def target_file(tmp_path, capsys):
    out = tmp_path / "target.json"
    code = main(["gen", "--n", "32", "--degree", "3", "--sparsity", "4",
                 "--seed", "11", "--out", str(out)])
    capsys.readouterr()
    assert code == 0
    return str(out)


class TestLearn:
    def test_stream_shape_and_success(self, target_file, capsys):
        code, out, _ = run(["learn", "--target", target_file, "--s", "4",
                            "--epsilon", "0.1", "--trials", "2",
                            "--seed", "3"], capsys)
        assert code == 0
        rows = lines_of(out)
        assert rows[0]["kind"] == "meta" and rows[0]["command"] == "learn"
        trials = [r for r in rows if r["kind"] == "trial"]
        agg = [r for r in rows if r["kind"] == "aggregate"]
        assert len(trials) == 2 and len(agg) == 1
        for t in trials:
            assert t["queries"] <= t["predicted"]
            assert 0 <= t["distance"] <= 1
            assert t["outcome"] in ("exact", "approx", "declared-zero",
                                    "gave-up-budget")
        assert agg[0]["successes"] >= 1
        assert agg[0]["max_queries"] >= agg[0]["mean_queries"] > 0

    def test_budget_starvation_exit_one(self, target_file, capsys):
        code, out, _ = run(["learn", "--target", target_file, "--s", "4",
                            "--epsilon", "0.1", "--trials", "1",
                            "--budget", "3", "--seed", "3"], capsys)
        assert code == 1
        rows = lines_of(out)
        trial = next(r for r in rows if r["kind"] == "trial")
        assert trial["outcome"] == "gave-up-budget"
        assert trial["queries"] <= 3

    def test_instrument_records(self, target_file, tmp_path, capsys):
        inst = tmp_path / "records.jsonl"
        code, out, _ = run(["learn", "--target", target_file, "--s", "4",
                            "--epsilon", "0.1", "--trials", "1", "--seed",
                            "3", "--instrument", str(inst)], capsys)
        assert code == 0
        recs = [json.loads(ln) for ln in inst.read_text().splitlines()]
        assert recs
        assert all({"trial", "op", "used", "ceiling", "factor",
                    "witness"} <= set(r) for r in recs)
        total = sum(r["used"] * r["factor"] for r in recs)
        trial = next(r for r in lines_of(out) if r["kind"] == "trial")
        assert total == trial["queries"]

    def test_reruns_identical_minus_meta(self, target_file, tmp_path,
                                         capsys):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        for path in (a, b):
            code = main(["learn", "--target", target_file, "--s", "4",
                         "--epsilon", "0.1", "--trials", "3", "--seed", "9",
                         "--algorithm", "main", "--out", str(path)])
            capsys.readouterr()
            assert code == 0
        assert body_lines(a) == body_lines(b)

    def test_each_algorithm_runs(self, target_file, capsys):
        for algo in ("auto", "main", "small-beta", "sampling"):
            code, out, _ = run(["learn", "--target", target_file, "--s", "4",
                                "--epsilon", "0.1", "--trials", "1",
                                "--seed", "2", "--algorithm", algo], capsys)
            assert code == 0, algo
            trial = next(r for r in lines_of(out) if r["kind"] == "trial")
            assert trial["algorithm"] in ("main", "small_beta", "sampling")

    def test_missing_target_is_error(self, capsys):
        code, _, err = run(["learn", "--target", "/nonexistent.json", "--s",
                            "2", "--epsilon", "0.1"], capsys)
        assert code == 2
        assert json.loads(err)["kind"] == "error"


class TestTest:
    def test_expect_sparse_passes(self, target_file, capsys):
        code, out, _ = run(["test", "--target", target_file, "--s", "4",
                            "--epsilon", "0.1", "--trials", "3", "--seed",
                            "4", "--expect", "sparse"], capsys)
        assert code == 0
        rows = lines_of(out)
        agg = next(r for r in rows if r["kind"] == "aggregate")
        assert agg["accepts"] >= 2
        trial = next(r for r in rows if r["kind"] == "trial")
        assert trial["decision"] in ("accept", "reject")
        assert "evidence" in trial

    def test_expect_far_on_sparse_target_fails(self, target_file, capsys):
        # an honestly sparse target should be accepted, so demanding
        # rejection yields no successes
        code, out, _ = run(["test", "--target", target_file, "--s", "4",
                            "--epsilon", "0.1", "--trials", "2", "--seed",
                            "4", "--expect", "far"], capsys)
        rows = lines_of(out)
        agg = next(r for r in rows if r["kind"] == "aggregate")
        assert code == (0 if agg["successes"] else 1)
        assert agg["accept_rate"] >= 0.5


class TestBounds:
    def test_payload(self, capsys):
        code, out, _ = run(["bounds", "--s", "8", "--epsilon", "0.01",
                            "--n", "256"], capsys)
        assert code == 0
        row = lines_of(out)[0]
        assert row["kind"] == "bounds"
        assert row["beta"] == pytest.approx(2.214619, abs=1e-5)
        assert row["gamma_prime"] < row["gamma"]  # sampling branch wins here
        assert row["q_upper_small_beta"] < row["q_upper_main"]
        assert any("gamma_prime" in note for note in row["notes"])

    def test_degenerate_s1(self, capsys):
        code, out, _ = run(["bounds", "--s", "1", "--epsilon", "0.1"],
                           capsys)
        assert code == 0
        assert lines_of(out)[0]["beta"] == "inf"


class TestBench:
    def test_csv_and_jsonl(self, tmp_path, capsys):
        csv_path = tmp_path / "bench.csv"
        jsonl_path = tmp_path / "bench.jsonl"
        code = main(["bench", "--s-values", "2,4", "--epsilon-values",
                     "0.1", "--n", "24", "--trials", "2", "--seed", "6",
                     "--csv", str(csv_path), "--jsonl", str(jsonl_path)])
        capsys.readouterr()
        assert code == 0
        with open(csv_path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert [r["s"] for r in rows] == ["2", "4"]
        assert set(rows[0]) == {"s", "epsilon", "beta", "algorithm",
                                "trials", "success_rate", "mean_queries",
                                "predicted", "ratio"}
        for r in rows:
            assert float(r["mean_queries"]) <= float(r["predicted"])
        cells = [ln for ln in body_lines(jsonl_path)
                 if json.loads(ln)["kind"] == "cell"]
        assert len(cells) == 2
        assert "asymptotic" in json.loads(cells[0])

    def test_rerun_identical_minus_meta(self, tmp_path, capsys):
        outs = []
        for tag in ("x", "y"):
            csv_path = tmp_path / f"{tag}.csv"
            jsonl_path = tmp_path / f"{tag}.jsonl"
            code = main(["bench", "--s-values", "2", "--epsilon-values",
                         "0.25,0.1", "--n", "16", "--trials", "2", "--seed",
                         "8", "--csv", str(csv_path), "--jsonl",
                         str(jsonl_path)])
            capsys.readouterr()
            assert code == 0
            outs.append((body_lines(jsonl_path), csv_path.read_text()))
        assert outs[0] == outs[1]
