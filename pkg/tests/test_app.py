import json
import time

import pytest
from hypothesis import given, strategies as st

from payouts.app import HARD_VIOLATIONS, bench_to_csv, bench_to_text, main, run_bench
from payouts.core import ContestSpec, PayoutStructure
from payouts.tables import (bundled_suite, load_spec, spec_from_dict, structure_from_csv,
                            structure_to_csv, structure_to_text)

YAHOO_90 = dict(prize_pool=90, top_prize=25, min_payout=2, winners=30, max_buckets=7)
WSOP = dict(prize_pool=60_348_000, top_prize=8_000_000, min_payout=15_000, winners=1000,
            max_buckets=30, singleton_buckets=9)


@pytest.fixture
def spec_file(tmp_path):
    def write(d, name="contest.json"):
        p = tmp_path / name
        p.write_text(json.dumps(d))
        return str(p)
    return write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def csv_table(text):
    return structure_from_csv(text)


class TestGenerate:
    def test_yahoo_90(self, capsys, spec_file):
        code, out, err = run(capsys, "generate", spec_file(YAHOO_90), "--format", "csv")
        assert code == 0
        s = csv_table(out)
        assert s.total == 90 and s.winners == 30 and len(s) <= 7
        assert "cost" in err and "violations: no violations" in err

    def test_text_table_sums_to_pool(self, capsys, spec_file):
        code, out, _ = run(capsys, "generate", spec_file(YAHOO_90))
        assert code == 0
        last = out.strip().splitlines()[-1].split()
        assert last[0] == "total" and last[1] == "30" and last[-1] == "$90"

    def test_winner_take_all(self, capsys, spec_file):
        spec = dict(prize_pool=500, top_prize=500, min_payout=5, winners=1, max_buckets=1)
        code, out, _ = run(capsys, "generate", spec_file(spec), "--format", "csv")
        assert code == 0
        assert csv_table(out).pairs() == [(1, 500)]

    def test_wsop(self, capsys, spec_file):
        code, out, _ = run(capsys, "generate", spec_file(WSOP), "--format", "csv")
        assert code == 0
        s = csv_table(out)
        assert s.winners == 1000 and s.total == 60_348_000
        assert s.sizes[:9] == [1] * 9

    def test_singletons_flag(self, capsys, spec_file):
        d = dict(WSOP)
        del d["singleton_buckets"]
        _, out, _ = run(capsys, "generate", spec_file(d), "--format", "csv", "--singletons", "9")
        assert csv_table(out).sizes[:9] == [1] * 9

    def test_dp_solver(self, capsys, spec_file):
        spec = dict(prize_pool=12, top_prize=8, min_payout=2, winners=2, max_buckets=2)
        code, out, _ = run(capsys, "generate", spec_file(spec), "--solver", "dp", "--format", "csv")
        assert code == 0 and csv_table(out).pairs() == [(1, 8), (1, 4)]

    def test_ilp_export_and_import(self, capsys, spec_file, tmp_path):
        spec = dict(prize_pool=12, top_prize=8, min_payout=2, winners=2, max_buckets=2)
        path = spec_file(spec)
        lp = tmp_path / "model.lp"
        code, _, _ = run(capsys, "generate", path, "--solver", "ilp-export", "--out", str(lp))
        assert code == 0 and lp.read_text().startswith("\\")
        from payouts import ilp
        from payouts.app import ideal_curve
        s = ContestSpec(**spec)
        model = ilp.build(s, ideal_curve(s))
        sol = tmp_path / "sol.txt"
        sol.write_text(ilp.write_solution(ilp.structure_to_assignment(
            model, PayoutStructure.from_pairs([(1, 8), (1, 4)]))))
        code, out, _ = run(capsys, "generate", path, "--solver", "ilp-export",
                           "--solution", str(sol), "--format", "csv")
        assert code == 0 and csv_table(out).pairs() == [(1, 8), (1, 4)]

    def test_out_file(self, capsys, spec_file, tmp_path):
        target = tmp_path / "t.csv"
        code, out, _ = run(capsys, "generate", spec_file(YAHOO_90), "--format", "csv",
                           "--out", str(target))
        assert code == 0 and out == ""
        assert csv_table(target.read_text()).total == 90

    def test_bad_spec_file(self, capsys, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{not json")
        code, _, err = run(capsys, "generate", str(p))
        assert code == 2 and "not valid JSON" in err
        code, _, err = run(capsys, "generate", str(tmp_path / "missing.json"))
        assert code == 2

    def test_infeasible_curve_reported(self, capsys, spec_file):
        spec = dict(prize_pool=100, top_prize=10, min_payout=5, winners=10, max_buckets=3)
        code, _, err = run(capsys, "generate", spec_file(spec))
        assert code == 2 and "<" in err

    def test_exit_status_tracks_hard_violations(self, capsys, spec_file, tmp_path):
        spec = dict(prize_pool=12, top_prize=8, min_payout=2, winners=2, max_buckets=2)
        path = spec_file(spec)
        from payouts import ilp
        from payouts.app import ideal_curve
        s = ContestSpec(**spec)
        model = ilp.build(s, ideal_curve(s))
        # a consistent assignment that pays 8 + 6 = 14 > 12 is refused by the pool row
        vals = ilp.structure_to_assignment(model, PayoutStructure.from_pairs([(1, 8), (1, 6)]))
        sol = tmp_path / "over.txt"
        sol.write_text(ilp.write_solution(vals))
        code, _, err = run(capsys, "generate", path, "--solver", "ilp-export", "--solution", str(sol))
        assert code == 2 and "Prize Pool" in err
        assert HARD_VIOLATIONS == {"budget", "prize_monotonicity"}


class TestBench:
    def test_bundled_suite(self):
        suite = bundled_suite()
        assert len(suite) == 25
        small = [item for item in suite if item["spec"]["prize_pool"] <= 18_000]
        rows = run_bench(small)
        assert [r.status for r in rows] == ["ok"] * len(small)
        assert all(r.runtime_ms < 1000 for r in rows)
        assert not any(r.violations.kinds() & HARD_VIOLATIONS for r in rows)

    def test_empty_suite(self, capsys, tmp_path):
        p = tmp_path / "empty.json"
        p.write_text("[]")
        code, out, _ = run(capsys, "bench", str(p), "--format", "csv")
        assert code == 0
        assert out.strip().splitlines() == ["label,solver,status,cost,distance,runtime_ms,"
                                            "extra_winners,violations"]

    def test_bad_row_does_not_stop_the_run(self, capsys, tmp_path):
        p = tmp_path / "suite.json"
        p.write_text(json.dumps([dict(label="broken", prize_pool=10),
                                 dict(YAHOO_90, label="yahoo")]))
        code, out, _ = run(capsys, "bench", str(p), "--format", "csv")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[1].startswith("broken,heuristic,error")
        assert lines[2].startswith("yahoo,heuristic,ok")

    def test_costs_are_recomputed_and_deterministic(self):
        suite = [dict(label="y", spec=YAHOO_90, reference=None)]
        a, b = run_bench(suite), run_bench(suite)
        assert a[0].cost == b[0].cost
        assert a[0].distance == pytest.approx(a[0].cost ** 0.5)

    def test_several_solvers(self):
        spec = dict(prize_pool=20, top_prize=10, min_payout=2, winners=4, max_buckets=2)
        rows = run_bench([dict(label="toy", spec=spec, reference=None)],
                         solvers=("heuristic", "dp", "ilp-export"))
        assert [r.solver for r in rows] == ["heuristic", "dp", "ilp-export"]
        assert rows[2].status == "exported"
        assert rows[1].cost <= rows[0].cost or rows[0].violations.kinds()
        text = bench_to_text(rows)
        assert len(text.splitlines()) == 4
        assert bench_to_csv(rows).count("\n") == 4

    def test_large_contest_time_budget(self):
        item = next(i for i in bundled_suite() if i["label"] == "DraftKings 10000000")
        t0 = time.perf_counter()
        (row,) = run_bench([item])
        assert row.status == "ok"
        assert time.perf_counter() - t0 < 30


class TestCurve:
    def test_big_contest(self, capsys, spec_file):
        spec = dict(prize_pool=10**6, top_prize=150_000, min_payout=25, winners=10_000,
                    max_buckets=30)
        code, out, _ = run(capsys, "curve", spec_file(spec))
        lines = out.strip().splitlines()
        assert code == 0 and len(lines) == 10_001
        assert lines[1].split()[0] == "1" and float(lines[1].split()[1]) == 150_000

    def test_toy(self, capsys, spec_file):
        spec = dict(prize_pool=170, top_prize=110, min_payout=10, winners=2, max_buckets=2)
        code, out, _ = run(capsys, "curve", spec_file(spec))
        assert code == 0 and len(out.strip().splitlines()) == 3

    def test_exponential_falls_to_min_payout_quickly(self, capsys, spec_file):
        spec = dict(prize_pool=10**6, top_prize=150_000, min_payout=25, winners=10_000,
                    max_buckets=30)
        code, out, _ = run(capsys, "curve", spec_file(spec), "--curve", "exp")
        values = [float(l.split()[1]) for l in out.strip().splitlines()[1:]]
        assert code == 0
        assert next(i for i, v in enumerate(values, 1) if v - 25 <= 1) < 100


class TestTables:
    def test_entry_fee_sets_min_payout(self):
        s = spec_from_dict(dict(prize_pool=1000, top_prize=200, entry_fee=3, winners=50,
                                max_buckets=8))
        assert s.min_payout == 5  # 1.5 * 3 = 4.5 -> 5
        s = spec_from_dict(dict(prize_pool=1000, top_prize=200, entry_fee=10, winners=50,
                                max_buckets=8))
        assert s.min_payout == 15

    def test_missing_fields(self):
        with pytest.raises(ValueError, match="min_payout or entry_fee"):
            spec_from_dict(dict(prize_pool=10))
        with pytest.raises(ValueError, match="missing"):
            spec_from_dict(dict(prize_pool=10, min_payout=1))
        with pytest.raises(ValueError, match="whole number"):
            spec_from_dict(dict(YAHOO_90, prize_pool=90.5))

    def test_load_spec_rejects_arrays(self, tmp_path):
        p = tmp_path / "a.json"
        p.write_text("[1, 2]")
        with pytest.raises(ValueError):
            load_spec(p)

    def test_text_table(self):
        text = structure_to_text(PayoutStructure.from_pairs([(1, 50), (2, 20), (3, 5)]))
        lines = text.splitlines()
        assert lines[2].split() == ["1", "1", "$50", "$50"]
        assert lines[3].split() == ["2-3", "2", "$20", "$40"]
        assert lines[-1].split() == ["total", "6", "$105"]

    def test_csv_rejects_gaps(self):
        with pytest.raises(ValueError):
            structure_from_csv("place_from,place_to,prize\n1,1,10\n3,4,5\n")
        with pytest.raises(ValueError):
            structure_from_csv("a,b,c\n1,1,10\n")


@given(st.lists(st.tuples(st.integers(1, 10**4), st.integers(1, 10**9)), min_size=1, max_size=40))
def test_csv_round_trip(pairs):
    s = PayoutStructure.from_pairs(pairs)
    assert structure_from_csv(structure_to_csv(s)) == s


@given(st.lists(st.tuples(st.integers(1, 10**4), st.integers(1, 10**9)), min_size=1, max_size=40))
def test_text_totals_match(pairs):
    s = PayoutStructure.from_pairs(pairs)
    foot = structure_to_text(s).splitlines()[-1].split()
    assert int(foot[1]) == s.winners
    assert int(foot[-1].lstrip("$").replace(",", "")) == s.total
