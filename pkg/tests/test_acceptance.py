"""Acceptance criteria 1-10 at their stated sizes and time limits.

Each test prints one ``PASS criterion N`` or ``FAIL criterion N`` line
before asserting. Run with ``pytest tests/test_acceptance.py -v`` (the
lines are written past pytest's capture) or ``python3 tests/test_acceptance.py``.
"""

import sys

import pytest

from factorcenter import acceptance as acc

ACCEPTANCE = pytest.mark.acceptance


@pytest.fixture
def report(capsys):
    def emit(n, checks, res):
        ok = all(checks.values())
        failed = [k for k, v in checks.items() if not v]
        line = f"{'PASS' if ok else 'FAIL'} criterion {n} ({res['seconds']:.1f}s)"
        if failed:
            line += " failed: " + ", ".join(failed)
        with capsys.disabled():
            print("\n" + line)
        return ok, failed
    return emit


def check(report, n, checks, res):
    ok, failed = report(n, checks, res)
    assert ok, f"criterion {n}: {failed}"


@ACCEPTANCE
def test_criterion_1_small_sets_have_no_gassmann_pairs(report):
    res = acc.criterion_1()
    s5 = [r for r in res["rows"] if r["ambient"] == "S5"]
    s6 = [r for r in res["rows"] if r["ambient"] == "S6"]
    check(report, 1, {
        "all 19 subgroup classes of Sym(5)": len(s5) == 19,
        "all 16 transitive classes of Sym(6)": len(s6) == 16,
        "zero pairs": sum(r["pairs"] for r in res["rows"]) == 0,
        "under 5 min": res["seconds"] < 300,
    }, res)


@ACCEPTANCE
def test_criterion_2_klein_four_pair(report):
    res = acc.criterion_2()
    check(report, 2, {
        "exactly one pair": res["pairs"] == 1,
        "shapes 2+2+2 vs 4+1+1": res["orbit_shapes"] == [[[2, 2, 2], [4, 1, 1]]],
        "equivalent, non-isomorphic": res["passed"],
        "under 1 s": res["seconds"] < 1,
    }, res)


@ACCEPTANCE
def test_criterion_3_order_seven_uniqueness(report):
    res = acc.criterion_3()
    hits = [r for r in res["rows"] if r["pairs"]]
    check(report, 3, {
        "7 transitive classes": res["transitive_groups"] == 7,
        "one pair overall": sum(r["pairs"] for r in res["rows"]) == 1,
        "in the order-168 group": [r["order"] for r in hits] == [168],
        "degree 7": hits and hits[0]["degrees"] == [7],
        "under 10 min": res["seconds"] < 600,
    }, res)


@ACCEPTANCE
def test_criterion_4_cyclic_groups(report):
    res = acc.criterion_4(trials=200, seed=0)
    check(report, 4, {
        "200 trials": res["trials"] == 200,
        "gassmann pairs exercised": res["gassmann_pairs_sampled"] > 0,
        "no non-isomorphic gassmann pair": res["violations"] == 0,
        "search finds none": res["search_pairs"] == 0,
        "under 1 min": res["seconds"] < 60,
    }, res)


@ACCEPTANCE
def test_criterion_5_lattice_lists(report):
    res = acc.criterion_5()
    pairs = {(r["r"], r["j"]) for r in res["rows"]}
    expected_pairs = {(r, j) for r in range(7) for j in range(1, 9 - r)}
    check(report, 5, {
        "every (d, j) covered": pairs == expected_pairs,
        "families match solver and wide scan": all(r["matches"] for r in res["rows"]),
        "trivial counts": res["trivial_counts"] == {"dP8": [2, 1], "dP6": [3, 2], "dP5": [5, 5]},
        "(-1)-counts": res["neg_one_counts"] == [0, 1, 3, 6, 10, 16, 27],
        "wide scan agrees": res["neg_one_counts_wide_scan"] == [0, 1, 3, 6, 10, 16, 27],
        "under 1 min": res["seconds"] < 60,
    }, res)


@ACCEPTANCE
def test_criterion_6_duality(report):
    res = acc.criterion_6(samples=100, seed=0)
    check(report, 6, {
        "bijections": res["bijections_ok"],
        "duality on sampled actions": res["duality_checks"] > 0 and res["duality_failures"] == 0,
        "under 1 min": res["seconds"] < 60,
    }, res)


@ACCEPTANCE
def test_criterion_7_delta_table(report):
    res = acc.criterion_7()
    want = {"9<-4->5": 6, "9<-3->9": 6, "8<-4->8": 4, "8<-3->5": 6, "6<-4->6": 3, "6<-3->6": 4,
            "5<-4->9": 2, "5<-3->8": 3}
    got = {r["link"]: r for r in res["rows"]}
    check(report, 7, {
        "rows present": set(got) == set(want),
        "stated delta": all(got[k]["delta"] == v for k, v in want.items() if k in got),
        "component counts": all(r["found_count"] == r["expected_count"] for r in res["rows"]),
        "rows verified": all(r["ok"] for r in res["rows"]),
        "mutants rejected": all(not any(r["mutants_ok"].values()) for r in res["rows"]),
        "under 2 min": res["seconds"] < 120,
    }, res)


@ACCEPTANCE
def test_criterion_8_mu_consistency(report):
    res = acc.criterion_8(assignments=100, seed=0)
    check(report, 8, {
        "link balance": res["mu_checks"] > 0 and res["mu_failures"] == 0,
        "ns_character = mu(A_X)": res["character_checks"] == 500 and res["character_failures"] == 0,
        "trivial Galois constant": res["trivial_galois_constant"],
        "under 2 min": res["seconds"] < 120,
    }, res)


@ACCEPTANCE
def test_criterion_9_loops_have_zero_center(report):
    res = acc.criterion_9(n_loops=10_000, max_len=12, seed=0)
    check(report, 9, {
        "10^4 loops": res["loops"] == 10_000,
        "c = 0 on every loop": res["zero"] == 10_000,
        "every loop returns": res["returned"] == 10_000,
        "dP5 chain c = 0": res["dp5_chain_c_zero"],
        "dP5 chain ledger": res["dp5_chain_ledger"] == "[Z2] - [Z2'] + [Z5] - [Z5']",
        "under 10 min": res["seconds"] < 600,
    }, res)


@ACCEPTANCE
def test_criterion_10_rationality_centers(report):
    res = acc.criterion_10(targets=50, seed=0)
    cubic = res["cubic"]
    check(report, 10, {
        "50 targets agree": res["targets"] == 50 and res["agree"] == 50,
        "center is A_X plus stack": res["matches_virtual_ns"] == 50,
        "dP5 center [Z5]": res["dp5_center_is_Z5"],
        "cubic characters equal": cubic["ns_characters_equal"],
        "cubic centers differ": cubic["centers_differ"],
        "fixed lines 3 vs 5": cubic["fixed_lines"] == [3, 5],
        "under 2 min": res["seconds"] < 120,
    }, res)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
