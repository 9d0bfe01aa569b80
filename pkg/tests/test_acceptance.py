"""Exit-criteria runs at full size.

Each test prints one ``PASS``/``FAIL`` line for its criterion.  The whole
module takes roughly half an hour on one core; deselect it with
``-m "not acceptance"`` for a quick unit run.
"""

import subprocess
import sys
import time
from pathlib import Path

import pytest

from toptree.bench import bench, compare_strategies
from toptree.fuzz import fuzz
from toptree.mst import mst_demo

pytestmark = pytest.mark.acceptance

MST_SEEDS = range(50)
FUZZ_SEEDS = range(20)
STRATEGIES = ("full", "semi")
DEPTH_SITES = ("full_splay.depth", "semi_splay.depth")
POTENTIAL_SITES = ("semi_splay.potential", "full_splay.potential", "link.potential", "delete_all_ancestors.potential")


def report_line(capsys, number, ok, detail):
    with capsys.disabled():
        print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'} {detail}")


@pytest.fixture(scope="module")
def fuzz_runs():
    """Criterion-2 workloads for both strategies, with the potential ledger on."""
    runs = {}
    for strategy in STRATEGIES:
        for seed in FUZZ_SEEDS:
            start = time.perf_counter()
            report = fuzz(seed, 128, 100_000, validate_every=500, strategy=strategy, ledger=True, minimize=False)
            runs[strategy, seed] = (report, time.perf_counter() - start)
    return runs


@pytest.fixture(scope="module")
def mst_runs():
    runs = {}
    for strategy in STRATEGIES:
        for seed in MST_SEEDS:
            start = time.perf_counter()
            result = mst_demo(seed, 256, 4096, strategy=strategy)
            runs[strategy, seed] = (result, time.perf_counter() - start)
    return runs


def _mst_ok(runs, strategy):
    bad = [s for (st, s), (r, dt) in runs.items() if st == strategy and not (r.ok and dt < 5.0)]
    slowest = max(dt for (st, _), (_, dt) in runs.items() if st == strategy)
    return not bad, bad, slowest


def _fuzz_ok(runs, strategy):
    bad = []
    for (st, seed), (r, dt) in runs.items():
        if st == strategy and not (r.mismatches == 0 and r.violations == 0 and not r.crashed and dt < 60.0):
            bad.append(seed)
    slowest = max(dt for (st, _), (_, dt) in runs.items() if st == strategy)
    return not bad, bad, slowest


def test_criterion_1_mst_equivalence(mst_runs, capsys):
    ok, bad, slowest = _mst_ok(mst_runs, "full")
    report_line(capsys, 1, ok, f"mst 256/4096, {len(MST_SEEDS)} seeds, failing seeds {bad}, slowest {slowest:.2f}s")
    assert ok


def test_criterion_2_oracle_fuzz(fuzz_runs, capsys):
    ok, bad, slowest = _fuzz_ok(fuzz_runs, "full")
    queries = sum(r.queries for (st, _), (r, _) in fuzz_runs.items() if st == "full")
    report_line(capsys, 2, ok, f"fuzz 128/100000/500, {len(FUZZ_SEEDS)} seeds, {queries} queries, "
                               f"failing seeds {bad}, slowest {slowest:.1f}s")
    assert ok


def test_criterion_3_depth_lemmas(fuzz_runs, capsys):
    checks = sum(r.lemma_checks[site] for r, _ in fuzz_runs.values() for site in DEPTH_SITES)
    broken = [v for r, _ in fuzz_runs.values() for v in r.lemma_violations if v.split()[0].startswith(DEPTH_SITES)]
    deepest = max(r.max_full_splay_depth for r, _ in fuzz_runs.values())
    ok = not broken and checks > 0 and all(r.lemma_checks["full_splay.depth"] for r, _ in fuzz_runs.values())
    report_line(capsys, 3, ok, f"{checks} splay depth checks, {len(broken)} violations, deepest full_splay result {deepest}")
    assert ok, broken[:5]


def test_criterion_4_potential_lemmas(fuzz_runs, capsys):
    checks = {site: sum(r.lemma_checks[site] for r, _ in fuzz_runs.values()) for site in POTENTIAL_SITES}
    broken = [v for r, _ in fuzz_runs.values() for v in r.lemma_violations]
    ok = not broken and all(checks.values())
    report_line(capsys, 4, ok, f"potential checks {checks}, {len(broken)} violations")
    assert ok, broken[:5]


def test_criterion_5_amortization_slope(capsys):
    result = bench([2**k for k in range(6, 13)], 100_000, "full", seed=0)
    ok = result.spread < 3 and not result.violations
    with capsys.disabled():
        print("\n" + result.table())
    report_line(capsys, 5, ok, f"work/op/lg n spread {result.spread:.3f} (limit 3), {len(result.violations)} lemma violations")
    assert ok


def test_criterion_6_semi_strategy(mst_runs, fuzz_runs, capsys):
    mst_ok, mst_bad, _ = _mst_ok(mst_runs, "semi")
    fuzz_ok, fuzz_bad, slowest = _fuzz_ok(fuzz_runs, "semi")
    cmp = compare_strategies(1, 128, 100_000)
    ok = mst_ok and fuzz_ok and cmp.fraction >= 0.8
    report_line(capsys, 6, ok, f"semi: mst failing {mst_bad}, fuzz failing {fuzz_bad} (slowest {slowest:.1f}s), "
                               f"rotations not worse than full on {cmp.fraction:.3f} of {cmp.exposes} exposes")
    assert ok


def test_criterion_7_rotation_validity(capsys):
    # each criterion-2 seed is replayed once in debug mode, alternating the strategy
    checks = 0
    bad = []
    for seed in FUZZ_SEEDS:
        strategy = STRATEGIES[seed >= len(FUZZ_SEEDS) // 2]
        report = fuzz(seed, 128, 100_000, validate_every=500, strategy=strategy, ledger=False, debug=True, minimize=False)
        if not report.ok:
            bad.append((strategy, seed))
        checks += report.rotations
    ok = not bad and checks > 0
    report_line(capsys, 7, ok, f"{checks} rotations brute-force checked over {len(FUZZ_SEEDS)} seeds, failing {bad}")
    assert ok


def test_criterion_8_unit_examples(capsys):
    tests = Path(__file__).parent
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", "-m", "not acceptance", str(tests)],
        capture_output=True,
        text=True,
        cwd=tests.parent,
    )
    last = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr.strip()
    ok = proc.returncode == 0
    report_line(capsys, 8, ok, f"unit suite: {last}")
    assert ok, proc.stdout[-3000:]

