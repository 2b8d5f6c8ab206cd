"""Exit criteria for the build.  Run with ``pytest tests/test_acceptance.py``;
the terminal summary lists one PASS/FAIL line per criterion.

Criterion 2 (degrees 8 and 9, multi-minute to multi-hour) runs only when
``BRAIDCOVER_EXTENDED=1`` is set.
"""

import math
import os
import random
import time

import pytest

from braidcover.classify import classify, surface_report
from braidcover.enumerator import (
    SearchConfig,
    enumerate_reps,
    partition_plan,
    resume,
    transposition_count,
    verify,
)
from braidcover.perm import Permutation, format_perm, symmetric_group
from braidcover.records import FLAG_FIELDS, OutputRecord, parse, serialize

EXTENDED = os.environ.get("BRAIDCOVER_EXTENDED") == "1"

TABLE = {2: 16, 3: 3 * 80, 4: 6 * 480, 5: 0, 6: 15 * 2880, 7: 0, 8: 28 * 172800, 9: 0}
# seconds, per degree
TIME_BUDGET = {2: 1.0, 3: 1.0, 4: 1.0, 5: 300.0, 6: 300.0, 7: 1800.0}


def keyset(reps):
    return sorted(r.key() for r in reps)


@pytest.fixture(scope="module")
def classified(full_runs):
    return {n: classify(full_runs[n].solutions) for n in (2, 3, 4)}


C1 = "exact totals 16, 240, 2880, 0, 43200, 0 for n = 2..7 within the time budgets"


@pytest.mark.acceptance("1", C1)
@pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 7])
def test_c1_exact_counts(n):
    t0 = time.perf_counter()
    res = enumerate_reps(SearchConfig(n, collect=False))
    elapsed = time.perf_counter() - t0
    assert res.complete
    assert res.total_count == TABLE[n]
    assert elapsed < TIME_BUDGET[n], f"n={n} took {elapsed:.2f}s"


C2 = "extended: n = 8 gives 4838400 and n = 9 gives 0, each interrupted and resumed from a checkpoint"


@pytest.mark.acceptance("2", C2)
@pytest.mark.skipif(not EXTENDED, reason="set BRAIDCOVER_EXTENDED=1 for the n = 8, 9 runs")
@pytest.mark.parametrize("n", [8, 9])
def test_c2_extended(tmp_path, n):
    cp = tmp_path / f"n{n}.ckpt"
    half = len(partition_plan(n, True)) // 2
    first = enumerate_reps(SearchConfig(n, stop_after_partitions=half, collect=False), checkpoint=cp)
    assert not first.complete
    second = resume(cp, collect=False)
    assert second.complete
    assert second.total_count == TABLE[n]
    assert second.fixed_sigma_count * transposition_count(n) == TABLE[n]


C3 = "16 classes at n = 2, 40 classes at n = 3, every n = 3 orbit of size 6"


@pytest.mark.acceptance("3", C3)
def test_c3_class_counts(classified):
    assert len(classified[2]) == 16
    assert len(classified[3]) == 40
    assert all(c.orbit_size == 6 for c in classified[3])


C4 = "pruned enumerator and brute-force oracle give the same solution set for n = 1, 2, 3"


@pytest.mark.acceptance("4", C4)
@pytest.mark.parametrize("n", [1, 2, 3])
def test_c4_oracle_equivalence(full_runs, oracle_runs, n):
    assert keyset(full_runs[n].solutions) == keyset(oracle_runs[n].solutions)


C5 = "total = fixed-sigma count x n(n-1)/2 for n = 2, 3, 4 (3·80, 6·480)"


@pytest.mark.acceptance("5", C5)
@pytest.mark.parametrize("n, left, right", [(2, 1, 16), (3, 3, 80), (4, 6, 480)])
def test_c5_scaling_law(fixed_runs, full_runs, n, left, right):
    assert transposition_count(n) == left
    assert fixed_runs[n].fixed_sigma_count == right
    assert full_runs[n].total_count == fixed_runs[n].fixed_sigma_count * left == left * right


C6 = "all 16 n = 2 classes Galois; all 40 n = 3 classes non-Galois with image order 6"


@pytest.mark.acceptance("6", C6)
def test_c6_galois(classified):
    reports2 = [surface_report(c) for c in classified[2]]
    assert len(reports2) == 16 and all(r.galois for r in reports2)
    reports3 = [surface_report(c) for c in classified[3]]
    assert len(reports3) == 40
    assert all(not r.galois and r.image_order == 6 for r in reports3)


C7 = "every class reports chi = 1 and K^2 = 10 - n (8 at n = 2, 7 at n = 3)"


@pytest.mark.acceptance("7", C7)
def test_c7_invariants(classified, fixed_runs):
    pools = dict(classified)
    pools[6] = classify(fixed_runs[6].solutions)
    for n, classes in pools.items():
        for c in classes:
            r = surface_report(c)
            assert r.chi == 1 and r.k_squared == 10 - n
    assert {surface_report(c).k_squared for c in classified[2]} == {8}
    assert {surface_report(c).k_squared for c in classified[3]} == {7}


C8 = ("property suites: re-verification of all emitted solutions, conjugation stability,"
      " orbit-stabilizer at n <= 4, 1000-record serialization round trip")


@pytest.mark.acceptance("8", C8)
def test_c8_reverification(fixed_runs, full_runs):
    failures = [r.serialized() for n in (2, 3, 4, 5, 6) for r in fixed_runs[n].solutions if not verify(r).passed]
    failures += [r.serialized() for n in (2, 3, 4) for r in full_runs[n].solutions if not verify(r).passed]
    assert failures == []


@pytest.mark.acceptance("8", C8)
def test_c8_conjugation_stability(full_runs):
    for n in (2, 3):
        group = symmetric_group(n)
        for rep in full_runs[n].solutions:
            assert all(verify(rep.conjugated(g)).passed for g in group)
    rng = random.Random(48)
    group4 = symmetric_group(4)
    for rep in rng.sample(full_runs[4].solutions, 200):
        for g in rng.sample(group4, 6):
            assert verify(rep.conjugated(g)).passed


@pytest.mark.acceptance("8", C8)
def test_c8_orbit_stabilizer(classified):
    for n, classes in classified.items():
        for c in classes:
            assert c.orbit_size * c.stabilizer_order == math.factorial(n)


@pytest.mark.acceptance("8", C8)
def test_c8_round_trip():
    rng = random.Random(8)
    for i in range(1000):
        n = rng.randint(1, 9)
        perms = [format_perm(Permutation(tuple(rng.sample(range(1, n + 1), n)))) for _ in range(5)]
        flags = {k: (rng.random() < 0.5 if t is bool else rng.randint(0, 10**6))
                 for k, t in FLAG_FIELDS.items() if rng.random() < 0.5}
        rec = OutputRecord(n, *perms, flags=flags)
        fmt = "jsonl" if i % 2 else "csv"
        assert parse(serialize(rec, fmt), fmt) == [rec]
