import math
import random

import pytest

from braidcover.classify import (
    ClassificationError,
    TableRow,
    classify,
    render_table,
    surface_report,
    table_report,
)
from braidcover.enumerator import MonodromyRep
from braidcover.perm import Permutation, from_cycles, identity, symmetric_group


@pytest.fixture(scope="module")
def classes(fixed_runs, full_runs):
    out = {n: classify(full_runs[n].solutions) for n in (2, 3, 4)}
    out[6] = classify(fixed_runs[6].solutions)
    return out


def test_n2_sixteen_singletons(classes):
    assert len(classes[2]) == 16
    assert all(c.orbit_size == 1 and c.stabilizer_order == 2 for c in classes[2])


def test_n3_forty_orbits_of_six(classes):
    assert len(classes[3]) == 40
    assert all(c.orbit_size == 6 and c.stabilizer_order == 1 for c in classes[3])


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_orbit_stabilizer_and_partition(classes, full_runs, fixed_runs, n):
    total = full_runs[n].total_count if n in full_runs else fixed_runs[n].total_count
    assert sum(c.orbit_size for c in classes[n]) == total
    for c in classes[n]:
        assert c.orbit_size * c.stabilizer_order == math.factorial(n)


def test_orbits_disjoint_and_cover(classes, full_runs):
    for n in (2, 3, 4):
        seen = set()
        for c in classes[n]:
            members = set(c.member_digests)
            assert len(members) == c.orbit_size
            assert not members & seen
            seen |= members
        assert seen == {r.serialized() for r in full_runs[n].solutions}


def test_stabilizers_measured(classes):
    # not implied by the k*m factorisation in the count table; recorded as measured
    assert {c.stabilizer_order for c in classes[4]} == {2}
    assert len(classes[4]) == 240
    assert {c.stabilizer_order for c in classes[6]} == {1}
    assert len(classes[6]) == 60


def test_representative_is_orbit_minimum(classes):
    for n in (2, 3, 4):
        for c in classes[n]:
            assert c.representative.key() == min(_parse(d).key() for d in c.member_digests)


def _parse(serialized):
    from braidcover.perm import parse_perm

    deg, *perms = serialized.split()
    return MonodromyRep(int(deg), *(parse_perm(p) for p in perms))


def test_canonical_stable_under_input_order(full_runs, classes):
    sols = list(full_runs[3].solutions)
    random.Random(5).shuffle(sols)
    again = classify(sols)
    assert [c.representative for c in again] == [c.representative for c in classes[3]]


@pytest.mark.parametrize("n", [3, 4, 6])
def test_fixed_sigma_methods_agree(fixed_runs, full_runs, n):
    closure = classify(fixed_runs[n].solutions, method="closure")
    quotient = classify(fixed_runs[n].solutions, method="centralizer")
    assert [(c.representative, c.orbit_size) for c in closure] == [
        (c.representative, c.orbit_size) for c in quotient
    ]
    if n in full_runs:
        direct = classify(full_runs[n].solutions)
        assert [c.representative for c in direct] == [c.representative for c in closure]


def test_single_orbit(fixed_runs):
    rep = fixed_runs[3].solutions[0]
    orbit = {rep.conjugated(g) for g in symmetric_group(3)}
    got = classify(orbit)
    assert len(got) == 1 and got[0].orbit_size == 6


def test_not_closed_detected(full_runs):
    sols = list(full_runs[3].solutions)
    with pytest.raises(ClassificationError, match="not closed"):
        classify(sols[:-1])


def test_not_closed_detected_large_degree(fixed_runs):
    sols = list(fixed_runs[6].solutions)
    with pytest.raises(ClassificationError, match="not closed"):
        classify(sols[1:], method="centralizer")


def test_mixed_degrees_rejected(fixed_runs):
    with pytest.raises(ClassificationError, match="mixed"):
        classify(fixed_runs[2].solutions + fixed_runs[3].solutions)


def test_empty_input():
    assert classify([]) == []


def test_fixed_sigma_input_with_other_transposition(full_runs, classes):
    sigma = from_cycles(4, (2, 3))
    slice_ = [r for r in full_runs[4].solutions if r.sigma == sigma]
    got = classify(slice_)
    assert [c.representative for c in got] == [c.representative for c in classes[4]]


def test_surface_reports(classes):
    for c in classes[2]:
        sr = surface_report(c)
        assert (sr.chi, sr.k_squared, sr.galois, sr.image_order) == (1, 8, True, 2)
    for c in classes[3]:
        sr = surface_report(c)
        assert (sr.chi, sr.k_squared, sr.galois, sr.image_order) == (1, 7, False, 6)
        assert sr.image_transitive and sr.general_type_claimed
    for n in (4, 6):
        for c in classes[n]:
            sr = surface_report(c)
            assert sr.k_squared == 10 - n
            assert sr.galois == (sr.image_transitive and sr.image_order == n)
            assert not sr.galois


def test_general_type_range():
    from braidcover.classify import ConjugacyClassRecord

    n = 10
    cyc = Permutation(tuple(list(range(2, n + 1)) + [1]))
    e = identity(n)
    rec = ConjugacyClassRecord(MonodromyRep(n, from_cycles(n, (1, 2)), cyc, e, e, e), 1, 1)
    sr = surface_report(rec)
    assert not sr.general_type_claimed
    assert sr.k_squared == 0


def test_table_report():
    rows = table_report(5)
    assert [(r.degree, r.total, r.classes, r.k_squared) for r in rows] == [
        (2, 16, 16, 8), (3, 240, 40, 7), (4, 2880, 240, 6), (5, 0, 0, 5)
    ]
    assert [r.factored() for r in rows] == ["16", "3·80", "6·480", "0"]
    text = render_table(rows)
    assert "3·80" in text and "6·480" in text


def test_factored_rendering():
    assert TableRow(6, 43200, 2880, 60, 4).factored() == "15·2880"
    assert TableRow(8, 4838400, 172800, 0, 2).factored() == "28·172800"
