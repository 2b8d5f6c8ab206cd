import random

import pytest
from hypothesis import given, settings, strategies as st

from braidcover.records import (
    FLAG_FIELDS,
    OutputRecord,
    RecordError,
    parse,
    serialize,
)
from braidcover.perm import Permutation, format_perm


def random_record(rng):
    n = rng.randint(1, 9)
    perms = [format_perm(Permutation(tuple(rng.sample(range(1, n + 1), n)))) for _ in range(5)]
    flags = {}
    for k, typ in FLAG_FIELDS.items():
        if rng.random() < 0.5:
            flags[k] = rng.random() < 0.5 if typ is bool else rng.randint(-5, 400000)
    return OutputRecord(n, *perms, flags=flags)


@pytest.mark.parametrize("fmt", ["jsonl", "csv"])
def test_round_trip_1000_random(fmt):
    rng = random.Random(1000)
    for _ in range(1000):
        rec = random_record(rng)
        back = parse(serialize(rec, fmt), fmt)
        assert back == [rec]


@settings(max_examples=200)
@given(st.integers(0, 2**32))
def test_round_trip_sniffed_format(seed):
    rec = random_record(random.Random(seed))
    for fmt in ("jsonl", "csv"):
        assert parse(serialize(rec, fmt)) == [rec]


def test_rep_round_trip(fixed_runs):
    for rep in fixed_runs[4].solutions:
        assert OutputRecord.from_rep(rep).to_rep() == rep


def test_summary_lines_skipped():
    text = (
        '{"schema_version":"1","degree":2,"sigma":"[2,1]","a1":"[1,2]","a2":"[1,2]","b1":"[1,2]","b2":"[2,1]"}\n'
        '{"summary":true,"total_count":1}\n'
    )
    assert len(parse(text)) == 1
    csv_text = "schema_version,degree,sigma,a1,a2,b1,b2\n1,2,\"[2,1]\",\"[1,2]\",\"[1,2]\",\"[1,2]\",\"[2,1]\"\n# total_count=1\n"
    assert len(parse(csv_text)) == 1


@pytest.mark.parametrize(
    "line, message",
    [
        ('{"schema_version":"1","degree":2,"sigma":"[2,2]","a1":"[1,2]","a2":"[1,2]","b1":"[1,2]","b2":"[1,2]"}', "bijection"),
        ('{"schema_version":"1","degree":3,"sigma":"[2,1]","a1":"[1,2]","a2":"[1,2]","b1":"[1,2]","b2":"[1,2]"}', "degree"),
        ('{"schema_version":"1","degree":2,"sigma":"[2,1]"}', "missing"),
        ('{"schema_version":"9","degree":2}', "schema_version"),
        ("{oops", "JSON"),
    ],
)
def test_parse_errors_carry_line_numbers(line, message):
    good = '{"schema_version":"1","degree":2,"sigma":"[2,1]","a1":"[1,2]","a2":"[1,2]","b1":"[1,2]","b2":"[1,2]"}\n'
    with pytest.raises(RecordError, match=message) as info:
        parse(good + line + "\n")
    assert info.value.lineno == 2


def test_empty_input():
    assert parse("") == []
    assert parse("\n\n") == []
