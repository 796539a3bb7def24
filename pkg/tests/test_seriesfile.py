"""Coefficient-file format: exact round trip, canonical writing, error reporting."""

import random

import pytest

from cartanq.errors import CoefficientFileError
from cartanq.seriesfile import dumps, loads, read_series, write_series
from cartanq.series import TruncatedSeries
from conftest import random_series


def test_round_trip_random(tmp_path):
    rng = random.Random(7)
    for _ in range(20):
        s = random_series(rng, 12)
        path = tmp_path / "s.coeffs"
        write_series(path, s)
        assert read_series(path) == s


def test_written_files_are_sorted():
    s = TruncatedSeries(4, {(2, 0): 1, (0, 0): 3, (1, 1): 2})
    lines = dumps(s).splitlines()
    assert lines[0] == "order 4"
    assert lines[1].startswith("0 0")
    # degree-2 block in lexicographic order of (k, l)
    assert lines[2].startswith("1 1") and lines[3].startswith("2 0")


def test_unsorted_read_accepted():
    text = "order 4\n2 0 1/1 0/1\n0 0 3/1 0/1\n"
    s = loads(text)
    assert s.coeff(2, 0).re == 1 and s.coeff(0, 0).re == 3


def test_degree_exceeds_order():
    with pytest.raises(CoefficientFileError) as err:
        loads("order 4\n5 0 1/1 0/1\n")
    assert err.value.lineno == 2


def test_duplicate_pair():
    with pytest.raises(CoefficientFileError) as err:
        loads("order 4\n1 1 1/1 0/1\n1 1 2/1 0/1\n")
    assert err.value.lineno == 3


def test_malformed_header_and_lines():
    with pytest.raises(CoefficientFileError):
        loads("")
    with pytest.raises(CoefficientFileError):
        loads("order x\n")
    with pytest.raises(CoefficientFileError) as err:
        loads("order 4\n1 1 1/0 0/1\n")
    assert err.value.lineno == 2
    with pytest.raises(CoefficientFileError):
        loads("order 4\n1 1 1/1\n")


def test_no_float_in_round_trip():
    text = dumps(TruncatedSeries(2, {(1, 1): 1}))
    assert "." not in text and "e" not in text.replace("order", "")
