from math import comb

import pytest
from hypothesis import given, strategies as st

from multiport_ghz.fock import (
    InternalAssignment,
    InternalLabel,
    OutputPattern,
    PhotonFactor,
    count_assignments,
    enumerate_assignments,
    enumerate_patterns,
)


def test_photon_factor_normalization():
    PhotonFactor(1, 2**-0.5, 1j * 2**-0.5)
    with pytest.raises(ValueError):
        PhotonFactor(1, 1, 1)
    with pytest.raises(ValueError):
        PhotonFactor(0, 1, 0)


def test_patterns_2_2():
    assert [p.counts for p in enumerate_patterns(2, 2)] == [(2, 0), (1, 1), (0, 2)]


def test_patterns_zero_photons():
    assert [p.counts for p in enumerate_patterns(0, 3)] == [(0, 0, 0)]


@pytest.mark.parametrize("n", range(1, 9))
def test_pattern_count_stars_and_bars(n):
    patterns = [p.counts for p in enumerate_patterns(n, n)]
    assert len(patterns) == comb(2 * n - 1, n)
    assert len(set(patterns)) == len(patterns)
    assert all(sum(p) == n for p in patterns)


def test_patterns_deterministic():
    assert list(enumerate_patterns(4, 3)) == list(enumerate_patterns(4, 3))


def test_assignments_two_modes():
    strings = [a.label_string() for a in enumerate_assignments(OutputPattern((1, 1)))]
    assert strings == ["mm", "mh", "hm", "hh"]


def test_assignments_bunched():
    got = [(a.mu, a.eta) for a in enumerate_assignments(OutputPattern((2, 0)))]
    assert got == [((2, 0), (0, 0)), ((1, 0), (1, 0)), ((0, 0), (2, 0))]


def test_assignments_all_ones_are_strings():
    strings = {a.label_string() for a in enumerate_assignments(OutputPattern((1, 1, 1)))}
    assert len(strings) == 8
    assert all(set(s) <= {"m", "h"} and len(s) == 3 for s in strings)


@given(st.lists(st.integers(0, 4), min_size=1, max_size=5))
def test_assignment_count_property(counts):
    pattern = OutputPattern(tuple(counts))
    assignments = list(enumerate_assignments(pattern))
    assert len(assignments) == count_assignments(pattern)
    assert len(set(assignments)) == len(assignments)
    for a in assignments:
        assert a.pattern == pattern


def test_from_labels_and_uniform():
    p = OutputPattern((1, 0, 1))
    a = InternalAssignment.from_labels(p, [InternalLabel.MU, InternalLabel.ETA])
    assert a.mu == (1, 0, 0) and a.eta == (0, 0, 1)
    assert InternalAssignment.uniform(p, InternalLabel.ETA).label_string() == "hh"
    with pytest.raises(ValueError):
        InternalAssignment.from_labels(OutputPattern((2, 0)), [InternalLabel.MU])


def test_multi_occupancy_rendering():
    a = InternalAssignment((1, 0), (1, 0))
    assert a.label_string() == "1m1h,0m0h"


def test_output_modes_multiset():
    assert OutputPattern((2, 0, 1)).output_modes() == [1, 1, 3]
