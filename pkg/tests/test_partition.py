"""Tests for partition module."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from packcover.errors import InvalidParameter
from packcover.generators import random_pair
from packcover.matroid import MatroidPair, make_uniform
from packcover.partition import (
    PCPartition,
    dual_partition,
    solve_packing_covering,
    verify_partition,
    wave_or_cohindrance,
)
from packcover.waves import Cowave, Wave


def _pair(rank, ground):
    m = make_uniform(rank, ground)
    return MatroidPair(m, m)


def test_parallel_pair_is_all_packed():
    """Test two parallel elements form the packable part."""
    partition = solve_packing_covering(_pair(1, ["e", "f"]))
    assert partition.P == {"e", "f"}
    assert partition.Q == frozenset()
    assert partition.covering == (frozenset(), frozenset())


def test_coloop_pair_is_all_covered():
    """Test a coloop in both matroids is covered, not packed."""
    pair = _pair(1, ["e"])
    partition = solve_packing_covering(pair)
    assert partition.P == frozenset()
    assert partition.Q == {"e"}
    assert partition.I_M | partition.I_N == {"e"}
    assert verify_partition(pair, partition)


def test_verify_partition_reasons():
    """Test the reason codes of broken partitions."""
    pair = _pair(1, ["e"])
    none = (frozenset(), frozenset())
    missing = PCPartition(frozenset(), frozenset(), Wave(), none)
    assert verify_partition(pair, missing).reason == "not-a-partition"
    bad_cover = PCPartition(frozenset(), frozenset({"e"}), Wave(), none)
    assert verify_partition(pair, bad_cover).reason == "covering-not-on-Q"
    bad_pack = PCPartition(frozenset({"e"}), frozenset(), Wave({"e"}), none)
    assert verify_partition(pair, bad_pack).reason == "packing-M-side-not-spanning"


def test_dual_partition_swaps_parts():
    """Test the dual pair gets Q as its packable part."""
    pair = _pair(1, ["e"])
    swapped = dual_partition(pair, solve_packing_covering(pair))
    assert swapped.P == {"e"}
    assert swapped.Q == frozenset()
    assert verify_partition(pair.dual(), swapped)


def test_dual_partition_rejects_invalid():
    """Test only valid partitions are dualised."""
    pair = _pair(1, ["e"])
    with pytest.raises(InvalidParameter):
        dual_partition(pair, PCPartition(frozenset(), frozenset(), Wave(), ((), ())))


def test_wave_or_cohindrance():
    """Test a loop lies in a wave and a coloop has a cohindrance."""
    assert isinstance(wave_or_cohindrance(_pair(0, ["e"]), "e"), Wave)
    found = wave_or_cohindrance(_pair(1, ["e"]), "e")
    assert isinstance(found, Cowave)
    assert found.X == {"e"}


def test_partition_to_dict():
    """Test the partition serializes with sorted lists."""
    data = solve_packing_covering(_pair(1, ["f", "e"])).to_dict()
    assert data["P"] == ["e", "f"]
    assert data["covering"] == {"I_M": [], "I_N": []}


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 4))
def test_random_pairs_partition(seed, n):
    """Test every random pair splits and the split dualises."""
    pair = random_pair(seed, n)
    partition = solve_packing_covering(pair)
    assert verify_partition(pair, partition)
    assert dual_partition(pair, partition).P == partition.Q
