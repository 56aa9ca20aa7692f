"""Tests for generators module."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from packcover.errors import InvalidParameter
from packcover.generators import (
    MODELS,
    UNIFORM,
    element_names,
    matroid_catalog,
    pair_catalog,
    random_matroid,
    random_pair,
    random_pairtree,
)
from packcover.matroid import check_axioms


def test_element_names():
    """Test e comes first and e is not reused."""
    assert element_names(0) == ()
    assert element_names(4) == ("e", "a", "b", "c")
    assert element_names(6)[-1] == "f"
    with pytest.raises(InvalidParameter):
        element_names(-1)


@pytest.mark.parametrize("model", MODELS)
def test_random_matroid_is_deterministic(model):
    """Test the same seed gives the same matroid."""
    assert random_matroid(42, 5, model) == random_matroid(42, 5, model)
    assert check_axioms(random_matroid(42, 5, model)) is None


def test_random_matroid_checks_arguments(monkeypatch):
    """Test unknown models, mismatched grounds and oversized grounds."""
    with pytest.raises(InvalidParameter, match="Unknown model"):
        random_matroid(0, 3, "matching")
    with pytest.raises(InvalidParameter, match="does not have"):
        random_matroid(0, 3, UNIFORM, ("x", "y"))
    monkeypatch.setenv("PC_MAX_GROUND", "4")
    with pytest.raises(InvalidParameter, match="out of range"):
        random_matroid(0, 5)


def test_random_pair_is_deterministic():
    """Test pairs depend only on the seed and size."""
    assert random_pair(3, 4) == random_pair(3, 4)
    assert random_pair(3, 4).ground == element_names(4)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 4), st.integers(3, 4))
def test_random_pairtree_shape(seed, nodes, max_node_ground):
    """Test node count, grounds and non-degenerate dummy edges."""
    pairtree = random_pairtree(seed, nodes, max_node_ground)
    assert pairtree.root == "t0"
    assert len(pairtree.nodes) == nodes
    assert "e" in pairtree.ground
    for t in pairtree.nodes:
        for side in (pairtree.M, pairtree.N):
            matroid = side.matroid(t)
            assert len(matroid.ground) <= max_node_ground
            for d in side.dummies & set(matroid.ground):
                assert not matroid.is_loop(d)
                assert not matroid.is_coloop(d)


def test_random_pairtree_is_deterministic():
    """Test the same seed gives the same pair-tree."""
    assert random_pairtree(9, 3) == random_pairtree(9, 3)


def test_random_pairtree_checks_arguments():
    """Test impossible shapes are rejected."""
    with pytest.raises(InvalidParameter, match="at least one node"):
        random_pairtree(0, 0)
    with pytest.raises(InvalidParameter, match="at least two elements"):
        random_pairtree(0, 2, 1)
    with pytest.raises(InvalidParameter, match="Cannot fit"):
        random_pairtree(0, 3, 2)


@pytest.mark.parametrize("n,count", [(0, 1), (1, 2), (2, 5), (3, 16), (4, 68)])
def test_catalog_counts(n, count):
    """Test the number of labelled matroids on n elements."""
    assert len(matroid_catalog(n)) == count


@pytest.mark.slow
def test_catalog_five():
    """Test the 406 labelled matroids on five elements."""
    assert len(matroid_catalog(5)) == 406


def test_catalog_entries_distinct():
    """Test no matroid is listed twice."""
    catalog = matroid_catalog(3)
    assert len({m.fingerprint() for m in catalog}) == len(catalog)


def test_catalog_bounds():
    """Test the catalog stops at five elements."""
    with pytest.raises(InvalidParameter):
        matroid_catalog(6)


def test_pair_catalog():
    """Test every ordered pair is listed."""
    assert len(list(pair_catalog(2))) == 25
