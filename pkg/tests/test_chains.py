"""Tests for chains module."""

import pytest

from packcover.chains import (
    EVEN,
    ODD,
    ExchangeChain,
    augment_chain,
    find_exchange_chain,
    fundamental_circuit,
    verify_chain,
)
from packcover.errors import InvalidParameter
from packcover.matroid import MatroidPair, make_uniform


@pytest.fixture
def lines():
    """(U_{1,3}, U_{1,3}) on {a, b, z}."""
    m = make_uniform(1, ["a", "b", "z"])
    return MatroidPair(m, m)


def test_fundamental_circuit(lines):
    """Test the circuit of z in {a} + z."""
    m = lines.M
    assert fundamental_circuit(m, m.mask(["a"]), m.bit("z")) == m.mask(["a", "z"])
    assert fundamental_circuit(m, 0, m.bit("z")) is None


def test_even_chain_single_step(lines):
    """Test an even chain starts with an M-circuit."""
    chain = find_exchange_chain(lines, {"a"}, {"b"}, "z", "a", EVEN)
    assert chain.nodes == ("z", "a")
    assert chain.witnesses == (frozenset({"a", "z"}),)
    assert chain.length == 1
    assert verify_chain(lines, {"a"}, {"b"}, chain)


def test_odd_chain_two_steps(lines):
    """Test an odd chain reaches a through the N-independent set."""
    chain = find_exchange_chain(lines, {"a"}, {"b"}, "z", "a", ODD)
    assert chain.nodes == ("z", "b", "a")
    assert verify_chain(lines, {"a"}, {"b"}, chain)


def test_trivial_chain(lines):
    """Test a chain from an element to itself has no steps."""
    chain = find_exchange_chain(lines, {"a"}, {"b"}, "a", "a")
    assert chain.length == 0
    assert chain.start == chain.end == "a"


def test_target_must_be_covered(lines):
    """Test the end of a chain lies in one of the independent sets."""
    with pytest.raises(InvalidParameter, match="neither independent set"):
        find_exchange_chain(lines, {"a"}, {"b"}, "a", "z")


def test_dependent_sets_rejected(lines):
    """Test the sets must be independent."""
    with pytest.raises(InvalidParameter, match="not independent in M"):
        find_exchange_chain(lines, {"a", "b"}, (), "z", "a")


def test_bad_parity(lines):
    """Test the parity is even or odd."""
    with pytest.raises(InvalidParameter, match="Parity"):
        find_exchange_chain(lines, {"a"}, {"b"}, "z", "a", "both")


def test_verify_chain_rejects_wrong_witness(lines):
    """Test a chain with a witness from the wrong matroid step fails."""
    chain = ExchangeChain(("z", "a"), EVEN, (frozenset({"b", "z"}),))
    assert not verify_chain(lines, {"a"}, {"b"}, chain)
    assert not verify_chain(lines, {"a"}, {"b"}, ExchangeChain(("z", "a"), EVEN))


def test_augment_even_chain(lines):
    """Test running the chain swaps z in for a and keeps the closures."""
    chain = find_exchange_chain(lines, {"a"}, {"b"}, "z", "a", EVEN)
    new_m, new_n = augment_chain(lines, {"a"}, {"b"}, chain)
    assert new_m == {"z"}
    assert new_n == {"b"}
    assert new_m | new_n == {"b", "z"}
    assert lines.M.closure(new_m) == lines.M.closure({"a"})


def test_augment_odd_chain(lines):
    """Test the odd chain moves b to the M-side and z to the N-side."""
    chain = find_exchange_chain(lines, {"a"}, {"b"}, "z", "a", ODD)
    new_m, new_n = augment_chain(lines, {"a"}, {"b"}, chain)
    assert new_m | new_n == {"b", "z"}
    assert lines.M.is_independent(new_m)
    assert lines.N.is_independent(new_n)


def test_augment_rejects_invalid_chain(lines):
    """Test augmenting along a broken chain raises."""
    with pytest.raises(InvalidParameter):
        augment_chain(lines, {"a"}, {"b"}, ExchangeChain(("z", "a"), EVEN))


def test_chain_to_dict(lines):
    """Test the chain serializes with sorted witnesses."""
    chain = find_exchange_chain(lines, {"a"}, {"b"}, "z", "a", EVEN)
    assert chain.to_dict() == {"nodes": ["z", "a"], "parity": "even", "witnesses": [["a", "z"]]}
