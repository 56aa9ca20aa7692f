"""Tests for lemmas module."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from packcover.errors import InvalidParameter
from packcover.generators import random_pair
from packcover.lemmas import (
    verify_chain2,
    verify_chain3,
    verify_intermediate_lemma7,
    verify_lemma17,
    verify_lemma27,
)
from packcover.matroid import MatroidPair, direct_sum, make_free, make_uniform
from packcover.waves import Wave


def _pair(rank, ground):
    m = make_uniform(rank, ground)
    return MatroidPair(m, m)


def test_lemma27_wave_with_e_on_n_side():
    """Test the first outcome on two parallel elements."""
    pair = _pair(1, ["e", "f"])
    outcome = verify_lemma27(pair.M, pair.N, (), (), (), "e")
    assert outcome.case_index == 1
    assert "e" in outcome.witness.S_N
    assert outcome.reverify()
    assert outcome.to_dict()["kind"] == "wave"


def test_lemma27_rejects_overlapping_sets():
    """Test the auxiliary sets must be disjoint and avoid e."""
    pair = _pair(1, ["e", "f", "g"])
    with pytest.raises(InvalidParameter, match="meets"):
        verify_lemma27(pair.M, pair.N, {"f"}, {"f"}, (), "e")
    with pytest.raises(InvalidParameter, match="meets"):
        verify_lemma27(pair.M, pair.N, {"e"}, (), (), "e")


def test_lemma27_needs_matching_grounds():
    """Test M and N share a ground order."""
    with pytest.raises(InvalidParameter, match="same ground"):
        verify_lemma27(make_uniform(1, ["e", "f"]), make_uniform(1, ["f", "e"]), (), (), (), "e")


def test_lemma17_spanning_wave_for_loop():
    """Test a loop is spanned by the empty wave."""
    pair = _pair(0, ["e"])
    outcome = verify_lemma17(pair.M, pair.N, (), (), "e")
    assert outcome.case_index == 1
    assert outcome.witness == Wave()


def test_lemma17_wave_with_circuit():
    """Test the second outcome carries an N-circuit through e."""
    pair = _pair(1, ["e", "f"])
    outcome = verify_lemma17(pair.M, pair.N, (), (), "e")
    assert outcome.case_index == 2
    assert "e" in outcome.witness.S_M
    assert outcome.circuit == {"e", "f"}
    assert outcome.to_dict()["circuit"] == ["e", "f"]


def test_lemma17_circuit_is_a_circuit_of_n():
    """Test a circuit that only appears after contracting J is not accepted."""
    # {e,f} is a circuit of N/j but independent in N
    pair = _pair(2, ["e", "f", "j"])
    outcome = verify_lemma17(pair.M, pair.N, (), ("j",), "e")
    assert outcome.case_index == 3
    assert outcome.circuit == {"e", "f"}
    assert "f" in outcome.witness.S_M


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32), st.integers(2, 4), st.randoms(use_true_random=False))
def test_lemmas_hold_on_random_pairs(seed, n, rng):
    """Test both lemmas find a re-verifying witness."""
    pair = random_pair(seed, n)
    rest = list(pair.ground[1:])
    rng.shuffle(rest)
    H, J = rest[:1], rest[1:2]
    G = rest[2:3]
    assert verify_lemma27(pair.M, pair.N, G, H, J, "e").reverify()
    assert verify_lemma17(pair.M, pair.N, H, J, "e").reverify()


def test_chain2_hindrance_focusing_on_e():
    """Test a loop pair has a hindrance focusing on e."""
    pair = _pair(0, ["e", "f"])
    outcome = verify_chain2(pair, "e", Wave({"e"}))
    assert outcome.case_index == 1
    assert outcome.witness.focus == {"e"}


def test_chain2_hindrance_avoiding_e():
    """Test a coloop e leaves only hindrances avoiding it."""
    m = direct_sum(make_uniform(1, ["e"]), make_uniform(0, ["f"]))
    pair = MatroidPair(m, m)
    outcome = verify_chain2(pair, "e", Wave({"f"}))
    assert outcome.case_index == 2
    assert "e" not in outcome.witness.X


def test_chain2_rejects_non_hindrance():
    """Test the given triple must be a hindrance."""
    with pytest.raises(InvalidParameter, match="not a hindrance"):
        verify_chain2(_pair(1, ["e", "f"]), "e", Wave())


def test_chain3_set_is_a_wave():
    """Test the hindrance set of the minor is a wave of the pair."""
    outcome = verify_chain3(_pair(0, ["e", "f"]), "f", Wave({"e"}))
    assert outcome.case_index == 1
    assert outcome.witness.X == {"e"}


def test_chain3_rejects_non_hindrance():
    """Test the triple must be a hindrance of the minor."""
    with pytest.raises(InvalidParameter):
        verify_chain3(_pair(0, ["e", "f"]), "f", Wave({"f"}))


def test_intermediate_lemma7_cowave():
    """Test E - f is a cowave of the minor of a free pair."""
    free = make_free(["e", "f"])
    outcome = verify_intermediate_lemma7(MatroidPair(free, free), "e", "f")
    assert outcome.case_index == 1
    assert outcome.is_cowave
    assert outcome.witness.X == {"e"}


def test_intermediate_lemma7_preconditions():
    """Test e and f differ and no nonempty wave avoids e."""
    free = make_free(["e", "f"])
    with pytest.raises(InvalidParameter, match="distinct"):
        verify_intermediate_lemma7(MatroidPair(free, free), "e", "e")
    with pytest.raises(InvalidParameter, match="avoids"):
        verify_intermediate_lemma7(_pair(0, ["e", "f"]), "e", "f")
