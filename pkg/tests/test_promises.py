"""Tests for promises module."""

import pytest

from packcover.errors import InvalidParameter, TheoremViolation
from packcover.promises import (
    BOT,
    BOT_STAR,
    CANONICAL_VALUES,
    GENERATORS,
    M_MINUS,
    M_MINUS_STAR,
    M_PLUS,
    M_PLUS_STAR,
    MINIMAL_BLOCKING_SETS,
    N_MINUS,
    N_MINUS_STAR,
    N_PLUS,
    N_PLUS_STAR,
    PLAIN,
    STARRED,
    TOP,
    TOP_STAR,
    Promise,
    attainability_order,
    classify_acal,
    down_closure,
    format_promises,
    hasse_edges,
    includes_minimal_blocking,
    is_blocking,
    is_up_closed,
    lem4_minus,
    lem5_minus,
    order_relation,
    promise_leq,
    sort_promises,
    up_closure,
    verify_blockstr,
    verify_lem4_minus,
    verify_lem5_minus,
)


def test_parse_labels():
    """Test parsing plain, starred and symbolic labels."""
    assert Promise.parse("M-") is M_MINUS
    assert Promise.parse("top*") is TOP_STAR
    assert Promise.parse("⊥") is BOT
    assert Promise.parse(" N+ ") is N_PLUS


def test_parse_unknown():
    """Test an unknown label raises."""
    with pytest.raises(InvalidParameter, match="Unknown promise"):
        Promise.parse("M0")


def test_star_is_an_involution():
    """Test starring twice gives the promise back."""
    for p in Promise:
        assert p.star().star() is p
        assert p.star().starred != p.starred
    assert M_PLUS_STAR.base is M_PLUS


def test_order_generators():
    """Test the generating relations and the incomparable pairs."""
    assert promise_leq(M_PLUS, TOP)
    assert promise_leq(BOT, TOP)
    assert promise_leq(N_MINUS_STAR, N_PLUS_STAR)
    assert not promise_leq(M_PLUS, N_PLUS)
    assert not promise_leq(N_PLUS, M_PLUS)
    assert not promise_leq(M_MINUS, N_PLUS)
    assert not promise_leq(BOT, BOT_STAR)


def test_hasse_edges_are_generators():
    """Test the transitive reduction of the order is the six generators."""
    assert hasse_edges(order_relation()) == frozenset(GENERATORS)
    assert len(GENERATORS) == 6


def test_hasse_edges_rejects_cycles():
    """Test a relation with a cycle is not an order."""
    with pytest.raises(InvalidParameter):
        hasse_edges([(TOP, BOT), (BOT, TOP)])


def test_closures():
    """Test up- and down-closures."""
    assert up_closure([M_MINUS]) == {M_MINUS, M_PLUS, TOP}
    assert down_closure([M_PLUS]) == {M_PLUS, M_MINUS, BOT}
    assert is_up_closed([TOP])
    assert not is_up_closed([M_PLUS])


def test_sort_and_format():
    """Test promises sort into canonical order."""
    assert sort_promises([TOP, BOT_STAR, BOT]) == [BOT, TOP, BOT_STAR]
    assert format_promises([N_PLUS, M_MINUS]) == "{M-, N+}"


def test_canonical_values():
    """Test the five values and their classification."""
    assert len(CANONICAL_VALUES) == 5
    assert classify_acal(frozenset(PLAIN) | {BOT_STAR}) == 1
    assert classify_acal(frozenset(STARRED) | {BOT}) == 2
    for index, value in enumerate(CANONICAL_VALUES, start=1):
        assert classify_acal(value) == index


def test_classify_rejects_other_sets():
    """Test a set outside the five values is a violation."""
    with pytest.raises(TheoremViolation):
        classify_acal({BOT})


def test_blocking():
    """Test blocking sets meet every value."""
    assert is_blocking({BOT})
    assert is_blocking({M_PLUS, M_MINUS_STAR})
    assert not is_blocking({M_PLUS})
    assert not is_blocking(set())
    for minimal in MINIMAL_BLOCKING_SETS:
        assert is_blocking(minimal)


def test_includes_minimal_blocking():
    """Test the first listed minimal set is reported."""
    assert includes_minimal_blocking({TOP, M_MINUS, N_PLUS, TOP_STAR}) == {
        M_MINUS,
        N_PLUS,
        TOP_STAR,
    }
    assert includes_minimal_blocking({TOP, TOP_STAR}) is None


def test_attainability_order_from_witness_sets():
    """Test the order computed from the value sets is the promise order."""
    assert attainability_order(CANONICAL_VALUES) == order_relation()


def test_verify_blockstr():
    """Test the sweep covers all 4096 subsets."""
    tally = verify_blockstr()
    assert tally.checked == 4096
    assert sum(tally.outcomes.values()) > 0
    assert tally.to_dict()["name"] == "blockstr"


def test_lem5_minus_outcomes():
    """Test outcomes of a double extension triple."""
    holds = lem5_minus(
        up_closure([M_MINUS]), up_closure([N_PLUS]), up_closure([TOP_STAR])
    )
    assert 2 in holds


def test_lem4_minus_outcomes():
    """Test the first outcome fires on a pair of opposite promises."""
    holds = lem4_minus(up_closure([M_PLUS]), up_closure([N_MINUS]), {TOP_STAR, M_MINUS_STAR})
    assert holds[0] == 1


def test_verify_lem5_minus_and_lem4_minus():
    """Test both triple sweeps pass with some triples checked."""
    for tally in (verify_lem5_minus(), verify_lem4_minus()):
        assert tally.checked > 0
        assert sum(tally.outcomes.values()) == tally.checked


def test_n_plus_star_is_starred():
    """Test starred constants carry their star."""
    assert N_PLUS_STAR.label == "N+*"
    assert N_MINUS_STAR.starred
