"""Tests for tacticians module."""

import pytest

from packcover.arena import make_arena
from packcover.errors import InvalidParameter
from packcover.matroid import make_uniform
from packcover.promises import BOT, M_MINUS, N_PLUS, TOP_STAR
from packcover.tacticians import (
    DOUBLE_EXTENSION,
    MINUS,
    PLUS,
    TRIPLES,
    challenger_bits,
    check_tacticians,
    iter_challengers,
    list_tactics,
    sweep_blocklem,
    tactician_case,
)


@pytest.fixture
def edge_arena():
    """(U_{1,2}, U_{1,2}) on {e, d1} with d1 an upper edge."""
    m = make_uniform(1, ["e", "d1"])
    return make_arena(m, m, ["d1"])


def test_literal_tactics_listed(edge_arena):
    """Test tactics are listed per promise of the triple."""
    tactics = list_tactics(edge_arena, TRIPLES[PLUS])
    assert set(tactics) == {M_MINUS, N_PLUS, TOP_STAR}
    assert all(tactics[q] for q in tactics)
    assert all(t.starred for t in tactics[TOP_STAR])


def test_challenger_bits(edge_arena):
    """Test one upper edge leaves a single challenger, and bottom leaves none."""
    assert challenger_bits(list_tactics(edge_arena, TRIPLES[PLUS])) == 0
    assert challenger_bits(list_tactics(edge_arena, [BOT])) is None


def test_iter_challengers_single_edge(edge_arena):
    """Test one upper edge gives exactly one challenger tuple."""
    tables = list(iter_challengers(list_tactics(edge_arena, TRIPLES[PLUS])))
    assert len(tables) == 1
    assert set(tables[0][M_MINUS].values()) == {"d1"}


@pytest.mark.parametrize("kind", [PLUS, MINUS])
def test_double_extension_on_one_edge(edge_arena, kind):
    """Test a single edge carries every promise of the triple."""
    tally = check_tacticians(edge_arena, kind)
    assert tally.checked == 1
    assert dict(tally.outcomes) == {DOUBLE_EXTENSION: 1}
    table = next(iter_challengers(list_tactics(edge_arena, TRIPLES[kind])))
    assert tactician_case(edge_arena, kind, table) == (DOUBLE_EXTENSION, "d1")


def test_arena_without_upper_edges_skipped():
    """Test an arena with nothing to challenge is skipped."""
    m = make_uniform(1, ["e"])
    tally = check_tacticians(make_arena(m, m))
    assert tally.skipped == 1
    assert tally.checked == 0


def test_cap_skips_large_spaces(edge_arena):
    """Test a challenger space above the cap is skipped."""
    assert check_tacticians(edge_arena, cap=-1).skipped == 1


def test_unknown_kind(edge_arena):
    """Test only the two tactician kinds exist."""
    with pytest.raises(InvalidParameter, match="Unknown tactician kind"):
        check_tacticians(edge_arena, "sideways")


def test_sweep_blocklem(edge_arena):
    """Test every challenger tuple finds the blocking edge."""
    tally = sweep_blocklem(edge_arena, {M_MINUS, N_PLUS, TOP_STAR})
    assert tally.checked == 1
    assert dict(tally.outcomes) == {"d1": 1}


def test_sweep_blocklem_without_challengers(edge_arena):
    """Test a tactic promising bottom everywhere leaves nothing to sweep."""
    assert sweep_blocklem(edge_arena, {BOT}).skipped == 1
