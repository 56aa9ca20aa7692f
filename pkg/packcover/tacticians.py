"""Exhaustive challenger sweeps on micro arenas.

A challenger to a promise ``Q`` picks, for every tactic attaining ``Q``, an
upper edge the tactic does not promise bottom. When every challenger of an
arena can be listed, the sweeps below check the tactician lemmas and the
blocking-edge lemma against all of them.
"""

import math
from collections.abc import Iterable, Iterator, Mapping
from itertools import product
from typing import Optional

from .arena import Arena, enumerate_tactics, verify_blocklem
from .errors import InvalidParameter, TheoremViolation
from .limits import CHALLENGER_BITS_CAP
from .promises import (
    M_MINUS,
    M_PLUS,
    M_PLUS_STAR,
    N_MINUS,
    N_MINUS_STAR,
    N_PLUS,
    TOP,
    TOP_STAR,
    EnumerationTally,
    format_promises,
    is_blocking,
    up_closure,
)

PLUS = "plus"
MINUS = "minus"

TRIPLES = {
    PLUS: (M_MINUS, N_PLUS, TOP_STAR),
    MINUS: (M_PLUS, N_MINUS, TOP_STAR),
}

DOUBLE_EXTENSION = "double-extension"
WEAK_PACKING = "weak-challenge-packing"
WEAK_COVERING = "weak-challenge-covering"
IMPROVEMENT_1 = "improvement-1"
IMPROVEMENT_2 = "improvement-2"

_IMPROVEMENTS = (
    (IMPROVEMENT_1, frozenset({M_MINUS, N_PLUS, TOP_STAR})),
    (IMPROVEMENT_2, frozenset({N_MINUS_STAR, M_PLUS_STAR, TOP})),
)


def list_tactics(arena: Arena, promises: Iterable) -> dict:
    """Every literal tactic (cotactic for starred promises) per promise."""
    return {q: list(enumerate_tactics(arena, q, normalized=False)) for q in promises}


def challenger_bits(tactics: Mapping) -> Optional[float]:
    """log2 of the number of challenger tuples.

    ``None`` when some tactic promises bottom everywhere, so that no
    challenger to its promise exists.
    """
    bits = 0.0
    for listed in tactics.values():
        for tactic in listed:
            choices = len(tactic.challengeable())
            if choices == 0:
                return None
            bits += math.log2(choices)
    return bits


def iter_challengers(tactics: Mapping) -> Iterator[dict]:
    """Every tuple of challengers, as ``{promise: {tactic: edge}}`` tables."""
    slots = [(q, t) for q, listed in tactics.items() for t in listed]
    for edges in product(*(t.challengeable() for _, t in slots)):
        table = {q: {} for q in tactics}
        for (q, t), f in zip(slots, edges):
            table[q][t] = f
        yield table


def _challenged_at(table: Mapping, promise, f: str, keep=None) -> frozenset:
    chosen = (t for t, g in table[promise].items() if g == f and (keep is None or keep(t)))
    return up_closure(t.assignment[f] for t in chosen)


def tactician_case(arena: Arena, kind: str, table: Mapping) -> Optional[tuple[str, str]]:
    """The first case of the tactician lemma realised by the challengers.

    Returns ``(case, edge)``; cases are tried in the lemma's order and, for
    each case, edges in ground order.
    """
    triple = TRIPLES[kind]
    weak_side = triple[1]
    reach = {f: {q: _challenged_at(table, q, f) for q in triple} for f in arena.upper}

    def union(f, replace=None):
        parts = dict(reach[f])
        if replace is not None:
            parts[replace[0]] = replace[1]
        return frozenset().union(*parts.values())

    for f in arena.upper:
        if all(q in reach[f][q] for q in triple):
            return DOUBLE_EXTENSION, f
    for f in arena.upper:
        n_weak = _challenged_at(table, weak_side, f, lambda t: not t.strong(f)[1])
        if is_blocking(union(f, (weak_side, n_weak))):
            return WEAK_PACKING, f
    for f in arena.upper:
        m_weak = _challenged_at(table, TOP_STAR, f, lambda t: not t.strong(f)[0])
        if is_blocking(union(f, (TOP_STAR, m_weak))):
            return WEAK_COVERING, f
    if kind == MINUS:
        for case, blocking in _IMPROVEMENTS:
            for f in arena.upper:
                if blocking <= union(f):
                    return case, f
    return None


def _describe(table: Mapping) -> str:
    parts = []
    for q, choices in table.items():
        picks = ", ".join(f"{t.to_dict()['phi']}->{f}" for t, f in choices.items())
        parts.append(f"{q.label}: [{picks}]")
    return "; ".join(parts)


def check_tacticians(
    arena: Arena,
    kind: str = PLUS,
    cap: float = CHALLENGER_BITS_CAP,
    tally: Optional[EnumerationTally] = None,
) -> EnumerationTally:
    """Run the tactician lemma against every challenger tuple of ``arena``.

    Arenas without upper edges, without any challenger, or whose challenger
    space exceeds ``cap`` bits are counted as skipped.
    """
    if kind not in TRIPLES:
        raise InvalidParameter(f"Unknown tactician kind {kind!r}; use {PLUS!r} or {MINUS!r}")
    tally = tally or EnumerationTally(f"tactician-{kind}")
    if not arena.F:
        tally.skipped += 1
        return tally
    tactics = list_tactics(arena, TRIPLES[kind])
    bits = challenger_bits(tactics)
    if bits is None or bits > cap:
        tally.skipped += 1
        return tally
    for table in iter_challengers(tactics):
        tally.checked += 1
        found = tactician_case(arena, kind, table)
        if found is None:
            raise TheoremViolation(
                f"tactician-{kind}: no case holds for challengers {_describe(table)}",
                instance=arena,
            )
        tally.outcomes[found[0]] += 1
    return tally


def sweep_blocklem(
    arena: Arena,
    blocking: Iterable,
    cap: float = CHALLENGER_BITS_CAP,
    tally: Optional[EnumerationTally] = None,
) -> EnumerationTally:
    """Check the blocking-edge lemma for every challenger tuple of ``blocking``."""
    blocking = frozenset(blocking)
    tally = tally or EnumerationTally(f"blocklem {format_promises(blocking)}")
    tactics = list_tactics(arena, blocking)
    bits = challenger_bits(tactics)
    if bits is None or bits > cap:
        tally.skipped += 1
        return tally
    for table in iter_challengers(tactics):
        challengers = {q: table[q].__getitem__ for q in blocking}
        f = verify_blocklem(arena, blocking, challengers, tactics=tactics)
        tally.checked += 1
        tally.outcomes[f] += 1
    return tally
