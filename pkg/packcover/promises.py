"""The promise lattice, blocking sets and the pure promise-set lemmas."""

from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Optional

import networkx as nx

from .errors import InvalidParameter, TheoremViolation


class Promise(Enum):
    """The six promises and their starred duals, in canonical order."""

    BOT = "bot"
    M_MINUS = "M-"
    M_PLUS = "M+"
    N_MINUS = "N-"
    N_PLUS = "N+"
    TOP = "top"
    BOT_STAR = "bot*"
    M_MINUS_STAR = "M-*"
    M_PLUS_STAR = "M+*"
    N_MINUS_STAR = "N-*"
    N_PLUS_STAR = "N+*"
    TOP_STAR = "top*"

    @property
    def label(self) -> str:
        return self.value

    @property
    def starred(self) -> bool:
        return self.value.endswith("*")

    @property
    def index(self) -> int:
        return _INDEX[self]

    @property
    def base(self) -> "Promise":
        """The plain promise underneath a starred one."""
        return Promise(self.value.rstrip("*")) if self.starred else self

    def star(self) -> "Promise":
        """Star involution: P -> P*, P* -> P."""
        if self.starred:
            return self.base
        return Promise(self.value + "*")

    @classmethod
    def parse(cls, text: str) -> "Promise":
        """Parse ``bot``, ``M-``, ``top*`` and the like (also ⊥ and ⊤)."""
        raw = text.strip()
        star = raw.endswith("*")
        core = raw.rstrip("*")
        core = {"⊥": "bot", "⊤": "top", "M−": "M-", "N−": "N-"}.get(core, core)
        core = {"BOT": "bot", "TOP": "top", "Bot": "bot", "Top": "top"}.get(core, core)
        try:
            promise = cls(core)
        except ValueError:
            raise InvalidParameter(f"Unknown promise: {text!r}") from None
        return promise.star() if star else promise

    def __str__(self) -> str:
        return self.value


PLAIN = tuple(p for p in Promise if not p.starred)
STARRED = tuple(p for p in Promise if p.starred)
_INDEX = {p: i for i, p in enumerate(Promise)}

BOT, M_MINUS, M_PLUS, N_MINUS, N_PLUS, TOP = PLAIN
BOT_STAR, M_MINUS_STAR, M_PLUS_STAR, N_MINUS_STAR, N_PLUS_STAR, TOP_STAR = STARRED

# Each pair reads "first >= second".
GENERATORS = (
    (TOP, M_PLUS),
    (TOP, N_PLUS),
    (M_PLUS, M_MINUS),
    (N_PLUS, N_MINUS),
    (M_MINUS, BOT),
    (N_MINUS, BOT),
)

# Promises whose witness circuit is required on each side of a tactic.
NEEDS_M_CIRCUIT = frozenset({TOP, M_PLUS, M_MINUS})
NEEDS_N_CIRCUIT = frozenset({TOP, N_PLUS, N_MINUS})


def _order_graph() -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(Promise)
    for high, low in GENERATORS:
        graph.add_edge(high, low)
        graph.add_edge(high.star(), low.star())
    return nx.transitive_closure(graph, reflexive=True)


_ORDER = _order_graph()


def promise_leq(p: Promise, q: Promise) -> bool:
    """True iff ``p <= q``; plain and starred promises are incomparable."""
    if p.starred != q.starred:
        return False
    return _ORDER.has_edge(q, p)


def sort_promises(promises: Iterable[Promise]) -> list[Promise]:
    return sorted(promises, key=lambda p: p.index)


def up_closure(promises: Iterable[Promise]) -> frozenset:
    promises = frozenset(promises)
    return frozenset(q for q in Promise if any(promise_leq(p, q) for p in promises))


def down_closure(promises: Iterable[Promise]) -> frozenset:
    promises = frozenset(promises)
    return frozenset(q for q in Promise if any(promise_leq(q, p) for p in promises))


def is_up_closed(promises: Iterable[Promise]) -> bool:
    promises = frozenset(promises)
    return up_closure(promises) == promises


def hasse_edges(relation: Iterable[tuple]) -> frozenset:
    """Covering pairs ``(greater, lesser)`` of a partial order given as pairs."""
    graph = nx.DiGraph()
    for high, low in relation:
        if high != low:
            graph.add_edge(high, low)
    if not nx.is_directed_acyclic_graph(graph):
        raise InvalidParameter("Relation is not antisymmetric")
    return frozenset(nx.transitive_reduction(graph).edges())


def order_relation(promises: Iterable[Promise] = PLAIN) -> frozenset:
    """All pairs ``(p, q)`` with ``p >= q`` among ``promises``."""
    promises = tuple(promises)
    return frozenset((p, q) for p in promises for q in promises if promise_leq(q, p))


def attainability_order(attainable_sets: Iterable[Iterable[Promise]]) -> frozenset:
    """The order "whenever P is attainable so is Q", computed over arenas.

    Returns the pairs ``(P, Q)`` of plain promises with ``P >= Q``.
    """
    sets = [frozenset(s) for s in attainable_sets]
    return frozenset(
        (p, q)
        for p in PLAIN
        for q in PLAIN
        if all(q in s for s in sets if p in s)
    )


def canonical_values() -> tuple[frozenset, ...]:
    """The five possible attainable sets of an arena without upper edges."""
    return (
        frozenset(PLAIN) | {BOT_STAR},
        frozenset(STARRED) | {BOT},
        frozenset({BOT, M_MINUS, M_PLUS, BOT_STAR, N_MINUS_STAR, N_PLUS_STAR}),
        frozenset({BOT, N_MINUS, N_PLUS, BOT_STAR, M_MINUS_STAR, M_PLUS_STAR}),
        frozenset({BOT, M_MINUS, N_MINUS, BOT_STAR, M_MINUS_STAR, N_MINUS_STAR}),
    )


CANONICAL_VALUES = canonical_values()

MINIMAL_BLOCKING_SETS = (
    frozenset({BOT}),
    frozenset({BOT_STAR}),
    frozenset({M_PLUS, M_MINUS_STAR}),
    frozenset({M_MINUS, M_PLUS_STAR}),
    frozenset({N_PLUS, N_MINUS_STAR}),
    frozenset({N_MINUS, N_PLUS_STAR}),
    frozenset({M_PLUS, N_MINUS, TOP_STAR}),
    frozenset({M_MINUS, N_PLUS, TOP_STAR}),
    frozenset({M_PLUS_STAR, N_MINUS_STAR, TOP}),
    frozenset({M_MINUS_STAR, N_PLUS_STAR, TOP}),
)


def classify_acal(attainable: Iterable[Promise]) -> int:
    """Index (1 to 5) of the canonical value equal to ``attainable``."""
    attainable = frozenset(attainable)
    for i, value in enumerate(CANONICAL_VALUES, start=1):
        if attainable == value:
            return i
    raise TheoremViolation(
        f"Attainable set {format_promises(attainable)} is none of the five values",
        instance=attainable,
    )


def is_blocking(promises: Iterable[Promise]) -> bool:
    promises = frozenset(promises)
    return all(promises & value for value in CANONICAL_VALUES)


def includes_minimal_blocking(promises: Iterable[Promise]) -> Optional[frozenset]:
    """The first listed minimal blocking set inside ``promises``, if any."""
    promises = frozenset(promises)
    for minimal in MINIMAL_BLOCKING_SETS:
        if minimal <= promises:
            return minimal
    return None


def format_promises(promises: Iterable[Promise]) -> str:
    return "{" + ", ".join(p.label for p in sort_promises(promises)) + "}"


def all_subsets(universe: Iterable[Promise]) -> list[frozenset]:
    universe = tuple(universe)
    return [
        frozenset(c) for r in range(len(universe) + 1) for c in combinations(universe, r)
    ]


def up_closed_subsets(universe: Iterable[Promise]) -> list[frozenset]:
    """Subsets of ``universe`` that are up-closed in the promise order."""
    return [s for s in all_subsets(universe) if is_up_closed(s)]


@dataclass
class EnumerationTally:
    """Outcome counts of an exhaustive promise-set sweep."""

    name: str
    checked: int = 0
    skipped: int = 0
    outcomes: Counter = field(default_factory=Counter)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "checked": self.checked,
            "skipped": self.skipped,
            "outcomes": {str(k): v for k, v in sorted(self.outcomes.items())},
        }


def verify_blockstr() -> EnumerationTally:
    """Up-closed and blocking iff one of the ten minimal sets is included."""
    tally = EnumerationTally("blockstr")
    for subset in all_subsets(Promise):
        tally.checked += 1
        up_closed_blocking = is_up_closed(subset) and is_blocking(subset)
        minimal = includes_minimal_blocking(subset)
        if up_closed_blocking != (minimal is not None and is_up_closed(subset)):
            raise TheoremViolation(
                f"Blocking characterisation fails for {format_promises(subset)}",
                instance=subset,
            )
        if up_closed_blocking:
            tally.outcomes[format_promises(minimal)] += 1
    return tally


def _contains_one(union: frozenset, candidates) -> bool:
    return any(frozenset(c) <= union for c in candidates)


def lem5_minus(g_m_minus: frozenset, g_n_plus: frozenset, g_top_star: frozenset) -> list[int]:
    """The outcomes (1 to 7) that hold for a triple of challenged sets."""
    union = g_m_minus | g_n_plus | g_top_star
    holds = []
    if _contains_one(
        union,
        [{M_PLUS, M_MINUS_STAR}, {M_MINUS, M_PLUS_STAR}, {N_PLUS, N_MINUS_STAR}, {N_MINUS, N_PLUS_STAR}],
    ):
        holds.append(1)
    if M_MINUS in g_m_minus and {N_PLUS, TOP_STAR} <= union:
        holds.append(2)
    if N_MINUS in g_m_minus and {M_PLUS, TOP_STAR} <= union:
        holds.append(3)
    if TOP in g_m_minus and (
        {M_MINUS_STAR, N_PLUS_STAR} <= g_top_star or {M_PLUS_STAR, N_MINUS_STAR} <= g_top_star
    ):
        holds.append(4)
    if (
        g_m_minus <= {M_PLUS, N_PLUS, TOP}
        and g_top_star <= {M_PLUS_STAR, N_PLUS_STAR, TOP_STAR}
        and ({M_MINUS, N_PLUS} <= union or {M_PLUS, N_MINUS} <= union)
    ):
        holds.append(5)
    if (
        not g_m_minus
        and N_MINUS_STAR not in g_top_star
        and {M_MINUS_STAR, N_PLUS_STAR, TOP} <= union
        and g_n_plus <= {N_PLUS, TOP}
    ):
        holds.append(6)
    if not g_m_minus and {M_PLUS_STAR, N_MINUS_STAR, TOP} <= union and g_n_plus <= {M_PLUS, TOP}:
        holds.append(7)
    return holds


def lem4_minus(g_m_plus: frozenset, g_n_minus: frozenset, g_top_star: frozenset) -> list[int]:
    """The outcomes (1 to 5) that hold for a triple of challenged sets."""
    union = g_m_plus | g_n_minus | g_top_star
    holds = []
    if _contains_one(
        union,
        [
            {M_PLUS, M_MINUS_STAR},
            {M_MINUS, M_PLUS_STAR},
            {N_PLUS, N_MINUS_STAR},
            {N_MINUS, N_PLUS_STAR},
            {M_MINUS, N_PLUS, TOP_STAR},
            {M_PLUS_STAR, N_MINUS_STAR, TOP},
        ],
    ):
        holds.append(1)
    if {M_PLUS, N_MINUS, TOP_STAR} <= union and g_m_plus & {M_PLUS, N_MINUS}:
        holds.append(2)
    if TOP in g_m_plus and {M_MINUS_STAR, N_PLUS_STAR} <= g_top_star:
        holds.append(3)
    if (
        g_m_plus <= {TOP, N_PLUS}
        and g_n_minus == {TOP, M_PLUS, N_PLUS, N_MINUS}
        and TOP_STAR in g_top_star
        and g_top_star <= {TOP_STAR, M_PLUS_STAR}
    ):
        holds.append(4)
    if (
        not g_m_plus
        and TOP in g_n_minus
        and g_n_minus <= {TOP, N_PLUS}
        and g_top_star == {TOP_STAR, M_PLUS_STAR, M_MINUS_STAR, N_PLUS_STAR}
    ):
        holds.append(5)
    return holds


def _verify_triples(name: str, outcomes_of) -> EnumerationTally:
    plain = up_closed_subsets(p for p in PLAIN if p is not BOT)
    starred = up_closed_subsets(p for p in STARRED if p is not BOT_STAR)
    tally = EnumerationTally(name)
    for first in plain:
        for second in plain:
            for third in starred:
                if not is_blocking(first | second | third):
                    tally.skipped += 1
                    continue
                tally.checked += 1
                holds = outcomes_of(first, second, third)
                if not holds:
                    triple = (first, second, third)
                    raise TheoremViolation(
                        f"{name}: no outcome holds for "
                        + ", ".join(format_promises(s) for s in triple),
                        instance=triple,
                    )
                tally.outcomes[holds[0]] += 1
    return tally


def verify_lem5_minus() -> EnumerationTally:
    return _verify_triples("lem5-minus", lem5_minus)


def verify_lem4_minus() -> EnumerationTally:
    return _verify_triples("lem4-minus", lem4_minus)
