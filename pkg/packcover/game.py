"""The Packing and Covering games on a finite pair-tree.

Games are solved by backward induction over ``(node, promise)``. On a
finite tree every play ends with a stuck player, and the stuck player
loses: Coverina is stuck when every upper edge of the last tactic is
promised bottom, Packer when no tactic attains the current promise.

The Covering game is the Packing game on the pair-tree with every node
matroid dualised, with Coverina playing the tactics; its strategies are
stored as tactics of that dual pair-tree.
"""

from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Optional

from .arena import Arena, Tactic, enumerate_tactics, first_tactic, fulfils, phi_assignments, verify_tactic
from .errors import InternalError, InvalidParameter, StrategyInvalidError
from .matroid import MatroidPair
from .promises import (
    BOT,
    M_MINUS,
    M_PLUS,
    N_MINUS,
    N_PLUS,
    NEEDS_M_CIRCUIT,
    NEEDS_N_CIRCUIT,
    PLAIN,
    TOP,
    Promise,
)
from .trees import PairTree, assemble, assemble_tree, pick_compatible_precircuits
from .waves import PASS, Cowave, Verdict, Wave, verify_wave

PACKER = "Packer"
COVERINA = "Coverina"
PACKING = "packing"
COVERING = "covering"

Challenger = Callable[["GameState", Tactic], Optional[str]]


@dataclass(frozen=True)
class GameState:
    node: str
    edge: str
    promise: Promise
    mover: str = PACKER

    def to_dict(self) -> dict:
        return {
            "node": self.node,
            "edge": self.edge,
            "promise": self.promise.label,
            "mover": self.mover,
        }


@dataclass
class Strategy:
    """Tactics of the player who plays them, keyed by ``(node, promise)``."""

    player: str
    tactics: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)

    def tactic_at(self, node: str, promise: Promise) -> Optional[Tactic]:
        return self.tactics.get((node, promise))

    def to_dict(self) -> dict:
        return {
            "player": self.player,
            "moves": [
                {
                    "node": node,
                    "promise": promise.label,
                    "tactic": tactic.to_dict(),
                    **(
                        {"source": self.provenance[(node, promise)]}
                        if (node, promise) in self.provenance
                        else {}
                    ),
                }
                for (node, promise), tactic in self.tactics.items()
            ],
        }


@dataclass
class LeastTactics(Strategy):
    """Plays the least legal tactic at every state, looked up on demand."""

    board: Optional[PairTree] = None

    def tactic_at(self, node: str, promise: Promise) -> Optional[Tactic]:
        key = (node, promise)
        if key not in self.tactics:
            self.tactics[key] = first_tactic(self.board.arena_at(node), promise)
        return self.tactics[key]


@dataclass
class SolveResult:
    game: str
    promise: Promise
    winner: str
    strategy: Strategy
    table: dict
    board: PairTree
    challenger: Optional[Challenger] = None

    def to_dict(self) -> dict:
        result = {
            "game": self.game,
            "promise": self.promise.label,
            "winner": self.winner,
            "table": {t: sorted(p.label for p in ps) for t, ps in self.table.items()},
        }
        if self.winner == self.strategy.player:
            result["strategy"] = self.strategy.to_dict()
        return result


class GameSolver:
    """Memoised backward induction for the tactic-playing side.

    ``winning_tactic(t, P)`` is the least tactic, in canonical order, that
    attains ``P`` at ``t`` and only promises what can be won below.
    """

    def __init__(self, pairtree: PairTree):
        self.pairtree = pairtree
        self._memo = {}

    def winning_tactic(self, node: str, promise: Promise) -> Optional[Tactic]:
        key = (node, promise)
        if key not in self._memo:
            self._memo[key] = self._solve(node, promise)
        return self._memo[key]

    def wins(self, node: str, promise: Promise) -> bool:
        return self.winning_tactic(node, promise) is not None

    def _solve(self, node: str, promise: Promise) -> Optional[Tactic]:
        arena = self.pairtree.arena_at(node)
        allowed = {}
        for f in arena.upper:
            child = self.pairtree.child_across(node, f)
            allowed[f] = [p for p in PLAIN if p is BOT or self.wins(child, p)]
        for phi in phi_assignments(arena, allowed):
            tactic = first_tactic(arena, promise, phi)
            if tactic is not None:
                return tactic
        return None

    def table(self) -> dict:
        return {t: frozenset(p for p in PLAIN if self.wins(t, p)) for t in self.pairtree.nodes}

    def strategy(self, player: str, promise: Promise) -> Strategy:
        """Winning tactics on every state reachable from the root."""
        strategy = Strategy(player)
        stack = [(self.pairtree.root, promise)]
        while stack:
            node, p = stack.pop()
            if (node, p) in strategy.tactics:
                continue
            tactic = self.winning_tactic(node, p)
            if tactic is None:
                continue
            strategy.tactics[(node, p)] = tactic
            strategy.provenance[(node, p)] = "solver"
            for f in tactic.challengeable():
                stack.append((self.pairtree.child_across(node, f), tactic.assignment[f]))
        return strategy

    def challenge(self, state: GameState, tactic: Tactic) -> Optional[str]:
        """Challenge an edge whose promise cannot be won below, if there is one."""
        edges = tactic.challengeable()
        if not edges:
            return None
        for f in edges:
            child = self.pairtree.child_across(state.node, f)
            if not self.wins(child, tactic.assignment[f]):
                return f
        return edges[0]


def _rooted_at(pairtree: PairTree, e: Optional[str]) -> PairTree:
    if e is None or e == pairtree.e:
        return pairtree
    return PairTree(pairtree.M, pairtree.N, e)


def legal_tactics(pairtree: PairTree, state: GameState) -> list:
    """Every tactic Packer may play at ``state``, in canonical order."""
    return list(enumerate_tactics(pairtree.arena_at(state.node), state.promise))


def verify_strategy(pairtree: PairTree, promise: Promise, strategy: Strategy) -> Verdict:
    """Walk every play consistent with ``strategy`` and check each prescribed tactic."""
    seen = set()
    stack = [(pairtree.root, promise)]
    while stack:
        node, p = stack.pop()
        if (node, p) in seen:
            continue
        seen.add((node, p))
        tactic = strategy.tactic_at(node, p)
        if tactic is None:
            return Verdict(False, f"no-tactic-at-{node}-{p.label}")
        if tactic.attained is not p:
            return Verdict(False, f"wrong-promise-at-{node}")
        verdict = verify_tactic(pairtree.arena_at(node), tactic)
        if not verdict:
            return Verdict(False, f"illegal-tactic-at-{node}-{verdict.reason}")
        for f in tactic.challengeable():
            stack.append((pairtree.child_across(node, f), tactic.assignment[f]))
    return PASS


def verify_challenger(pairtree: PairTree, promise: Promise, challenger: Challenger) -> Verdict:
    """Check that ``challenger`` answers every legal tactic and wins every play."""
    memo = {}

    def wins(node: str, p: Promise) -> bool:
        if (node, p) in memo:
            return memo[(node, p)]
        state = GameState(node, pairtree.lower_edge(node), p, COVERINA)
        result = True
        for tactic in legal_tactics(pairtree, state):
            f = challenger(state, tactic)
            if f is None or f not in tactic.challengeable():
                result = False
                break
            if not wins(pairtree.child_across(node, f), tactic.assignment[f]):
                result = False
                break
        memo[(node, p)] = result
        return result

    if wins(pairtree.root, promise):
        return PASS
    return Verdict(False, "challenger-loses")


def _solve(pairtree: PairTree, game: str, promise: Promise, tactic_player: str, other: str) -> SolveResult:
    solver = GameSolver(pairtree)
    base = promise.base
    if solver.wins(pairtree.root, base):
        winner = tactic_player
        strategy = solver.strategy(tactic_player, base)
        verdict = verify_strategy(pairtree, base, strategy)
    else:
        winner = other
        strategy = Strategy(tactic_player)
        verdict = verify_challenger(pairtree, base, solver.challenge)
    if not verdict:
        raise InternalError(f"Solved {game} strategy fails its own check: {verdict.reason}")
    table = solver.table()
    if promise.starred:
        table = {t: frozenset(p.star() for p in ps) for t, ps in table.items()}
    return SolveResult(game, promise, winner, strategy, table, pairtree, solver.challenge)


def solve_packing_game(pairtree: PairTree, promise: Promise, e: Optional[str] = None) -> SolveResult:
    """Decide the Packing game for a plain promise at the designated element."""
    if promise.starred:
        raise InvalidParameter(f"The Packing game starts from a plain promise, got {promise}")
    return _solve(_rooted_at(pairtree, e), PACKING, promise, PACKER, COVERINA)


def solve_covering_game(pairtree: PairTree, promise: Promise, e: Optional[str] = None) -> SolveResult:
    """Decide the Covering game for a starred promise.

    Coverina plays tactics of the dualised pair-tree and Packer challenges.
    """
    if not promise.starred:
        raise InvalidParameter(f"The Covering game starts from a starred promise, got {promise}")
    return _solve(_rooted_at(pairtree, e).dual(), COVERING, promise, COVERINA, PACKER)


# -- replay -------------------------------------------------------------------------


@dataclass(frozen=True)
class Move:
    player: str
    state: GameState
    tactic: Optional[Tactic] = None
    edge: Optional[str] = None
    m_strong: bool = False
    n_strong: bool = False

    def to_dict(self) -> dict:
        if self.tactic is not None:
            return {"player": self.player, "state": self.state.to_dict(), "tactic": self.tactic.to_dict()}
        return {
            "player": self.player,
            "edge": self.edge,
            "M_strong": self.m_strong,
            "N_strong": self.n_strong,
        }


@dataclass
class Transcript:
    game: str
    moves: list
    winner: str
    stuck: str

    def to_dict(self) -> dict:
        return {
            "game": self.game,
            "moves": [m.to_dict() for m in self.moves],
            "winner": self.winner,
            "stuck": self.stuck,
        }


def play_trace(
    board: PairTree,
    promise: Promise,
    tactics: Strategy,
    challenger: Challenger,
    game: str = PACKING,
) -> Transcript:
    """Replay one play: ``tactics`` moves first, ``challenger`` answers.

    ``board`` is the pair-tree the tactics live on: the original one for the
    Packing game, the dual one for the Covering game.
    """
    tactic_player = PACKER if game == PACKING else COVERINA
    other = COVERINA if game == PACKING else PACKER
    node, p = board.root, promise.base
    moves = []
    while True:
        arena = board.arena_at(node)
        state = GameState(node, arena.e, p, tactic_player)
        tactic = tactics.tactic_at(node, p)
        if tactic is None:
            return Transcript(game, moves, other, tactic_player)
        verdict = verify_tactic(arena, tactic)
        if tactic.attained is not p or not verdict:
            raise StrategyInvalidError(
                f"Illegal tactic at node {node} for {p}: {verdict.reason or 'wrong promise'}",
                state=state,
            )
        moves.append(Move(tactic_player, state, tactic))
        edges = tactic.challengeable()
        if not edges:
            return Transcript(game, moves, tactic_player, other)
        answer_state = GameState(node, arena.e, p, other)
        f = challenger(answer_state, tactic)
        if f not in edges:
            raise StrategyInvalidError(f"Illegal challenge {f!r} at node {node}", state=answer_state)
        m_strong, n_strong = tactic.strong(f)
        moves.append(Move(other, answer_state, edge=f, m_strong=m_strong, n_strong=n_strong))
        node, p = board.child_across(node, f), tactic.assignment[f]


# -- strategies and waves -------------------------------------------------------------


def strategy_to_wave(board: PairTree, promise: Promise, strategy: Strategy) -> Wave:
    """Glue the tactics of a winning strategy into one wave of the assembled pair.

    The result is a union over the nodes reachable in play, intersected with
    the ground set; for a covering strategy (on the dual board) it is
    returned as a cowave.
    """
    verdict = verify_strategy(board, promise.base, strategy)
    if not verdict:
        raise InvalidParameter(f"Strategy is not winning: {verdict.reason}")
    ground = frozenset(board.ground)
    X, S_M, S_N = set(), set(), set()
    seen = set()
    stack = [(board.root, promise.base)]
    while stack:
        node, p = stack.pop()
        if (node, p) in seen:
            continue
        seen.add((node, p))
        tactic = strategy.tactic_at(node, p)
        X |= tactic.wave.X
        S_M |= tactic.wave.S_M
        S_N |= tactic.wave.S_N
        for f in tactic.challengeable():
            stack.append((board.child_across(node, f), tactic.assignment[f]))
    wave = Wave(frozenset(X) & ground, frozenset(S_M) & ground, frozenset(S_N) & ground)
    pair = assemble(board).assembled
    if not verify_wave(pair, wave) or not fulfils(Arena(pair, (), board.e), wave, promise.base):
        raise InternalError(f"Glued wave {wave} does not fulfil {promise.base} at {board.e}")
    if promise.starred:
        return Cowave(wave.X, wave.S_M, wave.S_N)
    return wave


def _spans(matroid, subset: frozenset, element: str) -> bool:
    return element not in subset and matroid.spans_mask(matroid.mask(subset), matroid.bit(element))


def _node_promise(pair: MatroidPair, d: str, x: frozenset, s_m: frozenset, s_n: frozenset):
    """Strongest promise the wave below a node makes about the edge ``d`` above it."""
    ladder = (
        (TOP, Wave(x, s_m, s_n)),
        (M_PLUS, Wave(x, s_m, s_n)),
        (M_MINUS, Wave(x | {d}, s_m, s_n | {d})),
        (N_PLUS, Wave(x, s_m, s_n)),
        (N_MINUS, Wave(x | {d}, s_m | {d}, s_n)),
    )
    for promise, z in ladder:
        if not verify_wave(pair, z):
            continue
        if promise is TOP and not (_spans(pair.M, s_m, d) and _spans(pair.N, s_n, d)):
            continue
        if promise is M_PLUS and not _spans(pair.M, s_m, d):
            continue
        if promise is N_PLUS and not _spans(pair.N, s_n, d):
            continue
        return promise, z
    return BOT, Wave()


def _promises_by_node(board: PairTree, promise: Promise, wave: Wave) -> dict:
    found = {board.root: (promise, wave)}
    for node in board.nodes[1:]:
        below = board.subtree_pair(node)
        part = frozenset(below.ground)
        d = board.lower_edge(node)
        found[node] = _node_promise(below, d, wave.X & part, wave.S_M & part, wave.S_N & part)
    return found


def _spanned_from_above(side_tree, node: str, child: str, side_set: frozenset, f: str) -> bool:
    above = side_tree.subtree(child, node)
    matroid = assemble_tree(above)
    return _spans(matroid, side_set & set(above.ground), f)


def wave_to_strategy(board: PairTree, promise: Promise, wave: Wave) -> Strategy:
    """Break a wave of the assembled pair into a winning Packer strategy.

    Each node gets the strongest promise its part of the wave makes about
    the edge above it; its local wave keeps the node's own elements plus the
    upper edges promised M- (N-) that are N-spanned (M-spanned) from the
    node's side, on the M-side (N-side). Witness circuits come from
    compatible precircuits of the wave's sides. Raises InternalError when a
    tactic reached in play does not verify.
    """
    if promise.starred:
        if not isinstance(wave, Cowave):
            raise InvalidParameter(f"{promise} needs a cowave")
        plain = wave_to_strategy(board.dual(), promise.base, Wave(wave.X, wave.S_M, wave.S_N))
        plain.player = COVERINA
        return plain
    pair = assemble(board).assembled
    if not verify_wave(pair, wave):
        raise InvalidParameter(f"{wave} is not a wave of the assembled pair")
    if not fulfils(Arena(pair, (), board.e), wave, promise):
        raise InvalidParameter(f"{wave} does not fulfil {promise} at {board.e}")

    by_node = _promises_by_node(board, promise, wave)
    circuits_m = pick_compatible_precircuits(board.M, wave.S_M, board.e)
    circuits_n = pick_compatible_precircuits(board.N, wave.S_N, board.e)

    constructed = {}
    for node in board.nodes:
        p, z = by_node[node]
        arena = board.arena_at(node)
        own = frozenset(arena.ground)
        phi, f_m, f_n = {}, set(), set()
        for child in board.children(node):
            f = board.M.dummy(node, child)
            phi[f] = by_node[child][0]
            if phi[f] is M_MINUS and _spanned_from_above(board.N, node, child, wave.S_N, f):
                f_m.add(f)
            if phi[f] is N_MINUS and _spanned_from_above(board.M, node, child, wave.S_M, f):
                f_n.add(f)
        y = z.X & own
        local = Wave(y | f_m | f_n, (z.S_M & y) | f_m, (z.S_N & y) | f_n)
        c_m = c_n = None
        if p in NEEDS_M_CIRCUIT and node in circuits_m:
            c_m = circuits_m[node].circuit_at(node)
        if p in NEEDS_N_CIRCUIT and node in circuits_n:
            c_n = circuits_n[node].circuit_at(node)
        tactic = Tactic(tuple((f, phi[f]) for f in arena.upper), local, c_m, c_n, p)
        constructed[(node, p)] = (tactic, verify_tactic(arena, tactic))

    strategy = Strategy(PACKER)
    stack = [(board.root, promise)]
    while stack:
        node, p = stack.pop()
        if (node, p) in strategy.tactics:
            continue
        if (node, p) not in constructed:
            raise InternalError(f"No tactic was built at node {node} for {p}")
        tactic, verdict = constructed[(node, p)]
        if not verdict:
            raise InternalError(
                f"Tactic built at node {node} does not attain {p}: {verdict.reason}"
            )
        strategy.tactics[(node, p)] = tactic
        strategy.provenance[(node, p)] = "construction"
        for f in tactic.challengeable():
            stack.append((board.child_across(node, f), tactic.assignment[f]))
    return strategy
