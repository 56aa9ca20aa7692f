"""Exchange chains between an M-independent and an N-independent set."""

from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass
from typing import Optional

from .errors import InternalError, InvalidParameter
from .matroid import Matroid, MatroidPair, iter_bits, submasks

EVEN = "even"
ODD = "odd"


@dataclass(frozen=True)
class ExchangeChain:
    """Elements ``y_0 .. y_n`` with the circuit used at every step."""

    nodes: tuple
    parity: str
    witnesses: tuple = ()

    @property
    def length(self) -> int:
        return len(self.nodes) - 1

    @property
    def start(self) -> str:
        return self.nodes[0]

    @property
    def end(self) -> str:
        return self.nodes[-1]

    def to_dict(self) -> dict:
        return {
            "nodes": list(self.nodes),
            "parity": self.parity,
            "witnesses": [sorted(c) for c in self.witnesses],
        }


def _side(parity: str, step: int) -> str:
    """Which matroid step ``step`` uses: "M" or "N"."""
    uses_m = (step % 2 == 0) == (parity == EVEN)
    return "M" if uses_m else "N"


def fundamental_circuit(matroid: Matroid, independent: int, bit: int) -> Optional[int]:
    """The unique circuit inside ``independent + bit``, if there is one."""
    if independent & bit or matroid.independent_mask(independent | bit):
        return None
    for c in matroid.circuits_through(bit, independent | bit):
        return c
    return None


def _check_independent(pair: MatroidPair, i_m: int, i_n: int) -> None:
    if not pair.M.independent_mask(i_m):
        raise InvalidParameter(f"{sorted(pair.names(i_m))} is not independent in M")
    if not pair.N.independent_mask(i_n):
        raise InvalidParameter(f"{sorted(pair.names(i_n))} is not independent in N")


def find_exchange_chain(
    pair: MatroidPair,
    I_M: Iterable,
    I_N: Iterable,
    y: str,
    x: str,
    parity: str = EVEN,
) -> Optional[ExchangeChain]:
    """Shortest chain from ``y`` to ``x``, lexicographically least among those.

    Breadth-first over states (element, step parity). Step ``i`` of an even
    chain uses the M-circuit of ``y_i`` in ``I_M + y_i`` when ``i`` is even
    and the N-circuit in ``I_N + y_i`` when ``i`` is odd.
    """
    if parity not in (EVEN, ODD):
        raise InvalidParameter(f"Parity must be {EVEN!r} or {ODD!r}, got {parity!r}")
    i_m, i_n = pair.mask(I_M), pair.mask(I_N)
    _check_independent(pair, i_m, i_n)
    start, target = pair.mask(y), pair.mask(x)
    if not target & (i_m | i_n):
        raise InvalidParameter(f"Target {x} lies in neither independent set")
    if start == target:
        return ExchangeChain((y,), parity, ())

    independents = {"M": (pair.M, i_m), "N": (pair.N, i_n)}
    parent = {(start, 0): None}
    circuit_at = {}
    queue = deque([(start, 0)])
    while queue:
        bit, step = queue.popleft()
        matroid, independent = independents[_side(parity, step)]
        circuit = fundamental_circuit(matroid, independent, bit)
        if circuit is None:
            continue
        for nxt in iter_bits(circuit & ~bit):
            state = (nxt, (step + 1) % 2)
            if state in parent:
                continue
            parent[state] = (bit, step)
            circuit_at[state] = circuit
            if nxt == target:
                return _unwind(pair, parity, state, parent, circuit_at)
            queue.append(state)
    return None


def _unwind(pair, parity, state, parent, circuit_at) -> ExchangeChain:
    nodes, witnesses = [], []
    while state is not None:
        nodes.append(state[0])
        if state in circuit_at:
            witnesses.append(circuit_at[state])
        state = parent[state]
    nodes.reverse()
    witnesses.reverse()
    return ExchangeChain(
        tuple(next(iter(pair.names(b))) for b in nodes),
        parity,
        tuple(pair.names(c) for c in witnesses),
    )


def verify_chain(pair: MatroidPair, I_M: Iterable, I_N: Iterable, chain: ExchangeChain) -> bool:
    """Check the chain conditions step by step, witnesses included."""
    i_m, i_n = pair.mask(I_M), pair.mask(I_N)
    if not (pair.M.independent_mask(i_m) and pair.N.independent_mask(i_n)):
        return False
    if not chain.nodes or chain.parity not in (EVEN, ODD):
        return False
    if not pair.mask(chain.end) & (i_m | i_n):
        return False
    if len(chain.witnesses) != chain.length:
        return False
    for step in range(chain.length):
        here, there = pair.mask(chain.nodes[step]), pair.mask(chain.nodes[step + 1])
        if here == there:
            return False
        side = _side(chain.parity, step)
        matroid, independent = (pair.M, i_m) if side == "M" else (pair.N, i_n)
        circuit = pair.mask(chain.witnesses[step])
        if circuit not in matroid.circuit_masks:
            return False
        if (here | there) & ~circuit or circuit & ~(independent | here):
            return False
    return True


def augment_chain(
    pair: MatroidPair, B_M: Iterable, B_N: Iterable, chain: ExchangeChain
) -> tuple[frozenset, frozenset]:
    """Run a chain from ``z`` to ``f``: new sets with union ``B_M ∪ B_N + z - f``.

    Both closures are preserved. The exchange is simultaneous along the
    chain; when that does not meet the postconditions (``f`` in both sets)
    the sets are re-based by exhaustive search.
    """
    if not verify_chain(pair, B_M, B_N, chain):
        raise InvalidParameter(f"Not a valid exchange chain: {list(chain.nodes)}")
    b_m, b_n = pair.mask(B_M), pair.mask(B_N)
    if chain.length == 0:
        return pair.names(b_m), pair.names(b_n)

    bits = [pair.mask(y) for y in chain.nodes]
    new = {"M": b_m, "N": b_n}
    for step in range(chain.length):
        side = _side(chain.parity, step)
        new[side] = (new[side] | bits[step]) & ~bits[step + 1]
    target = (b_m | b_n | bits[0]) & ~bits[-1]
    if _meets_postconditions(pair, b_m, b_n, new["M"], new["N"], target):
        return pair.names(new["M"]), pair.names(new["N"])
    found = _rebase(pair, b_m, b_n, target)
    if found is None:
        raise InternalError(f"No augmentation along {list(chain.nodes)}")
    return pair.names(found[0]), pair.names(found[1])


def _meets_postconditions(pair, b_m, b_n, new_m, new_n, target) -> bool:
    M, N = pair.M, pair.N
    return (
        new_m | new_n == target
        and M.independent_mask(new_m)
        and N.independent_mask(new_n)
        and M.closure_mask(new_m) == M.closure_mask(b_m)
        and N.closure_mask(new_n) == N.closure_mask(b_n)
    )


def _rebase(pair: MatroidPair, b_m: int, b_n: int, target: int) -> Optional[tuple[int, int]]:
    M, N = pair.M, pair.N
    span_m, span_n = M.closure_mask(b_m), N.closure_mask(b_n)
    r_m, r_n = M.rank_mask(b_m), N.rank_mask(b_n)
    pool_n = target & span_n
    if N.rank_mask(pool_n) != r_n:
        return None
    for new_m in submasks(target & span_m):
        if new_m.bit_count() != r_m or not M.independent_mask(new_m):
            continue
        new_n = target & ~new_m
        if new_n & ~span_n or not N.independent_mask(new_n):
            continue
        for bit in iter_bits(pool_n & ~new_n):
            if N.independent_mask(new_n | bit):
                new_n |= bit
        if N.rank_mask(new_n) == r_n:
            return new_m, new_n
    return None
