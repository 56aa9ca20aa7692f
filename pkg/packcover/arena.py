"""Arenas, tactics attaining promises, and the removal of upper edges."""

from collections.abc import Callable, Iterable, Iterator, Mapping
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Optional, Union

from .errors import InternalError, InvalidParameter, TheoremViolation
from .matroid import Matroid, MatroidPair
from .promises import (
    BOT,
    CANONICAL_VALUES,
    M_MINUS,
    M_PLUS,
    N_MINUS,
    N_PLUS,
    NEEDS_M_CIRCUIT,
    NEEDS_N_CIRCUIT,
    PLAIN,
    TOP,
    Promise,
    format_promises,
    is_blocking,
    up_closure,
)
from .waves import (
    PASS,
    Cowave,
    Verdict,
    Wave,
    from_masks,
    maximal_wave_avoiding,
    spans_element,
    verify_wave,
    wave_masks,
)

PhiLike = Union[Mapping, Iterable]


@dataclass(frozen=True)
class Arena:
    """A pair of matroids with upper edges ``F`` and a lower edge ``e``."""

    pair: MatroidPair
    F: frozenset
    e: str

    def __post_init__(self):
        upper = (self.F,) if isinstance(self.F, str) else self.F
        object.__setattr__(self, "F", frozenset(str(f) for f in upper))
        ground = set(self.pair.ground)
        if self.e not in ground:
            raise InvalidParameter(f"Lower edge {self.e} is not in the ground set")
        if not self.F <= ground:
            raise InvalidParameter(f"Upper edges {sorted(self.F - ground)} are not in the ground set")
        if self.e in self.F:
            raise InvalidParameter(f"Lower edge {self.e} cannot also be an upper edge")

    @property
    def M(self) -> Matroid:
        return self.pair.M

    @property
    def N(self) -> Matroid:
        return self.pair.N

    @property
    def ground(self) -> tuple:
        return self.pair.ground

    @cached_property
    def upper(self) -> tuple:
        """Upper edges in ground order."""
        return tuple(x for x in self.pair.ground if x in self.F)

    def dual(self) -> "Arena":
        return Arena(self.pair.dual(), self.F, self.e)


def make_arena(M: Matroid, N: Matroid, F: Iterable = (), e: str = "e") -> Arena:
    return Arena(MatroidPair(M, N), frozenset(F), e)


def _preimage(phi: Mapping, promises) -> frozenset:
    return frozenset(f for f, p in phi.items() if p in promises)


def _phi_map(arena: Arena, phi: Optional[PhiLike], starred: bool = False) -> dict:
    """Normalise ``phi`` to a dict on exactly ``F`` with promises of one kind."""
    if phi is None:
        phi = {}
    items = dict(phi.items() if isinstance(phi, Mapping) else phi)
    result = {}
    for f, p in items.items():
        promise = p if isinstance(p, Promise) else Promise.parse(str(p))
        if promise.starred != starred:
            kind = "starred" if starred else "plain"
            raise InvalidParameter(f"Promise {promise} at {f} is not {kind}")
        result[str(f)] = promise
    if set(result) != arena.F:
        raise InvalidParameter(
            f"Assignment is defined on {sorted(result)}, upper edges are {sorted(arena.F)}"
        )
    return result


def derive_relying_pair(arena: Arena, phi: Optional[PhiLike] = None) -> MatroidPair:
    """The pair ``(M', N')`` a wave relying on ``phi`` lives in.

    ``M' = M / phi^-1{top, M+} \\ phi^-1{bot, N+}`` and symmetrically for N;
    edges promised M- or N- stay as ordinary elements.
    """
    phi = _phi_map(arena, phi)
    if not phi:
        return arena.pair
    return arena.pair.minor(
        contract_m=_preimage(phi, {TOP, M_PLUS}),
        delete_m=_preimage(phi, {BOT, N_PLUS}),
        contract_n=_preimage(phi, {TOP, N_PLUS}),
        delete_n=_preimage(phi, {BOT, M_PLUS}),
    )


def _fulfils_masks(pair: MatroidPair, x: int, s_m: int, s_n: int, bit: int, promise: Promise) -> bool:
    if promise is BOT:
        return True
    if promise is M_MINUS:
        return bool(s_n & bit)
    if promise is N_MINUS:
        return bool(s_m & bit)
    m_spanned = spans_element(pair.M, x, bit)
    if promise is M_PLUS:
        return m_spanned
    n_spanned = spans_element(pair.N, x, bit)
    if promise is N_PLUS:
        return n_spanned
    return m_spanned and n_spanned


def fulfils(arena: Arena, w: Wave, promise: Promise, phi: Optional[PhiLike] = None) -> bool:
    """Whether ``w`` (relying on ``phi``) fulfils ``promise`` at the lower edge.

    Starred promises are fulfilled by cowaves, which are checked as waves of
    the dual arena.
    """
    if promise.starred:
        if not isinstance(w, Cowave):
            raise InvalidParameter(f"{promise} is fulfilled by cowaves, got a wave")
        plain_phi = {f: p.base for f, p in _phi_map(arena, phi, starred=True).items()}
        return fulfils(arena.dual(), Wave(w.X, w.S_M, w.S_N), promise.base, plain_phi)
    if isinstance(w, Cowave):
        raise InvalidParameter(f"{promise} is fulfilled by waves, got a cowave")
    pair = derive_relying_pair(arena, phi)
    if not verify_wave(pair, w):
        return False
    return _fulfils_masks(pair, *w.masks(pair), pair.mask(arena.e), promise)


def attainable_promises(pair: MatroidPair, e: str) -> frozenset:
    """Plain promises fulfilled at ``e`` by some wave of ``pair``."""
    bit = pair.mask(e)
    found = {BOT}
    x = pair.mask(maximal_wave_avoiding(pair, e).X)
    m_spanned = spans_element(pair.M, x, bit)
    n_spanned = spans_element(pair.N, x, bit)
    if m_spanned:
        found.add(M_PLUS)
    if n_spanned:
        found.add(N_PLUS)
    if m_spanned and n_spanned:
        found.add(TOP)
    for _, s_m, s_n in wave_masks(pair):
        if s_n & bit:
            found.add(M_MINUS)
        if s_m & bit:
            found.add(N_MINUS)
        if M_MINUS in found and N_MINUS in found:
            break
    return frozenset(found)


def attainable_set(arena: Arena) -> frozenset:
    """Promises and co-promises attainable in an arena without upper edges."""
    if arena.F:
        raise InvalidParameter("Attainable sets are defined for arenas without upper edges")
    plain = attainable_promises(arena.pair, arena.e)
    starred = attainable_promises(arena.pair.dual(), arena.e)
    return plain | frozenset(p.star() for p in starred)


# -- tactics ---------------------------------------------------------------------


@dataclass(frozen=True)
class Tactic:
    """An assignment of promises to the upper edges, a wave relying on it,
    and the witness circuits.

    ``phi`` is a tuple of ``(edge, promise)`` pairs in ground order. A
    cotactic has starred promises and a ``Cowave``; its circuits are
    circuits of the dual matroids.
    """

    phi: tuple
    wave: Wave
    C_M: Optional[frozenset]
    C_N: Optional[frozenset]
    attained: Promise

    @property
    def assignment(self) -> dict:
        return dict(self.phi)

    @property
    def starred(self) -> bool:
        return self.attained.starred

    def challengeable(self) -> tuple:
        """Upper edges Coverina may challenge: those not promised bottom."""
        return tuple(f for f, p in self.phi if p.base is not BOT)

    def strong(self, f: str) -> tuple[bool, bool]:
        """Whether a challenge at ``f`` is M-strong and N-strong.

        For a cotactic these read M*-strong and N*-strong.
        """
        promise = self.assignment[f].base
        return (
            promise in NEEDS_M_CIRCUIT and self.C_M is not None and f in self.C_M,
            promise in NEEDS_N_CIRCUIT and self.C_N is not None and f in self.C_N,
        )

    def dualized(self) -> "Tactic":
        """The same data read in the dual arena: every promise starred or unstarred."""
        kind = Wave if isinstance(self.wave, Cowave) else Cowave
        return Tactic(
            tuple((f, p.star()) for f, p in self.phi),
            kind(self.wave.X, self.wave.S_M, self.wave.S_N),
            self.C_M,
            self.C_N,
            self.attained.star(),
        )

    def key(self, arena: Arena) -> tuple:
        """Canonical sort key; enumeration order agrees with it."""
        mask = arena.pair.mask
        return (
            tuple(p.index for _, p in self.phi),
            mask(self.wave.X),
            mask(self.wave.S_N),
            mask(self.wave.S_M),
            0 if self.C_M is None else mask(self.C_M),
            0 if self.C_N is None else mask(self.C_N),
        )

    def to_dict(self) -> dict:
        return {
            "attained": self.attained.label,
            "phi": {f: p.label for f, p in self.phi},
            "kind": "cowave" if isinstance(self.wave, Cowave) else "wave",
            "wave": self.wave.to_dict(),
            "C_M": None if self.C_M is None else sorted(self.C_M),
            "C_N": None if self.C_N is None else sorted(self.C_N),
        }


def _ordered_phi(arena: Arena, phi: Mapping) -> tuple:
    return tuple((f, phi[f]) for f in arena.upper)


def _verify_plain(arena: Arena, tactic: Tactic, normalized: bool) -> Verdict:
    try:
        phi = _phi_map(arena, tactic.phi)
    except InvalidParameter:
        return Verdict(False, "phi-not-total")
    pair = derive_relying_pair(arena, phi)
    w = tactic.wave
    verdict = verify_wave(pair, w)
    if not verdict:
        return Verdict(False, f"wave-{verdict.reason}")
    if w.S_M & _preimage(phi, {N_PLUS}) or w.S_N & _preimage(phi, {M_PLUS}):
        return Verdict(False, "side-uses-opposite-promise")
    if not _fulfils_masks(pair, *w.masks(pair), pair.mask(arena.e), tactic.attained):
        return Verdict(False, "does-not-fulfil")
    if normalized and not (
        _preimage(phi, {M_MINUS}) <= w.S_M and _preimage(phi, {N_MINUS}) <= w.S_N
    ):
        return Verdict(False, "not-normalized")
    sides = (
        ("M", arena.M, tactic.C_M, NEEDS_M_CIRCUIT, w.S_M),
        ("N", arena.N, tactic.C_N, NEEDS_N_CIRCUIT, w.S_N),
    )
    for name, matroid, circuit, needs, side in sides:
        if tactic.attained not in needs:
            if circuit is not None:
                return Verdict(False, f"{name}-circuit-unexpected")
            continue
        if circuit is None:
            return Verdict(False, f"{name}-circuit-missing")
        allowed = side | _preimage(phi, needs) | {arena.e}
        if arena.e not in circuit or not circuit <= allowed:
            return Verdict(False, f"{name}-circuit-outside-support")
        if matroid.mask(circuit) not in matroid.circuit_masks:
            return Verdict(False, f"{name}-circuit-not-a-circuit")
    return PASS


def verify_tactic(arena: Arena, tactic: Tactic, normalized: bool = True) -> Verdict:
    """Check that ``tactic`` attains its promise at the lower edge of ``arena``.

    With ``normalized`` the edges promised M- (N-) must also lie on the
    M-side (N-side) of the wave.
    """
    promises = [p for _, p in tactic.phi]
    if any(p.starred != tactic.starred for p in promises):
        return Verdict(False, "mixed-promises")
    if tactic.starred != isinstance(tactic.wave, Cowave):
        return Verdict(False, "wave-kind-mismatch")
    if tactic.starred:
        return _verify_plain(arena.dual(), tactic.dualized(), normalized)
    return _verify_plain(arena, tactic, normalized)


def phi_assignments(arena: Arena, allowed: Optional[Mapping] = None) -> Iterator[tuple]:
    """Every plain assignment on the upper edges, lexicographically.

    ``allowed`` optionally restricts the promises available at an edge.
    """
    choices = []
    for f in arena.upper:
        options = PLAIN if allowed is None else [p for p in PLAIN if p in allowed.get(f, PLAIN)]
        choices.append(options)
    for values in product(*choices):
        yield tuple(zip(arena.upper, values))


def _witness_circuits(matroid: Matroid, e: str, allowed: frozenset) -> list:
    within = matroid.mask(allowed | {e})
    return [matroid.names(c) for c in matroid.circuits_through(matroid.bit(e), within)]


def _tactics_for(arena: Arena, phi: tuple, promise: Promise, normalized: bool) -> Iterator[Tactic]:
    phi_map = dict(phi)
    pair = derive_relying_pair(arena, phi_map)
    bit = pair.mask(arena.e)
    m_minus = pair.mask(_preimage(phi_map, {M_MINUS}))
    n_minus = pair.mask(_preimage(phi_map, {N_MINUS}))
    for x, s_m, s_n in wave_masks(pair):
        if normalized and (m_minus & ~s_m or n_minus & ~s_n):
            continue
        if not _fulfils_masks(pair, x, s_m, s_n, bit, promise):
            continue
        wave = from_masks(pair, x, s_m, s_n)
        options = []
        for matroid, needs, side in (
            (arena.M, NEEDS_M_CIRCUIT, wave.S_M),
            (arena.N, NEEDS_N_CIRCUIT, wave.S_N),
        ):
            if promise in needs:
                options.append(
                    _witness_circuits(matroid, arena.e, side | _preimage(phi_map, needs))
                )
            else:
                options.append([None])
        for c_m, c_n in product(*options):
            yield Tactic(phi, wave, c_m, c_n, promise)


def enumerate_tactics(
    arena: Arena,
    promise: Promise,
    normalized: bool = True,
    phi: Optional[PhiLike] = None,
) -> Iterator[Tactic]:
    """All tactics attaining ``promise`` at the lower edge, in canonical order.

    Starred promises yield cotactics. Passing ``phi`` fixes the assignment.
    """
    if promise.starred:
        fixed = None
        if phi is not None:
            fixed = {f: p.base for f, p in _phi_map(arena, phi, starred=True).items()}
        for tactic in enumerate_tactics(arena.dual(), promise.base, normalized, fixed):
            yield tactic.dualized()
        return
    if phi is None:
        assignments = phi_assignments(arena)
    else:
        assignments = iter((_ordered_phi(arena, _phi_map(arena, phi)),))
    for assignment in assignments:
        yield from _tactics_for(arena, assignment, promise, normalized)


def first_tactic(
    arena: Arena,
    promise: Promise,
    phi: Optional[PhiLike] = None,
    normalized: bool = True,
) -> Optional[Tactic]:
    """The least tactic attaining ``promise``, or ``None``."""
    return next(enumerate_tactics(arena, promise, normalized, phi), None)


# -- removing upper edges ----------------------------------------------------------


@dataclass(frozen=True)
class Reduction:
    """An arena with the non-blocking upper edges contracted or deleted.

    ``groups[i]`` holds the edges whose assigned set misses the ``i``-th
    canonical value first; the last group stays as ordinary elements.
    """

    original: Arena
    reduced: Arena
    groups: tuple
    rho: tuple

    @property
    def removed(self) -> frozenset:
        return frozenset().union(*self.groups[:4])

    def to_dict(self) -> dict:
        return {
            "kept": sorted(self.reduced.F),
            "groups": [sorted(g) for g in self.groups],
        }


def reduce_arena(arena: Arena, rho: Mapping) -> Reduction:
    """Keep the upper edges whose set is blocking and remove the others.

    ``M' = M/(F1 ∪ F3) \\ (F2 ∪ F4)`` and ``N' = N/(F1 ∪ F4) \\ (F2 ∪ F3)``.
    """
    if set(rho) != arena.F:
        raise InvalidParameter(
            f"rho is defined on {sorted(rho)}, upper edges are {sorted(arena.F)}"
        )
    groups = [set() for _ in CANONICAL_VALUES]
    kept = set()
    for f in arena.upper:
        value = frozenset(rho[f])
        if is_blocking(value):
            kept.add(f)
            continue
        first = next(i for i, v in enumerate(CANONICAL_VALUES) if not value & v)
        groups[first].add(f)
    f1, f2, f3, f4, f5 = (frozenset(g) for g in groups)
    pair = arena.pair.minor(
        contract_m=f1 | f3, delete_m=f2 | f4, contract_n=f1 | f4, delete_n=f2 | f3
    )
    return Reduction(
        arena,
        Arena(pair, frozenset(kept), arena.e),
        (f1, f2, f3, f4, f5),
        tuple((f, frozenset(rho[f])) for f in arena.upper),
    )


# Values given to F1..F4 by a lifted tactic, before and after starring.
_PLAIN_LIFT = (TOP, BOT, M_PLUS, N_PLUS)
_STARRED_LIFT = (BOT, TOP, N_PLUS, M_PLUS)


def _lift_circuit(matroid: Matroid, circuit: Optional[frozenset], contracted: frozenset):
    if circuit is None:
        return None
    target = matroid.mask(circuit)
    extra = matroid.mask(contracted)
    for c in matroid.circuit_masks:
        if c & ~extra == target:
            return matroid.names(c)
    raise InternalError(f"No circuit of the original matroid restricts to {sorted(circuit)}")


def lift_tactic(reduction: Reduction, tactic: Tactic) -> Tactic:
    """A tactic of the original arena extending a tactic of the reduced one."""
    verdict = verify_tactic(reduction.reduced, tactic, normalized=False)
    if not verdict:
        raise InvalidParameter(f"Not a tactic of the reduced arena: {verdict.reason}")
    starred = tactic.starred
    working = tactic.dualized() if starred else tactic
    original = reduction.original.dual() if starred else reduction.original

    phi = working.assignment
    new = {}
    for group, value in zip(reduction.groups[:4], _STARRED_LIFT if starred else _PLAIN_LIFT):
        for f in group:
            new[f] = value
    for f in reduction.groups[4]:
        new[f] = M_MINUS if f in working.wave.S_M else N_MINUS
    phi.update(new)

    lifted = Tactic(
        _ordered_phi(original, phi),
        working.wave,
        _lift_circuit(original.M, working.C_M, _preimage(new, {TOP, M_PLUS})),
        _lift_circuit(original.N, working.C_N, _preimage(new, {TOP, N_PLUS})),
        working.attained,
    )
    verdict = verify_tactic(original, lifted, normalized=False)
    if not verdict:
        raise InternalError(f"Lifted tactic fails verification: {verdict.reason}")
    if starred:
        lifted = lifted.dualized()
    promised = lifted.assignment
    for f, value in reduction.rho:
        if f not in reduction.reduced.F and promised[f] in value:
            raise InternalError(f"Lifted promise {promised[f]} at {f} lies in its assigned set")
    return lifted


# -- challengers -------------------------------------------------------------------

Challenger = Callable[[Tactic], str]


def challenge_sets(
    arena: Arena,
    challengers: Mapping,
    normalized: bool = False,
    tactics: Optional[Mapping] = None,
) -> dict:
    """For each upper edge, the up-closure of the promises challenged there.

    ``tactics`` optionally supplies the tactic lists per promise.
    """
    found = {f: set() for f in arena.upper}
    for promise, gamma in challengers.items():
        listed = enumerate_tactics(arena, promise, normalized) if tactics is None else tactics[promise]
        for tactic in listed:
            f = gamma(tactic)
            if f not in arena.F:
                raise InvalidParameter(f"Challenger to {promise} picked {f!r}, not an upper edge")
            found[f].add(tactic.assignment[f])
    return {f: up_closure(v) for f, v in found.items()}


def verify_blocklem(
    arena: Arena, blocking: Iterable, challengers: Mapping, tactics: Optional[Mapping] = None
) -> str:
    """Find an upper edge at which the challenged promises form a blocking set.

    ``challengers`` maps every promise of ``blocking`` to a function from
    tactics to upper edges.
    """
    blocking = frozenset(blocking)
    if not is_blocking(blocking):
        raise InvalidParameter(f"{format_promises(blocking)} is not blocking")
    if set(challengers) != blocking:
        raise InvalidParameter("Need exactly one challenger per promise of the blocking set")
    sets = challenge_sets(arena, challengers, tactics=tactics)
    for f in arena.upper:
        if is_blocking(sets[f]):
            return f
    raise TheoremViolation(
        f"No upper edge carries a blocking set for {format_promises(blocking)}",
        instance={"arena": arena, "sets": sets},
    )
