"""Waves, cowaves and hindrances for a pair of matroids."""

from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from typing import Optional

from .errors import InternalError, InvalidParameter
from .matroid import MatroidPair, submasks


def _frozen(items: Iterable) -> frozenset:
    if isinstance(items, str):
        return frozenset((items,))
    return frozenset(str(x) for x in items)


@dataclass(frozen=True)
class Wave:
    """A triple ``(X, S_M, S_N)``; validity is relative to a pair."""

    X: frozenset = frozenset()
    S_M: frozenset = frozenset()
    S_N: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "X", _frozen(self.X))
        object.__setattr__(self, "S_M", _frozen(self.S_M))
        object.__setattr__(self, "S_N", _frozen(self.S_N))

    @property
    def focus(self) -> frozenset:
        """Elements of ``X`` on neither side."""
        return self.X - self.S_M - self.S_N

    def masks(self, pair: MatroidPair) -> tuple[int, int, int]:
        return pair.mask(self.X), pair.mask(self.S_M), pair.mask(self.S_N)

    def restrict(self, elements: Iterable) -> "Wave":
        keep = _frozen(elements)
        return type(self)(self.X & keep, self.S_M & keep, self.S_N & keep)

    def to_dict(self) -> dict:
        return {"X": sorted(self.X), "S_M": sorted(self.S_M), "S_N": sorted(self.S_N)}

    def __str__(self) -> str:
        def show(s):
            return "{" + ",".join(sorted(s)) + "}"

        return f"({show(self.X)}, {show(self.S_M)}, {show(self.S_N)})"


class Cowave(Wave):
    """A wave of the dual pair."""


@dataclass(frozen=True)
class Verdict:
    """Result of a check: truthy when it passed, else carries a reason code."""

    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


PASS = Verdict(True)


def from_masks(pair: MatroidPair, x: int, s_m: int, s_n: int, kind=Wave) -> Wave:
    return kind(pair.names(x), pair.names(s_m), pair.names(s_n))


def _check_masks(pair: MatroidPair, x: int, s_m: int, s_n: int) -> Verdict:
    if (s_m | s_n) & ~x:
        return Verdict(False, "side-outside-X")
    if s_m & s_n:
        return Verdict(False, "sides-overlap")
    if pair.M.rank_mask(s_m) != pair.M.rank_mask(x):
        return Verdict(False, "M-side-not-spanning")
    if pair.N.rank_mask(s_n) != pair.N.rank_mask(x):
        return Verdict(False, "N-side-not-spanning")
    return PASS


def verify_wave(pair: MatroidPair, w: Wave) -> Verdict:
    """Check that ``w`` is a wave of ``pair``: disjoint sides spanning ``X``."""
    ground = frozenset(pair.ground)
    if not (w.X | w.S_M | w.S_N) <= ground:
        return Verdict(False, "outside-ground")
    return _check_masks(pair, *w.masks(pair))


def verify_cowave(pair: MatroidPair, w: Wave) -> Verdict:
    return verify_wave(pair.dual(), w)


def is_hindrance(pair: MatroidPair, w: Wave) -> bool:
    return bool(verify_wave(pair, w)) and bool(w.focus)


def is_cohindrance(pair: MatroidPair, w: Wave) -> bool:
    return is_hindrance(pair.dual(), w)


def wave_masks(pair: MatroidPair, within: Optional[int] = None) -> Iterator[tuple[int, int, int]]:
    """All waves as masks in canonical order.

    ``X`` ascends over subsets of ``within``; for each ``X`` the N-side
    ascends over submasks of ``X``, then the M-side over submasks of the rest.
    """
    M, N = pair.M, pair.N
    within = pair.full_mask if within is None else within
    for x in submasks(within):
        rm, rn = M.rank_mask(x), N.rank_mask(x)
        for s_n in submasks(x):
            if N.rank_mask(s_n) != rn:
                continue
            rest = x & ~s_n
            if M.rank_mask(rest) != rm:
                continue
            for s_m in submasks(rest):
                if M.rank_mask(s_m) == rm:
                    yield x, s_m, s_n


def enumerate_waves(pair: MatroidPair, within: Optional[Iterable] = None) -> Iterator[Wave]:
    mask = None if within is None else pair.mask(within)
    for x, s_m, s_n in wave_masks(pair, mask):
        yield from_masks(pair, x, s_m, s_n)


def wave_on_mask(pair: MatroidPair, x: int) -> Optional[tuple[int, int, int]]:
    """Least wave with underlying set ``x`` as masks, or ``None``."""
    M, N = pair.M, pair.N
    rm, rn = M.rank_mask(x), N.rank_mask(x)
    for s_n in submasks(x):
        if N.rank_mask(s_n) != rn or M.rank_mask(x & ~s_n) != rm:
            continue
        for s_m in submasks(x & ~s_n):
            if M.rank_mask(s_m) == rm:
                return x, s_m, s_n
    return None


def find_wave_on(pair: MatroidPair, X: Iterable) -> Optional[Wave]:
    """The least wave whose underlying set is exactly ``X``."""
    found = wave_on_mask(pair, pair.mask(X))
    return None if found is None else from_masks(pair, *found)


def join_masks(w1: tuple[int, int, int], w2: tuple[int, int, int]) -> tuple[int, int, int]:
    x, s_m, s_n = w1
    y, t_m, t_n = w2
    return x | y, s_m | (t_m & ~x), s_n | (t_n & ~x)


def join_waves(pair: MatroidPair, w1: Wave, w2: Wave) -> Wave:
    """``w1 ∘ w2``: the union wave keeping ``w1``'s sides on its own set."""
    for name, w in (("first", w1), ("second", w2)):
        verdict = verify_wave(pair, w)
        if not verdict:
            raise InvalidParameter(f"The {name} argument is not a wave: {verdict.reason}")
    joined = join_masks(w1.masks(pair), w2.masks(pair))
    if not _check_masks(pair, *joined):
        raise InternalError(f"Join of {w1} and {w2} is not a wave")
    return from_masks(pair, *joined)


def maximal_wave_masks(pair: MatroidPair, within: Optional[int] = None) -> tuple[int, int, int]:
    result = (0, 0, 0)
    within = pair.full_mask if within is None else within
    for x in submasks(within):
        if x & ~result[0] == 0:
            continue
        found = wave_on_mask(pair, x)
        if found is not None:
            result = join_masks(result, found)
    return result


def maximal_wave(pair: MatroidPair) -> Wave:
    """A wave covering every element that lies in some wave."""
    return from_masks(pair, *maximal_wave_masks(pair))


def maximal_wave_avoiding(pair: MatroidPair, element: str) -> Wave:
    """The maximal wave among waves not containing ``element``."""
    return from_masks(pair, *maximal_wave_masks(pair, pair.full_mask & ~pair.mask(element)))


def stack_waves(pair: MatroidPair, w: Wave, upper: Wave) -> Wave:
    """Stack a wave of ``(M/X, N/X)`` onto the wave ``w`` with underlying set ``X``."""
    verdict = verify_wave(pair, w)
    if not verdict:
        raise InvalidParameter(f"Base is not a wave: {verdict.reason}")
    contracted = pair.minor(contract_m=w.X)
    verdict = verify_wave(contracted, upper)
    if not verdict:
        raise InvalidParameter(f"Upper wave is not a wave of the contraction: {verdict.reason}")
    stacked = Wave(w.X | upper.X, w.S_M | upper.S_M, w.S_N | upper.S_N)
    if not verify_wave(pair, stacked):
        raise InternalError(f"Stacking {upper} onto {w} did not give a wave")
    return stacked


def normalize_wave_to_bases(pair: MatroidPair, w: Wave) -> Wave:
    """Shrink both sides of a wave to bases of the restrictions to ``X``."""
    x, s_m, s_n = w.masks(pair)
    if not _check_masks(pair, x, s_m, s_n):
        raise InvalidParameter(f"{w} is not a wave")
    sides = []
    for matroid, side in ((pair.M, s_m), (pair.N, s_n)):
        basis = 0
        for i in range(len(pair.ground)):
            bit = 1 << i
            if side & bit and matroid.independent_mask(basis | bit):
                basis |= bit
        sides.append(basis)
    return from_masks(pair, x, sides[0], sides[1])


def spans_element(matroid, x_mask: int, bit: int) -> bool:
    """``bit`` lies outside ``x_mask`` and in its closure."""
    return not x_mask & bit and matroid.spans_mask(x_mask, bit)


def find_wave(pair: MatroidPair, accept, within: Optional[int] = None) -> Optional[Wave]:
    """The first wave in canonical order whose masks satisfy ``accept``."""
    for masks in wave_masks(pair, within):
        if accept(*masks):
            return from_masks(pair, *masks)
    return None


def find_cohindrance(pair: MatroidPair, e: str) -> Optional[Cowave]:
    """The least cowave of ``pair`` focusing on ``e``, or ``None``."""
    dual = pair.dual()
    bit = dual.mask(e)
    for x in submasks(dual.full_mask):
        if not x & bit:
            continue
        rest = x & ~bit
        rm, rn = dual.M.rank_mask(x), dual.N.rank_mask(x)
        for s_n in submasks(rest):
            if dual.N.rank_mask(s_n) != rn or dual.M.rank_mask(rest & ~s_n) != rm:
                continue
            for s_m in submasks(rest & ~s_n):
                if dual.M.rank_mask(s_m) == rm:
                    return from_masks(dual, x, s_m, s_n, kind=Cowave)
    return None
