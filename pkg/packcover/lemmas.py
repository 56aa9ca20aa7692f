"""Witness searches for the finite wave lemmas.

Every search tries the outcomes in their listed order, subsets of the
auxiliary set by ascending mask and waves in canonical order, and returns
the first witness that re-verifies. When no outcome has a witness the
instance is reported through ``TheoremViolation``.
"""

from collections.abc import Iterable
from dataclasses import dataclass
from typing import Callable, Optional

from .errors import InvalidParameter, TheoremViolation
from .matroid import Matroid, MatroidPair, submasks
from .waves import (
    Cowave,
    Wave,
    find_wave,
    find_wave_on,
    from_masks,
    is_hindrance,
    maximal_wave_avoiding,
    spans_element,
    verify_wave,
    wave_masks,
)


@dataclass(frozen=True)
class LemmaOutcome:
    """Which outcome held, and the witness for it."""

    lemma: str
    case_index: int
    witness: Wave
    pair: MatroidPair
    auxiliary: frozenset = frozenset()
    auxiliary_name: str = ""
    circuit: Optional[frozenset] = None

    @property
    def is_cowave(self) -> bool:
        return isinstance(self.witness, Cowave)

    def reverify(self) -> bool:
        """Re-check the witness against the minor pair it lives in."""
        pair = self.pair.dual() if self.is_cowave else self.pair
        return bool(verify_wave(pair, self.witness))

    def to_dict(self) -> dict:
        result = {
            "lemma": self.lemma,
            "case": self.case_index,
            "kind": "cowave" if self.is_cowave else "wave",
            "witness": self.witness.to_dict(),
        }
        if self.auxiliary_name:
            result[self.auxiliary_name] = sorted(self.auxiliary)
        if self.circuit is not None:
            result["circuit"] = sorted(self.circuit)
        return result


def _check_disjoint(M: Matroid, e: str, **sets) -> dict:
    masks = {}
    seen = M.bit(e)
    for name, subset in sets.items():
        mask = M.mask(subset)
        if mask & seen:
            raise InvalidParameter(f"{name} meets an earlier set or the element {e}")
        seen |= mask
        masks[name] = mask
    return masks


def _pair(M: Matroid, N: Matroid) -> MatroidPair:
    if M.ground != N.ground:
        raise InvalidParameter("M and N need the same ground set in the same order")
    return MatroidPair(M, N)


def _spanning_wave(pair: MatroidPair, e: str, side: str) -> Optional[Wave]:
    """A wave not containing ``e`` whose closure on ``side`` contains ``e``."""
    wave = maximal_wave_avoiding(pair, e)
    matroid = pair.M if side == "M" else pair.N
    if spans_element(matroid, pair.mask(wave.X), pair.mask(e)):
        return wave
    return None


def _cohindrance_with_cocircuit(
    minor_pair: MatroidPair, e: str, M: Matroid, avoid: int
) -> Optional[tuple[Cowave, frozenset]]:
    """Cohindrance focusing on ``e`` plus an M-cocircuit ``b`` inside ``T^M + e``.

    ``b`` is a cocircuit of ``M`` avoiding ``avoid``. The M-side is taken as
    large as possible, ``Y - e - T^N``, since cospanning sets are closed
    under supersets.
    """
    dual = minor_pair.dual()
    bit = dual.mask(e)
    e_bit = M.bit(e)
    cocircuits = [b for b in M.dual().circuit_masks if b & e_bit and not b & avoid]
    if not cocircuits:
        return None
    for y in submasks(dual.full_mask):
        if not y & bit:
            continue
        rest = y & ~bit
        rm, rn = dual.M.rank_mask(y), dual.N.rank_mask(y)
        for t_n in submasks(rest):
            t_m = rest & ~t_n
            if dual.N.rank_mask(t_n) != rn or dual.M.rank_mask(t_m) != rm:
                continue
            allowed = M.mask(dual.names(t_m)) | e_bit
            for b in cocircuits:
                if b & ~allowed == 0:
                    return from_masks(dual, y, t_m, t_n, kind=Cowave), M.names(b)
    return None


def _finish(outcome: LemmaOutcome) -> LemmaOutcome:
    if not outcome.reverify():
        raise TheoremViolation(
            f"{outcome.lemma}: witness for outcome {outcome.case_index} fails to re-verify",
            instance=outcome,
        )
    return outcome


def verify_lemma27(
    M: Matroid, N: Matroid, G: Iterable, H: Iterable, J: Iterable, e: str
) -> LemmaOutcome:
    """Wave with ``e`` on the N-side, N-spanning wave, or cohindrance plus cocircuit."""
    pair = _pair(M, N)
    masks = _check_disjoint(M, e, G=G, H=H, J=J)
    g, h, j = masks["G"], masks["H"], masks["J"]
    names = M.names

    first = pair.minor(contract_m=names(h | j))
    e_bit = first.mask(e)
    wave = find_wave(first, lambda x, s_m, s_n: s_n & e_bit)
    if wave is not None:
        return _finish(LemmaOutcome("lemma27", 1, wave, first))

    second = pair.minor(
        contract_m=(), delete_m=names(g | j), contract_n=names(j), delete_n=names(g)
    )
    wave = _spanning_wave(second, e, "N")
    if wave is not None:
        return _finish(LemmaOutcome("lemma27", 2, wave, second))

    for g_sub in submasks(g):
        third = pair.minor(
            contract_m=(),
            delete_m=names(g_sub | j),
            contract_n=names(j),
            delete_n=names(g_sub),
        )
        found = _cohindrance_with_cocircuit(third, e, M, h)
        if found is not None:
            cowave, b = found
            return _finish(
                LemmaOutcome("lemma27", 3, cowave, third, names(g_sub), "G'", b)
            )

    raise TheoremViolation(
        f"lemma27: no outcome for G={sorted(names(g))}, H={sorted(names(h))}, "
        f"J={sorted(names(j))}, e={e}",
        instance={"pair": pair, "G": names(g), "H": names(h), "J": names(j), "e": e},
    )


def _wave_with_n_circuit(
    pair: MatroidPair, N: Matroid, e: str, avoid: frozenset
) -> Optional[tuple[Wave, frozenset]]:
    """Wave with ``e`` on the M-side and a circuit ``o`` of ``N`` with ``e ∈ o ⊆ S^N + e``.

    ``o`` avoids ``avoid``, which holds H and the contracted part of J.
    """
    e_bit = pair.mask(e)
    circuits = [
        pair.mask(N.names(o))
        for o in N.circuit_masks
        if o & N.bit(e) and not o & N.mask(avoid)
    ]
    if not circuits:
        return None
    for x, s_m, s_n in _waves_with(pair, lambda x, s_m, s_n: s_m & e_bit):
        allowed = s_n | e_bit
        for o in circuits:
            if o & ~allowed == 0:
                return from_masks(pair, x, s_m, s_n), pair.names(o)
    return None


def _waves_with(pair: MatroidPair, accept: Callable):
    for masks in wave_masks(pair):
        if accept(*masks):
            yield masks


def verify_lemma17(M: Matroid, N: Matroid, H: Iterable, J: Iterable, e: str) -> LemmaOutcome:
    """M-spanning wave, wave with ``e`` on the M-side plus circuit, or cohindrance plus cocircuit."""
    pair = _pair(M, N)
    masks = _check_disjoint(M, e, H=H, J=J)
    h, j = masks["H"], masks["J"]
    names = M.names

    for h_sub in submasks(h):
        first = pair.minor(
            contract_m=names(h_sub | j), delete_m=(), contract_n=names(j), delete_n=names(h_sub)
        )
        wave = _spanning_wave(first, e, "M")
        if wave is not None:
            return _finish(LemmaOutcome("lemma17", 1, wave, first, names(h_sub), "H'"))

    for j_sub in submasks(j):
        second = pair.minor(contract_m=names(j_sub))
        found = _wave_with_n_circuit(second, N, e, names(h | j_sub))
        if found is not None:
            wave, o = found
            return _finish(LemmaOutcome("lemma17", 2, wave, second, names(j_sub), "J'", o))

    for h_sub in submasks(h):
        third = pair.minor(
            contract_m=names(h_sub), delete_m=(), contract_n=(), delete_n=names(h_sub)
        )
        found = _cohindrance_with_cocircuit(third, e, M, j | h_sub)
        if found is not None:
            cowave, b = found
            return _finish(LemmaOutcome("lemma17", 3, cowave, third, names(h_sub), "H'", b))

    raise TheoremViolation(
        f"lemma17: no outcome for H={sorted(names(h))}, J={sorted(names(j))}, e={e}",
        instance={"pair": pair, "H": names(h), "J": names(j), "e": e},
    )


# -- exchange-chain dichotomies ----------------------------------------------------


def _hindrance_search(pair: MatroidPair, accept) -> Optional[Wave]:
    return find_wave(pair, lambda x, s_m, s_n: x & ~(s_m | s_n) and accept(x, s_m, s_n))


def verify_chain3(pair: MatroidPair, f: str, hindrance: Wave) -> LemmaOutcome:
    """From a hindrance of ``(M/f, N∖f)``: its set is a wave, or a hindrance lies inside it."""
    minor = pair.minor(contract_m=(f,), delete_m=(), contract_n=(), delete_n=(f,))
    if not is_hindrance(minor, hindrance):
        raise InvalidParameter(f"{hindrance} is not a hindrance of (M/{f}, N\\{f})")
    wave = find_wave_on(pair, hindrance.X)
    if wave is not None:
        return _finish(LemmaOutcome("chain3", 1, wave, pair))
    inside = pair.mask(hindrance.X)
    wave = _hindrance_search(pair, lambda x, s_m, s_n: x & ~inside == 0)
    if wave is not None:
        return _finish(LemmaOutcome("chain3", 2, wave, pair))
    raise TheoremViolation(f"chain3: no outcome for f={f}, {hindrance}", instance=(pair, f, hindrance))


def verify_chain2(pair: MatroidPair, e: str, hindrance: Wave) -> LemmaOutcome:
    """Given any hindrance: one focusing on ``e`` or one avoiding ``e``."""
    if not is_hindrance(pair, hindrance):
        raise InvalidParameter(f"{hindrance} is not a hindrance")
    bit = pair.mask(e)
    wave = _hindrance_search(pair, lambda x, s_m, s_n: x & bit and not (s_m | s_n) & bit)
    if wave is not None:
        return _finish(LemmaOutcome("chain2", 1, wave, pair))
    wave = _hindrance_search(pair, lambda x, s_m, s_n: not x & bit)
    if wave is not None:
        return _finish(LemmaOutcome("chain2", 2, wave, pair))
    raise TheoremViolation(f"chain2: no outcome for e={e}", instance=(pair, e, hindrance))


def verify_intermediate_lemma7(pair: MatroidPair, e: str, f: str) -> LemmaOutcome:
    """If every nonempty wave contains ``e``: in ``(M/f, N∖f)`` the set ``E - f``
    is a cowave or a hindrance focuses on ``e``."""
    if e == f:
        raise InvalidParameter("e and f must be distinct")
    if maximal_wave_avoiding(pair, e).X:
        raise InvalidParameter(f"Some nonempty wave avoids {e}")
    minor = pair.minor(contract_m=(f,), delete_m=(), contract_n=(), delete_n=(f,))
    cowave = find_wave_on(minor.dual(), minor.ground)
    if cowave is not None:
        witness = Cowave(cowave.X, cowave.S_M, cowave.S_N)
        return _finish(LemmaOutcome("intermediate_lemma7", 1, witness, minor))
    bit = minor.mask(e)
    wave = _hindrance_search(minor, lambda x, s_m, s_n: x & bit and not (s_m | s_n) & bit)
    if wave is not None:
        return _finish(LemmaOutcome("intermediate_lemma7", 2, wave, minor))
    raise TheoremViolation(
        f"intermediate_lemma7: no outcome for e={e}, f={f}", instance=(pair, e, f)
    )
