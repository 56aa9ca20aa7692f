"""The finite Packing/Covering partition of a matroid pair."""

from dataclasses import dataclass

from .errors import InternalError, InvalidParameter, TheoremViolation
from .matroid import MatroidPair, submasks
from .waves import (
    Verdict,
    Wave,
    find_cohindrance,
    find_wave,
    maximal_wave,
    verify_wave,
)


@dataclass(frozen=True)
class PCPartition:
    """``E = P ∪ Q`` with a packing of the restriction to ``P`` and a covering of ``Q``."""

    P: frozenset
    Q: frozenset
    packing: Wave
    covering: tuple

    @property
    def I_M(self) -> frozenset:
        return self.covering[0]

    @property
    def I_N(self) -> frozenset:
        return self.covering[1]

    def to_dict(self) -> dict:
        return {
            "P": sorted(self.P),
            "Q": sorted(self.Q),
            "packing": self.packing.to_dict(),
            "covering": {"I_M": sorted(self.I_M), "I_N": sorted(self.I_N)},
        }


def verify_partition(pair: MatroidPair, partition: PCPartition) -> Verdict:
    """Check every condition of a Packing/Covering partition."""
    ground = frozenset(pair.ground)
    P, Q = partition.P, partition.Q
    if P | Q != ground or P & Q:
        return Verdict(False, "not-a-partition")
    if partition.packing.X != P:
        return Verdict(False, "packing-not-on-P")
    packing = verify_wave(pair.restrict(pair.M.ordered(pair.mask(P))), partition.packing)
    if not packing:
        return Verdict(False, f"packing-{packing.reason}")
    I_M, I_N = partition.covering
    if I_M | I_N != Q:
        return Verdict(False, "covering-not-on-Q")
    contracted = pair.minor(contract_m=P)
    if not contracted.M.is_independent(I_M):
        return Verdict(False, "I_M-dependent")
    if not contracted.N.is_independent(I_N):
        return Verdict(False, "I_N-dependent")
    return Verdict(True)


def solve_packing_covering(pair: MatroidPair) -> PCPartition:
    """Split the ground into a maximal wave and a covered rest."""
    wave = maximal_wave(pair)
    P = wave.X
    Q = frozenset(pair.ground) - P
    contracted = pair.minor(contract_m=P)
    q_mask = contracted.full_mask
    for i_m in submasks(q_mask):
        if contracted.M.independent_mask(i_m) and contracted.N.independent_mask(q_mask & ~i_m):
            covering = (contracted.names(i_m), contracted.names(q_mask & ~i_m))
            break
    else:
        raise InternalError(f"No covering of {sorted(Q)} after removing the maximal wave")
    partition = PCPartition(P, Q, wave, covering)
    verdict = verify_partition(pair, partition)
    if not verdict:
        raise InternalError(f"Computed partition fails verification: {verdict.reason}")
    return partition


def dual_partition(pair: MatroidPair, partition: PCPartition) -> PCPartition:
    """The partition of ``(M*, N*)`` with ``P`` and ``Q`` exchanged."""
    verdict = verify_partition(pair, partition)
    if not verdict:
        raise InvalidParameter(f"Not a Packing/Covering partition: {verdict.reason}")
    I_M, I_N = partition.covering
    S_M = partition.packing.S_M
    Q = partition.Q
    packing = Wave(Q, Q - I_M, I_M)
    covering = (partition.P - S_M, S_M)
    swapped = PCPartition(partition.Q, partition.P, packing, covering)
    verdict = verify_partition(pair.dual(), swapped)
    if not verdict:
        raise InternalError(f"Dualised partition fails verification: {verdict.reason}")
    return swapped


def wave_or_cohindrance(pair: MatroidPair, e: str):
    """A wave containing ``e`` or, failing that, a cohindrance focusing on ``e``."""
    bit = pair.mask(e)
    wave = find_wave(pair, lambda x, s_m, s_n: x & bit)
    if wave is not None:
        return wave
    cowave = find_cohindrance(pair, e)
    if cowave is None:
        raise TheoremViolation(
            f"{e} lies in no wave and no cohindrance focuses on it", instance=(pair, e)
        )
    return cowave
