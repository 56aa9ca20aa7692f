"""Finite matroids over an ordered ground set.

A matroid is stored as its independence table: a byte per subset of the
ground set, indexed by the subset's bitmask in construction order. Every
other operation (rank, closure, circuits, duals, minors, 2-sums) is set
algebra on that table.
"""

import hashlib
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Optional

from .errors import BasepointDegenerateError, InvalidParameter, NotAMatroidError
from .limits import max_ground

GroundSet = tuple[str, ...]


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the single-bit masks of ``mask``, lowest first."""
    while mask:
        low = mask & -mask
        yield low
        mask ^= low


def submasks(mask: int) -> Iterator[int]:
    """Yield every submask of ``mask`` in ascending numeric order."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


def make_ground(elements: Iterable) -> GroundSet:
    """Validate and freeze an ordered ground set."""
    ground = tuple(str(x) for x in elements)
    if len(set(ground)) != len(ground):
        raise InvalidParameter(f"Ground set has repeated elements: {ground}")
    cap = max_ground()
    if len(ground) > cap:
        raise InvalidParameter(
            f"Ground set of size {len(ground)} exceeds the cap of {cap} elements"
        )
    return ground


def _rank_defect(table: bytes, n: int) -> Optional[str]:
    """Return a description of the first violated independence axiom."""
    if not table[0]:
        return "the empty set is not independent"
    for mask in range(1, 1 << n):
        if table[mask]:
            for bit in iter_bits(mask):
                if not table[mask ^ bit]:
                    return f"independent set {mask:#b} has dependent subset {mask ^ bit:#b}"
    rank = _rank_table(table, n)
    for mask in range(1 << n):
        r = rank[mask]
        outside = [1 << i for i in range(n) if not mask & (1 << i)]
        flat = [b for b in outside if rank[mask | b] == r]
        for x, y in combinations(flat, 2):
            if rank[mask | x | y] != r:
                return (
                    f"augmentation fails: {mask | x | y:#b} has rank "
                    f"{rank[mask | x | y]} over {mask:#b} of rank {r}"
                )
    return None


def _rank_table(table: bytes, n: int) -> list[int]:
    rank = [0] * (1 << n)
    for mask in range(1, 1 << n):
        if table[mask]:
            rank[mask] = rank[mask & (mask - 1)] + 1
        else:
            best = 0
            for bit in iter_bits(mask):
                if rank[mask ^ bit] > best:
                    best = rank[mask ^ bit]
            rank[mask] = best
    return rank


class Matroid:
    """A finite matroid given by its independence table.

    Subsets can be passed either as iterables of element names or, in the
    ``*_mask`` methods, as bitmasks over ``ground``.
    """

    def __init__(self, ground: Iterable, independent: bytes, validate: bool = True):
        self._ground = make_ground(ground)
        n = len(self._ground)
        if len(independent) != 1 << n:
            raise InvalidParameter(
                f"Independence table has {len(independent)} entries, expected {1 << n}"
            )
        self._table = bytes(1 if flag else 0 for flag in independent)
        self._index = {x: i for i, x in enumerate(self._ground)}
        if validate:
            defect = _rank_defect(self._table, n)
            if defect is not None:
                raise NotAMatroidError(f"Not a matroid: {defect}")

    # -- ground set and masks ------------------------------------------------

    @property
    def ground(self) -> GroundSet:
        return self._ground

    @property
    def size(self) -> int:
        return len(self._ground)

    @property
    def full_mask(self) -> int:
        return (1 << len(self._ground)) - 1

    def mask(self, subset: Iterable) -> int:
        """Convert element names to a bitmask; unknown names are rejected."""
        if isinstance(subset, str):
            subset = (subset,)
        result = 0
        for x in subset:
            try:
                result |= 1 << self._index[str(x)]
            except KeyError:
                raise InvalidParameter(
                    f"Element {x!r} is not in the ground set {self._ground}"
                ) from None
        return result

    def bit(self, element: str) -> int:
        return self.mask((element,))

    def names(self, mask: int) -> frozenset:
        return frozenset(self._ground[i] for i in range(len(self._ground)) if mask >> i & 1)

    def ordered(self, mask: int) -> list[str]:
        """Element names of ``mask`` in ground order."""
        return [self._ground[i] for i in range(len(self._ground)) if mask >> i & 1]

    # -- rank and friends (masks) ------------------------------------------

    @cached_property
    def _ranks(self) -> list[int]:
        return _rank_table(self._table, len(self._ground))

    def independent_mask(self, mask: int) -> bool:
        return bool(self._table[mask])

    def rank_mask(self, mask: int) -> int:
        return self._ranks[mask]

    def closure_mask(self, mask: int) -> int:
        r = self._ranks[mask]
        result = mask
        for i in range(len(self._ground)):
            bit = 1 << i
            if not mask & bit and self._ranks[mask | bit] == r:
                result |= bit
        return result

    def spans_mask(self, spanning: int, target: int) -> bool:
        """True iff ``spanning`` spans ``target`` (rank does not grow)."""
        return self._ranks[spanning | target] == self._ranks[spanning]

    @cached_property
    def circuit_masks(self) -> tuple[int, ...]:
        found = []
        for mask in range(1, 1 << len(self._ground)):
            if self._table[mask]:
                continue
            if all(self._table[mask ^ bit] for bit in iter_bits(mask)):
                found.append(mask)
        return tuple(found)

    @cached_property
    def basis_masks(self) -> tuple[int, ...]:
        r = self._ranks[self.full_mask]
        return tuple(
            m for m in range(1 << len(self._ground)) if self._table[m] and self._ranks[m] == r
        )

    def circuits_through(self, element_bit: int, within: int) -> Iterator[int]:
        """Circuits containing ``element_bit`` and contained in ``within``."""
        for c in self.circuit_masks:
            if c & element_bit and c & ~within == 0:
                yield c

    # -- name-level API --------------------------------------------------------

    def rank(self, subset: Iterable = ()) -> int:
        return self.rank_mask(self.mask(subset))

    def closure(self, subset: Iterable) -> frozenset:
        return self.names(self.closure_mask(self.mask(subset)))

    def is_independent(self, subset: Iterable) -> bool:
        return self.independent_mask(self.mask(subset))

    def circuits(self) -> frozenset:
        return frozenset(self.names(c) for c in self.circuit_masks)

    def cocircuits(self) -> frozenset:
        return self.dual().circuits()

    def bases(self) -> frozenset:
        return frozenset(self.names(b) for b in self.basis_masks)

    def is_loop(self, element: str) -> bool:
        return not self._table[self.bit(element)]

    def is_coloop(self, element: str) -> bool:
        bit = self.bit(element)
        return self._ranks[self.full_mask ^ bit] < self._ranks[self.full_mask]

    @property
    def full_rank(self) -> int:
        return self._ranks[self.full_mask]

    # -- derived matroids -----------------------------------------------------

    def dual(self) -> "Matroid":
        return dual(self)

    def minor(self, contract: Iterable = (), delete: Iterable = ()) -> "Matroid":
        return minor(self, contract, delete)

    def contract(self, subset: Iterable) -> "Matroid":
        return minor(self, subset, ())

    def delete(self, subset: Iterable) -> "Matroid":
        return minor(self, (), subset)

    def restrict(self, subset: Iterable) -> "Matroid":
        keep = self.mask(subset)
        return minor(self, (), self.names(self.full_mask & ~keep))

    def reorder(self, order: Iterable) -> "Matroid":
        """The same matroid with its ground listed in ``order``."""
        order = tuple(order)
        if sorted(order) != sorted(self._ground):
            raise InvalidParameter(f"{order} is not an ordering of {self._ground}")
        bits = [self.bit(x) for x in order]
        old = _translate_masks(bits)
        return Matroid(order, bytes(self._table[m] for m in old), validate=False)

    def relabel(self, mapping: dict) -> "Matroid":
        ground = [str(mapping.get(x, x)) for x in self._ground]
        return Matroid(ground, self._table, validate=False)

    # -- identity ---------------------------------------------------------------

    def encoding(self) -> str:
        """Canonical text of the matroid in construction order."""
        circuits = " ".join(
            "{" + ",".join(self.ordered(c)) + "}" for c in self.circuit_masks
        )
        return f"ground {' '.join(self._ground)}\ncircuits {circuits}".rstrip()

    def fingerprint(self) -> str:
        """SHA-256 of the encoding with the ground sorted, independent of order."""
        canonical = self.reorder(sorted(self._ground))
        return hashlib.sha256(canonical.encoding().encode("utf-8")).hexdigest()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matroid):
            return NotImplemented
        if self._ground == other._ground:
            return self._table == other._table
        if set(self._ground) != set(other._ground):
            return False
        return self._table == other.reorder(self._ground)._table

    def __hash__(self) -> int:
        return hash(self.fingerprint())

    def __repr__(self) -> str:
        return f"Matroid(ground={list(self._ground)}, rank={self.full_rank}, circuits={[sorted(c) for c in self.circuits()]})"


def _translate_masks(bits: list[int]) -> list[int]:
    """For each mask over ``bits`` (new positions), the mask in old positions."""
    table = [0] * (1 << len(bits))
    for mask in range(1, 1 << len(bits)):
        low = mask & -mask
        table[mask] = table[mask ^ low] | bits[low.bit_length() - 1]
    return table


# -- constructors ----------------------------------------------------------------


def make_uniform(m: int, ground: Iterable) -> Matroid:
    """The uniform matroid of rank ``m`` on ``ground``."""
    ground = make_ground(ground)
    if not 0 <= m <= len(ground):
        raise InvalidParameter(f"Rank {m} out of range for a ground set of size {len(ground)}")
    table = bytes(
        1 if mask.bit_count() <= m else 0 for mask in range(1 << len(ground))
    )
    return Matroid(ground, table, validate=False)


def make_free(ground: Iterable) -> Matroid:
    ground = make_ground(ground)
    return make_uniform(len(ground), ground)


def make_from_independents(ground: Iterable, family: Iterable[Iterable]) -> Matroid:
    """Matroid whose independent sets are exactly ``family`` (validated)."""
    ground = make_ground(ground)
    index = {x: i for i, x in enumerate(ground)}
    table = bytearray(1 << len(ground))
    for member in family:
        mask = 0
        for x in member:
            if str(x) not in index:
                raise InvalidParameter(f"Element {x!r} is not in the ground set {ground}")
            mask |= 1 << index[str(x)]
        table[mask] = 1
    return Matroid(ground, bytes(table))


def make_from_bases(ground: Iterable, bases: Iterable[Iterable]) -> Matroid:
    """Matroid generated by ``bases`` (validated)."""
    ground = make_ground(ground)
    index = {x: i for i, x in enumerate(ground)}
    table = bytearray(1 << len(ground))
    for base in bases:
        mask = 0
        for x in base:
            if str(x) not in index:
                raise InvalidParameter(f"Element {x!r} is not in the ground set {ground}")
            mask |= 1 << index[str(x)]
        for sub in submasks(mask):
            table[sub] = 1
    return Matroid(ground, bytes(table))


def _check_circuit_axioms(circuits: list[int], ground: GroundSet) -> None:
    def show(mask):
        return "{" + ",".join(ground[i] for i in range(len(ground)) if mask >> i & 1) + "}"

    for c in circuits:
        if c == 0:
            raise NotAMatroidError("The empty set cannot be a circuit", (c, c))
    for c1, c2 in combinations(circuits, 2):
        if c1 & c2 in (c1, c2):
            raise NotAMatroidError(
                f"Circuit {show(c1)} and circuit {show(c2)} are nested", (c1, c2)
            )
    for c1, c2 in combinations(circuits, 2):
        for bit in iter_bits(c1 & c2):
            rest = (c1 | c2) & ~bit
            if not any(c & ~rest == 0 for c in circuits):
                raise NotAMatroidError(
                    f"Circuits {show(c1)} and {show(c2)} violate elimination: "
                    f"no circuit inside {show(rest)}",
                    (c1, c2),
                )


def make_from_circuits(ground: Iterable, circuits: Iterable[Iterable]) -> Matroid:
    """Matroid with the given circuits; circuit axioms are checked exhaustively."""
    ground = make_ground(ground)
    index = {x: i for i, x in enumerate(ground)}
    masks = []
    for circuit in circuits:
        mask = 0
        for x in circuit:
            if str(x) not in index:
                raise InvalidParameter(f"Element {x!r} is not in the ground set {ground}")
            mask |= 1 << index[str(x)]
        if mask not in masks:
            masks.append(mask)
    _check_circuit_axioms(masks, ground)
    table = bytes(
        0 if any(c & ~mask == 0 for c in masks) else 1 for mask in range(1 << len(ground))
    )
    return Matroid(ground, table, validate=False)


# -- operations ------------------------------------------------------------------


def dual(matroid: Matroid) -> Matroid:
    """The dual matroid: its bases are the complements of bases of ``matroid``."""
    full = matroid.full_mask
    r = matroid.full_rank
    table = bytes(
        1 if matroid.rank_mask(full ^ mask) == r else 0 for mask in range(full + 1)
    )
    return Matroid(matroid.ground, table, validate=False)


def minor(matroid: Matroid, contract: Iterable = (), delete: Iterable = ()) -> Matroid:
    """Contract ``contract`` and delete ``delete``.

    Independence in the minor is tested against one fixed maximal
    independent subset of the contracted set.
    """
    c = matroid.mask(contract)
    d = matroid.mask(delete)
    if c & d:
        raise InvalidParameter(
            f"Contracted and deleted sets overlap in {sorted(matroid.names(c & d))}"
        )
    if not c and not d:
        return matroid
    base = 0
    for bit in iter_bits(c):
        if matroid.independent_mask(base | bit):
            base |= bit
    keep = matroid.full_mask & ~(c | d)
    kept_bits = list(iter_bits(keep))
    old = _translate_masks(kept_bits)
    table = bytes(matroid.independent_mask(m | base) for m in old)
    return Matroid(matroid.ordered(keep), table, validate=False)


def two_sum(m1: Matroid, m2: Matroid, p: str) -> Matroid:
    """The 2-sum of ``m1`` and ``m2`` along the basepoint ``p``."""
    shared = set(m1.ground) & set(m2.ground)
    if shared != {p}:
        raise InvalidParameter(
            f"Ground sets must meet exactly in {{{p}}}, they meet in {sorted(shared)}"
        )
    for side, m in (("first", m1), ("second", m2)):
        if m.is_loop(p) or m.is_coloop(p):
            kind = "loop" if m.is_loop(p) else "coloop"
            raise BasepointDegenerateError(
                f"Basepoint {p} is a {kind} of the {side} matroid; "
                "assemble the tree of matroids instead"
            )
    ground = [x for x in m1.ground if x != p] + [x for x in m2.ground if x != p]
    circuits = [c for c in m1.circuits() if p not in c]
    circuits += [c for c in m2.circuits() if p not in c]
    for c1 in m1.circuits():
        if p not in c1:
            continue
        for c2 in m2.circuits():
            if p in c2:
                circuits.append((c1 - {p}) | (c2 - {p}))
    return make_from_circuits(ground, circuits)


def direct_sum(m1: Matroid, m2: Matroid) -> Matroid:
    if set(m1.ground) & set(m2.ground):
        raise InvalidParameter("Direct sum needs disjoint ground sets")
    return make_from_circuits(
        list(m1.ground) + list(m2.ground), list(m1.circuits()) + list(m2.circuits())
    )


def check_axioms(matroid: Matroid) -> Optional[str]:
    """Re-check the independence axioms; ``None`` when they all hold."""
    return _rank_defect(matroid._table, matroid.size)


@dataclass(frozen=True)
class MatroidPair:
    """Two matroids on a common ground set."""

    M: Matroid
    N: Matroid

    def __post_init__(self):
        if self.M.ground != self.N.ground:
            if set(self.M.ground) != set(self.N.ground):
                raise InvalidParameter(
                    f"Pair needs a common ground set: {self.M.ground} vs {self.N.ground}"
                )
            object.__setattr__(self, "N", self.N.reorder(self.M.ground))

    @property
    def ground(self) -> GroundSet:
        return self.M.ground

    @property
    def full_mask(self) -> int:
        return self.M.full_mask

    def mask(self, subset: Iterable) -> int:
        return self.M.mask(subset)

    def names(self, mask: int) -> frozenset:
        return self.M.names(mask)

    def dual(self) -> "MatroidPair":
        return MatroidPair(dual(self.M), dual(self.N))

    def swap(self) -> "MatroidPair":
        return MatroidPair(self.N, self.M)

    def minor(
        self,
        contract_m: Iterable = (),
        delete_m: Iterable = (),
        contract_n: Optional[Iterable] = None,
        delete_n: Optional[Iterable] = None,
    ) -> "MatroidPair":
        """Minor of both sides; the N side defaults to the M side's sets."""
        contract_n = contract_m if contract_n is None else contract_n
        delete_n = delete_m if delete_n is None else delete_n
        return MatroidPair(
            minor(self.M, contract_m, delete_m), minor(self.N, contract_n, delete_n)
        )

    def restrict(self, subset: Iterable) -> "MatroidPair":
        return MatroidPair(self.M.restrict(subset), self.N.restrict(subset))

    def fingerprint(self) -> str:
        body = f"{self.M.fingerprint()}:{self.N.fingerprint()}"
        return hashlib.sha256(body.encode("utf-8")).hexdigest()
