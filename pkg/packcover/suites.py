"""Verification suites: seeded sweeps of the finite lemmas, with reports.

Each suite is a numbered family of instances. An instance is rebuilt from
``(spec, index)`` alone, so any worker can run any index and the merged
report does not depend on how the work was split.
"""

import hashlib
import json
import random
import signal
import sys
import threading
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field, replace
from functools import lru_cache
from itertools import combinations, repeat
from typing import Callable, Optional

from .arena import Arena, attainable_set, fulfils
from .chains import EVEN, ODD, augment_chain, find_exchange_chain
from .errors import (
    BasepointDegenerateError,
    InternalError,
    InvalidParameter,
    TheoremViolation,
)
from .game import (
    COVERINA,
    PACKER,
    GameSolver,
    strategy_to_wave,
    verify_strategy,
    wave_to_strategy,
)
from .generators import element_names, pair_catalog, random_pair, random_pairtree
from .lemmas import (
    verify_chain2,
    verify_chain3,
    verify_intermediate_lemma7,
    verify_lemma17,
    verify_lemma27,
)
from .limits import instance_timeout, max_ground
from .matroid import MatroidPair, make_uniform
from .parser import (
    parse_arena,
    parse_pair,
    parse_pairtree,
    serialize_arena,
    serialize_pair,
    serialize_pairtree,
)
from .partition import dual_partition, solve_packing_covering, verify_partition
from .promises import (
    GENERATORS,
    MINIMAL_BLOCKING_SETS,
    PLAIN,
    attainability_order,
    classify_acal,
    hasse_edges,
    order_relation,
    verify_blockstr,
    verify_lem4_minus,
    verify_lem5_minus,
)
from .tacticians import MINUS, PLUS, check_tacticians, sweep_blocklem
from .trees import PairTree, assemble, verify_tom_minor
from .waves import Cowave, enumerate_waves, find_wave, maximal_wave_avoiding

PASSED = "pass"
FAILED = "fail"
SKIPPED = "skip"

CATALOG_MAX = 4
SEED_LIMIT = 1 << 64


class InstanceSkipped(Exception):
    """An instance whose preconditions do not hold."""


class InstanceTimeout(Exception):
    """An instance ran past the wall-time guard."""


@dataclass(frozen=True)
class Instance:
    index: int
    subject: object
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Suite:
    name: str
    description: str
    sizes: tuple
    count: Callable
    build: Callable
    check: Callable


@dataclass(frozen=True)
class SuiteSpec:
    """What to run: suite name, size caps, trial count and seed.

    ``sizes`` are ground sizes for pair suites and the node-ground cap for
    pair-tree suites; ``None`` means the suite's own default.
    """

    suite: str
    sizes: Optional[tuple] = None
    nodes: int = 3
    trials: int = 100
    seed: int = 0
    workers: int = 1
    verbose: bool = False
    timing: bool = False

    def __post_init__(self):
        if self.suite not in SUITES:
            raise InvalidParameter(f"Unknown suite {self.suite!r}; choose from {', '.join(SUITES)}")
        cap = max_ground()
        if self.sizes is not None:
            sizes = tuple(sorted(set(self.sizes)))
            if not sizes or sizes[0] < 1 or sizes[-1] > cap:
                raise InvalidParameter(f"Sizes must lie in 1..{cap}, got {list(sizes)}")
            object.__setattr__(self, "sizes", sizes)
        if not 1 <= self.nodes <= cap:
            raise InvalidParameter(f"Node count must lie in 1..{cap}, got {self.nodes}")
        if self.trials < 0:
            raise InvalidParameter(f"Trial count must be non-negative, got {self.trials}")
        if not 0 <= self.seed < SEED_LIMIT:
            raise InvalidParameter(f"Seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.workers < 1:
            raise InvalidParameter(f"Worker count must be positive, got {self.workers}")

    @property
    def size_list(self) -> tuple:
        return self.sizes or SUITES[self.suite].sizes

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "sizes": list(self.size_list),
            "nodes": self.nodes,
            "trials": self.trials,
            "seed": self.seed,
        }


def _rng(spec: SuiteSpec, index: int) -> random.Random:
    return random.Random(f"{spec.suite}:{spec.seed}:{index}")


# -- instance families ----------------------------------------------------------------


@lru_cache(maxsize=None)
def _catalog_pairs(sizes: tuple) -> tuple:
    return tuple(pair for n in sizes for pair in pair_catalog(n))


def _catalog_part(spec: SuiteSpec) -> tuple:
    return _catalog_pairs(tuple(n for n in spec.size_list if n <= CATALOG_MAX))


def _random_sizes(spec: SuiteSpec) -> tuple:
    return tuple(n for n in spec.size_list if n > CATALOG_MAX)


def _sweep_count(spec: SuiteSpec) -> int:
    """Every catalog pair on the small sizes, then ``trials`` random pairs."""
    return len(_catalog_part(spec)) + (spec.trials if _random_sizes(spec) else 0)


def _sweep_pair(spec: SuiteSpec, index: int) -> MatroidPair:
    catalog = _catalog_part(spec)
    if index < len(catalog):
        return catalog[index]
    sizes = _random_sizes(spec)
    n = sizes[(index - len(catalog)) % len(sizes)]
    return random_pair(_rng(spec, index).getrandbits(64), n)


def _random_pair(spec: SuiteSpec, index: int) -> tuple[MatroidPair, random.Random]:
    rng = _rng(spec, index)
    sizes = spec.size_list
    n = sizes[index % len(sizes)]
    return random_pair(rng.getrandbits(64), n), rng


def _trials_count(spec: SuiteSpec) -> int:
    return spec.trials


def _single(spec: SuiteSpec) -> int:
    return 1


def _empty_instance(spec: SuiteSpec, index: int) -> Instance:
    return Instance(index, None)


def _tally_outcomes(tally) -> Counter:
    outcomes = Counter({str(k): v for k, v in tally.outcomes.items()})
    outcomes["checked"] += tally.checked
    return outcomes


# -- 5sets and leq --------------------------------------------------------------------


def _cited_arenas() -> tuple:
    one, two = element_names(1), element_names(2)
    sides = (
        (make_uniform(0, one), make_uniform(0, one), 1),
        (make_uniform(1, one), make_uniform(1, one), 2),
        (make_uniform(0, one), make_uniform(1, one), 3),
        (make_uniform(1, one), make_uniform(0, one), 4),
        (make_uniform(1, two), make_uniform(1, two), 5),
    )
    return tuple((Arena(MatroidPair(m, n), (), "e"), value) for m, n, value in sides)


def _count_5sets(spec: SuiteSpec) -> int:
    return len(_cited_arenas()) + _sweep_count(spec)


def _build_5sets(spec: SuiteSpec, index: int) -> Instance:
    cited = _cited_arenas()
    if index < len(cited):
        arena, value = cited[index]
        return Instance(index, arena, {"expected": str(value)})
    return Instance(index, Arena(_sweep_pair(spec, index - len(cited)), (), "e"))


def _check_5sets(instance: Instance) -> Counter:
    value = classify_acal(attainable_set(instance.subject))
    expected = instance.params.get("expected")
    if expected is not None and value != int(expected):
        raise TheoremViolation(
            f"Attainable set is value {value}, expected {expected}", instance.subject
        )
    return Counter({f"value-{value}": 1})


def _check_leq(instance: Instance) -> Counter:
    sets = [attainable_set(arena) for arena, _ in _cited_arenas()]
    for pair in _catalog_pairs(instance.params["sizes"]):
        sets.append(attainable_set(Arena(pair, (), "e")))
    computed = attainability_order(sets)
    if computed != order_relation():
        extra = sorted(f"{p}>={q}" for p, q in computed - order_relation())
        missing = sorted(f"{p}>={q}" for p, q in order_relation() - computed)
        raise TheoremViolation(f"Attainability order differs: extra {extra}, missing {missing}")
    edges = hasse_edges(computed)
    if edges != frozenset(GENERATORS):
        raise TheoremViolation(f"Hasse diagram has edges {sorted(map(str, edges))}")
    return Counter({"arenas": len(sets), "hasse-edges": len(edges)})


def _build_leq(spec: SuiteSpec, index: int) -> Instance:
    sizes = tuple(n for n in spec.size_list if n <= CATALOG_MAX)
    return Instance(index, None, {"sizes": sizes})


# -- enumeration sweeps ------------------------------------------------------------


def _check_blockstr(instance: Instance) -> Counter:
    return _tally_outcomes(verify_blockstr())


def _check_lem5_minus(instance: Instance) -> Counter:
    return _tally_outcomes(verify_lem5_minus())


def _check_lem4_minus(instance: Instance) -> Counter:
    return _tally_outcomes(verify_lem4_minus())


# -- packing/covering and lemma trichotomies -------------------------------------------


def _build_pair(spec: SuiteSpec, index: int) -> Instance:
    return Instance(index, _sweep_pair(spec, index))


def _check_packing_covering(instance: Instance) -> Counter:
    pair = instance.subject
    partition = solve_packing_covering(pair)
    verdict = verify_partition(pair, partition)
    if not verdict:
        raise TheoremViolation(f"Partition fails: {verdict.reason}", pair)
    dual_partition(pair, partition)
    if not partition.Q:
        return Counter({"packing-only": 1})
    if not partition.P:
        return Counter({"covering-only": 1})
    return Counter({"mixed": 1})


def _disjoint_subsets(rng: random.Random, elements: list, names: tuple) -> dict:
    pool = list(elements)
    rng.shuffle(pool)
    chosen = {}
    for name in names:
        size = min(rng.randint(0, 2), len(pool))
        chosen[name], pool = frozenset(pool[:size]), pool[size:]
    return chosen


def _subset_choices(elements: tuple, names: tuple) -> list:
    """Every choice of disjoint subsets of ``elements``, one per name, each of size at most 2."""
    if not names:
        return [{}]
    found = []
    for k in range(3):
        for chosen in combinations(elements, k):
            rest = tuple(x for x in elements if x not in chosen)
            for tail in _subset_choices(rest, names[1:]):
                found.append({names[0]: frozenset(chosen), **tail})
    return found


@lru_cache(maxsize=None)
def _lemma_catalog(sizes: tuple, names: tuple) -> tuple:
    return tuple(
        (pair, choice)
        for pair in _catalog_pairs(sizes)
        for choice in _subset_choices(tuple(x for x in pair.ground if x != "e"), names)
    )


def _lemma_instances(names: tuple) -> tuple[Callable, Callable]:
    """Count and build for a lemma suite.

    Catalog sizes sweep every pair against every subset choice; larger
    sizes draw ``trials`` random pairs with one random choice each.
    """

    def catalog(spec: SuiteSpec) -> tuple:
        return _lemma_catalog(tuple(n for n in spec.size_list if n <= CATALOG_MAX), names)

    def count(spec: SuiteSpec) -> int:
        return len(catalog(spec)) + (spec.trials if _random_sizes(spec) else 0)

    def build(spec: SuiteSpec, index: int) -> Instance:
        swept = catalog(spec)
        if index < len(swept):
            pair, choice = swept[index]
            return Instance(index, pair, {"e": "e", **choice})
        rng = _rng(spec, index)
        sizes = _random_sizes(spec)
        n = sizes[(index - len(swept)) % len(sizes)]
        pair = random_pair(rng.getrandbits(64), n)
        rest = [x for x in pair.ground if x != "e"]
        return Instance(index, pair, {"e": "e", **_disjoint_subsets(rng, rest, names)})

    return count, build


def _checked(outcome) -> Counter:
    if not outcome.reverify():
        raise TheoremViolation(
            f"{outcome.lemma}: witness {outcome.witness} does not verify", outcome.pair
        )
    return Counter({f"{outcome.lemma}-case-{outcome.case_index}": 1})


def _check_lemma27(instance: Instance) -> Counter:
    pair, p = instance.subject, instance.params
    return _checked(verify_lemma27(pair.M, pair.N, p["G"], p["H"], p["J"], p["e"]))


def _check_lemma17(instance: Instance) -> Counter:
    pair, p = instance.subject, instance.params
    return _checked(verify_lemma17(pair.M, pair.N, p["H"], p["J"], p["e"]))


# -- pair-trees and games ------------------------------------------------------------

TEMPLATE_TREES = (
    "node t0 e : uniform 0\nroot t0 e\n",
    "node t0 e : uniform 1\nroot t0 e\n",
    "node t0 e : uniform 0 : uniform 1\nroot t0 e\n",
    "node t0 e : uniform 1 : uniform 0\nroot t0 e\n",
    "node t0 e d1 : uniform 1\nnode t1 d1 g : uniform 1\nedge t0 t1 d1\nroot t0 e\n",
    "node t0 e d1 : uniform 1\n"
    "node t1 d1 a d2 : uniform 2 : uniform 1\n"
    "node t2 d2 b : uniform 1\n"
    "edge t0 t1 d1\nedge t1 t2 d2\nroot t0 e\n",
    "node t0 e d1 d2 : uniform 2 : uniform 1\n"
    "node t1 d1 a : uniform 1\n"
    "node t2 d2 b : circuits {d2,b}\n"
    "edge t0 t1 d1\nedge t0 t2 d2\nroot t0 e\n",
    "node t0 e d1 d2 d3 : uniform 2\n"
    "node t1 d1 a : uniform 1\n"
    "node t2 d2 b : uniform 1 : circuits {d2,b}\n"
    "node t3 d3 c : uniform 1\n"
    "edge t0 t1 d1\nedge t0 t2 d2\nedge t0 t3 d3\nroot t0 e\n",
)


@lru_cache(maxsize=None)
def _templates() -> tuple:
    return tuple(parse_pairtree(text) for text in TEMPLATE_TREES)


def _count_trees(spec: SuiteSpec) -> int:
    return len(_templates()) + spec.trials


def _random_tree(spec: SuiteSpec, index: int) -> tuple[PairTree, random.Random]:
    rng = _rng(spec, index)
    nodes = rng.randint(1, spec.nodes)
    board = random_pairtree(rng.getrandbits(64), nodes, max(2, max(spec.size_list)))
    return board, rng


def _build_tree(spec: SuiteSpec, index: int) -> Instance:
    templates = _templates()
    if index < len(templates):
        return Instance(index, templates[index])
    return Instance(index, _random_tree(spec, index)[0])


def _check_game(instance: Instance) -> Counter:
    """Who wins each game agrees with attainability in the assembled pair."""
    board = instance.subject
    pair = assemble(board).assembled
    attainable = attainable_set(Arena(pair, (), board.e))
    sides = ((False, GameSolver(board), PACKER), (True, GameSolver(board.dual()), COVERINA))
    for starred, solver, player in sides:
        for p in PLAIN:
            promise = p.star() if starred else p
            won = solver.wins(board.root, p)
            if won != (promise in attainable):
                state = "wins" if won else "loses"
                raise TheoremViolation(
                    f"{player} {state} the game for {promise} but it is "
                    f"{'' if promise in attainable else 'not '}attainable",
                    board,
                )
            if won:
                verdict = verify_strategy(solver.pairtree, p, solver.strategy(player, p))
                if not verdict:
                    raise InternalError(f"Solved strategy for {promise} fails: {verdict.reason}")
    return Counter({f"value-{classify_acal(attainable)}": 1})


def _fulfilling_wave(arena: Arena, promise):
    return next((w for w in enumerate_waves(arena.pair) if fulfils(arena, w, promise)), None)


def _check_roundtrip(instance: Instance) -> Counter:
    """Waves become strategies and strategies glue back into fulfilling waves."""
    board = instance.subject
    arena = Arena(assemble(board).assembled, (), board.e)
    outcomes = Counter()
    for starred, side in ((False, arena), (True, arena.dual())):
        for p in PLAIN:
            wave = _fulfilling_wave(side, p)
            if wave is None:
                continue
            if starred:
                promise, wave = p.star(), Cowave(wave.X, wave.S_M, wave.S_N)
                strategy = wave_to_strategy(board, promise, wave)
                glued = strategy_to_wave(board.dual(), promise, strategy)
            else:
                promise = p
                strategy = wave_to_strategy(board, promise, wave)
                glued = strategy_to_wave(board, promise, strategy)
            if not fulfils(arena, glued, promise):
                raise TheoremViolation(f"Glued wave {glued} does not fulfil {promise}", board)
            outcomes.update(strategy.provenance.values())
            outcomes["promises"] += 1
    return outcomes


def _build_tom_minor(spec: SuiteSpec, index: int) -> Instance:
    board, rng = _random_tree(spec, index)
    contract, delete = set(), set()
    for x in board.M.ground:
        roll = rng.randrange(3)
        if roll == 0:
            contract.add(x)
        elif roll == 1:
            delete.add(x)
    return Instance(index, board, {"C": frozenset(contract), "D": frozenset(delete)})


def _check_tom_minor(instance: Instance) -> Counter:
    tree = instance.subject.M
    try:
        equal = verify_tom_minor(tree, instance.params["C"], instance.params["D"])
    except BasepointDegenerateError as e:
        raise InstanceSkipped("degenerate") from e
    if not equal:
        raise TheoremViolation("Assembled minor differs from the minor of the assembly", tree)
    return Counter({"minor-equal": 1})


# -- exchange chains ---------------------------------------------------------------


def _check_runchains(instance: Instance) -> Counter:
    """Chains between every pair of bases keep union and closures as promised.

    ``B_M`` and ``B_N`` may share elements, so a chain can end at an element
    of both.
    """
    pair = instance.subject
    outcomes = Counter()
    for i_m in pair.M.basis_masks:
        for i_n in pair.N.basis_masks:
            outcomes += _run_chains(pair, pair.names(i_m), pair.names(i_n))
    return outcomes


def _run_chains(pair: MatroidPair, b_m: frozenset, b_n: frozenset) -> Counter:
    union = b_m | b_n
    outcomes = Counter()
    for parity in (EVEN, ODD):
        for z in pair.ground:
            if z in union:
                continue
            for f in pair.ground:
                if f not in union:
                    continue
                chain = find_exchange_chain(pair, b_m, b_n, z, f, parity)
                if chain is None:
                    continue
                new_m, new_n = augment_chain(pair, b_m, b_n, chain)
                if new_m | new_n != (union | {z}) - {f}:
                    raise TheoremViolation(
                        f"Chain {list(chain.nodes)} breaks the union identity", pair
                    )
                same_m = pair.M.closure(new_m) == pair.M.closure(b_m)
                if not same_m or pair.N.closure(new_n) != pair.N.closure(b_n):
                    raise TheoremViolation(f"Chain {list(chain.nodes)} changes a closure", pair)
                outcomes[f"chains-{parity}"] += 1
                if f in b_m and f in b_n:
                    outcomes["chains-shared-end"] += 1
    return outcomes


def _build_chains(spec: SuiteSpec, index: int) -> Instance:
    pair, rng = _random_pair(spec, index)
    rest = [x for x in pair.ground if x != "e"]
    params = {"e": "e"}
    if rest:
        params["f"] = rng.choice(rest)
    return Instance(index, pair, params)


def _check_chains(instance: Instance) -> Counter:
    pair, e, f = instance.subject, instance.params["e"], instance.params.get("f")
    outcomes = Counter()
    hindrance = find_wave(pair, lambda x, s_m, s_n: x & ~(s_m | s_n))
    if hindrance is not None:
        outcomes += _checked(verify_chain2(pair, e, hindrance))
    if f is not None:
        minor = pair.minor(contract_m=(f,), delete_m=(), contract_n=(), delete_n=(f,))
        below = find_wave(minor, lambda x, s_m, s_n: x & ~(s_m | s_n))
        if below is not None:
            outcomes += _checked(verify_chain3(pair, f, below))
        if not maximal_wave_avoiding(pair, e).X:
            outcomes += _checked(verify_intermediate_lemma7(pair, e, f))
    if not outcomes:
        raise InstanceSkipped("no-hindrance")
    return outcomes


# -- tacticians --------------------------------------------------------------------


@lru_cache(maxsize=None)
def _micro_arenas(sizes: tuple) -> tuple:
    arenas = []
    for pair in _catalog_pairs(sizes):
        rest = [x for x in pair.ground if x != "e"]
        for k in (1, 2):
            for upper in combinations(rest, k):
                arenas.append(Arena(pair, upper, "e"))
    return tuple(arenas)


def _tactician_sizes(spec: SuiteSpec) -> tuple:
    return tuple(n for n in spec.size_list if n <= CATALOG_MAX)


def _count_tacticians(spec: SuiteSpec) -> int:
    return len(_micro_arenas(_tactician_sizes(spec)))


def _build_tacticians(spec: SuiteSpec, index: int) -> Instance:
    return Instance(index, _micro_arenas(_tactician_sizes(spec))[index])


def _check_tacticians(instance: Instance) -> Counter:
    arena = instance.subject
    outcomes = Counter()
    skipped = 0
    for kind in (PLUS, MINUS):
        tally = check_tacticians(arena, kind)
        skipped += tally.skipped
        outcomes.update({f"{kind}:{case}": n for case, n in tally.outcomes.items()})
    for blocking in MINIMAL_BLOCKING_SETS:
        tally = sweep_blocklem(arena, blocking)
        outcomes["blocklem"] += tally.checked
    if skipped == 2 and not outcomes:
        raise InstanceSkipped("challengers")
    return outcomes


_count_lemma27, _build_lemma27 = _lemma_instances(("G", "H", "J"))
_count_lemma17, _build_lemma17 = _lemma_instances(("H", "J"))


SUITES = {
    suite.name: suite
    for suite in (
        Suite(
            "5sets",
            "attainable sets take one of five values",
            (1, 2, 3, 4),
            _count_5sets,
            _build_5sets,
            _check_5sets,
        ),
        Suite(
            "leq",
            "attainability order matches the promise order",
            (1, 2, 3),
            _single,
            _build_leq,
            _check_leq,
        ),
        Suite(
            "blockstr",
            "minimal blocking sets characterise blocking",
            (),
            _single,
            _empty_instance,
            _check_blockstr,
        ),
        Suite(
            "packing-covering",
            "every pair has a Packing/Covering partition",
            (1, 2, 3, 4, 5, 6),
            _sweep_count,
            _build_pair,
            _check_packing_covering,
        ),
        Suite(
            "lemma27",
            "wave, N-spanning wave or cohindrance",
            (3, 5, 6),
            _count_lemma27,
            _build_lemma27,
            _check_lemma27,
        ),
        Suite(
            "lemma17",
            "M-spanning wave, wave with circuit or cohindrance",
            (3, 5, 6),
            _count_lemma17,
            _build_lemma17,
            _check_lemma17,
        ),
        Suite(
            "lem5-minus",
            "minus tactician promise-set triples",
            (),
            _single,
            _empty_instance,
            _check_lem5_minus,
        ),
        Suite(
            "lem4-minus",
            "minus improvement promise-set triples",
            (),
            _single,
            _empty_instance,
            _check_lem4_minus,
        ),
        Suite(
            "game",
            "game winners agree with attainability",
            (4,),
            _count_trees,
            _build_tree,
            _check_game,
        ),
        Suite(
            "roundtrip",
            "waves and strategies convert both ways",
            (4,),
            _count_trees,
            _build_tree,
            _check_roundtrip,
        ),
        Suite(
            "tom-minor",
            "node-wise minors assemble to the minor",
            (4,),
            _trials_count,
            _build_tom_minor,
            _check_tom_minor,
        ),
        Suite(
            "runchains",
            "exchange chains augment as promised",
            (1, 2, 3, 4, 5),
            _sweep_count,
            _build_pair,
            _check_runchains,
        ),
        Suite(
            "tacticians",
            "tactician cases on micro arenas",
            (2, 3),
            _count_tacticians,
            _build_tacticians,
            _check_tacticians,
        ),
        Suite(
            "chains",
            "exchange-chain dichotomies",
            (4, 5),
            _trials_count,
            _build_chains,
            _check_chains,
        ),
    )
}


# -- counterexamples -----------------------------------------------------------------


def _subject_kind(subject) -> str:
    if isinstance(subject, Arena):
        return "arena"
    if isinstance(subject, PairTree):
        return "pairtree"
    if isinstance(subject, MatroidPair):
        return "pair"
    return "none"


_SERIALIZERS = {"arena": serialize_arena, "pairtree": serialize_pairtree, "pair": serialize_pair}
_PARSERS = {"arena": parse_arena, "pairtree": parse_pairtree, "pair": parse_pair}


def _param_value(value):
    if isinstance(value, frozenset):
        return sorted(value)
    if isinstance(value, tuple):
        return list(value)
    return value


def instance_to_dict(suite: str, instance: Instance) -> dict:
    kind = _subject_kind(instance.subject)
    text = _SERIALIZERS[kind](instance.subject) if kind in _SERIALIZERS else ""
    params = {k: _param_value(v) for k, v in sorted(instance.params.items())}
    body = json.dumps({"text": text, "params": params}, sort_keys=True)
    return {
        "suite": suite,
        "index": instance.index,
        "kind": kind,
        "text": text,
        "params": params,
        "fingerprint": hashlib.sha256(body.encode()).hexdigest(),
    }


def instance_from_dict(data: dict) -> Instance:
    kind = data["kind"]
    subject = _PARSERS[kind](data["text"]) if kind in _PARSERS else None
    params = {}
    for key, value in data.get("params", {}).items():
        if isinstance(value, list):
            value = tuple(value) if key == "sizes" else frozenset(value)
        params[key] = value
    return Instance(data["index"], subject, params)


def _fails(suite: Suite, instance: Instance, error: Optional[type] = None) -> bool:
    """Whether checking ``instance`` fails; with ``error``, by raising exactly that type."""
    try:
        suite.check(instance)
    except InstanceSkipped:
        return False
    except InstanceTimeout:
        raise
    except Exception as e:
        if error is not None:
            return type(e) is error
        return isinstance(e, (TheoremViolation, InternalError))
    return False


def replay_counterexample(data: dict) -> bool:
    """Rebuild a serialized instance and report whether it still fails."""
    return _fails(SUITES[data["suite"]], instance_from_dict(data))


def _without(instance: Instance, x: str) -> Optional[Instance]:
    subject = instance.subject
    params = {k: v - {x} if isinstance(v, frozenset) else v for k, v in instance.params.items()}
    if isinstance(subject, Arena):
        keep = [y for y in subject.ground if y != x]
        arena = Arena(subject.pair.restrict(keep), subject.F - {x}, subject.e)
        return Instance(instance.index, arena, params)
    if isinstance(subject, MatroidPair):
        keep = [y for y in subject.ground if y != x]
        return Instance(instance.index, subject.restrict(keep), params)
    return None


def minimize_counterexample(
    suite: Suite, instance: Instance, error: Optional[type] = None
) -> Instance:
    """Delete elements one at a time for as long as the instance keeps failing.

    Elements named by a parameter and the lower edge of an arena stay.
    Pair-trees are returned unchanged. With ``error`` a smaller instance
    must fail with that same exception type.
    """
    current = instance
    shrinking = True
    while shrinking:
        shrinking = False
        subject = current.subject
        if not isinstance(subject, (Arena, MatroidPair)):
            return current
        protected = {v for v in current.params.values() if isinstance(v, str)}
        if isinstance(subject, Arena):
            protected.add(subject.e)
        for x in subject.ground:
            if x in protected:
                continue
            candidate = _without(current, x)
            if candidate is not None and _fails(suite, candidate, error):
                current = candidate
                shrinking = True
                break
    return current


# -- running -----------------------------------------------------------------------


@contextmanager
def _time_guard(seconds: float):
    usable = (
        seconds > 0
        and hasattr(signal, "setitimer")
        and threading.current_thread() is threading.main_thread()
    )
    if not usable:
        yield
        return

    def expire(signum, frame):
        raise InstanceTimeout(f"Instance exceeded {seconds}s")

    previous = signal.signal(signal.SIGALRM, expire)
    signal.setitimer(signal.ITIMER_REAL, seconds)
    try:
        yield
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, previous)


@dataclass
class InstanceResult:
    index: int
    status: str
    outcomes: Counter = field(default_factory=Counter)
    counterexample: Optional[dict] = None


def run_instance(spec: SuiteSpec, index: int) -> InstanceResult:
    """Build and check one instance under the wall-time guard.

    Any exception from the check other than a skip fails the instance and
    is reported with its counterexample.
    """
    suite = SUITES[spec.suite]
    instance = suite.build(spec, index)
    timeout = instance_timeout()
    try:
        with _time_guard(timeout):
            outcomes = suite.check(instance)
    except InstanceSkipped as e:
        return InstanceResult(index, SKIPPED, Counter({f"skipped:{e}": 1}))
    except InstanceTimeout:
        return InstanceResult(index, SKIPPED, Counter({"skipped:timeout": 1}))
    except Exception as e:
        try:
            with _time_guard(timeout):
                smallest = minimize_counterexample(suite, instance, type(e))
        except InstanceTimeout:
            smallest = instance
        counterexample = {
            "error": type(e).__name__,
            "message": str(e),
            "instance": instance_to_dict(spec.suite, instance),
            "minimized": instance_to_dict(spec.suite, smallest),
        }
        return InstanceResult(index, FAILED, counterexample=counterexample)
    return InstanceResult(index, PASSED, Counter(outcomes))


@dataclass
class Report:
    """Merged results of one suite run."""

    spec: SuiteSpec
    instances: int = 0
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    outcomes: Counter = field(default_factory=Counter)
    counterexample: Optional[dict] = None
    wall_time: float = 0.0

    @property
    def suite(self) -> str:
        return self.spec.suite

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def add(self, result: InstanceResult) -> None:
        self.instances += 1
        if result.status == PASSED:
            self.passed += 1
        elif result.status == FAILED:
            self.failed += 1
        else:
            self.skipped += 1
        self.outcomes.update(result.outcomes)
        if result.counterexample is not None:
            current = self.counterexample
            if current is None or result.index < current["instance"]["index"]:
                self.counterexample = result.counterexample

    def body(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "suite": self.suite,
            "instances": self.instances,
            "passed": self.passed,
            "failed": self.failed,
            "skipped": self.skipped,
            "outcomes": dict(sorted(self.outcomes.items())),
            "counterexample": self.counterexample,
        }

    def fingerprint(self) -> str:
        return hashlib.sha256(json.dumps(self.body(), sort_keys=True).encode()).hexdigest()

    def to_dict(self) -> dict:
        data = self.body()
        data["fingerprint"] = self.fingerprint()
        if self.spec.timing:
            data["wall_time"] = round(self.wall_time, 3)
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def to_text(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        lines = [
            f"{self.suite}: {status}",
            f"  Instances: {self.instances} ({self.passed} passed, "
            f"{self.failed} failed, {self.skipped} skipped)",
        ]
        if self.outcomes:
            lines.append("  Outcomes:")
            lines.extend(f"    {name}: {count}" for name, count in sorted(self.outcomes.items()))
        if self.counterexample is not None:
            found = self.counterexample
            index = found["instance"]["index"]
            lines.append(
                f"  Counterexample (instance {index}): {found['error']}: {found['message']}"
            )
            text = found["minimized"]["text"] or found["instance"]["text"]
            lines.extend(f"    {line}" for line in text.splitlines())
            for key, value in found["minimized"]["params"].items():
                lines.append(f"    {key} = {value}")
        lines.append(f"  Wall time: {self.wall_time:.2f}s")
        lines.append(f"  Fingerprint: {self.fingerprint()}")
        return "\n".join(lines)


def run_suite(spec: SuiteSpec) -> Report:
    """Run every instance of ``spec.suite`` and merge the results by index."""
    suite = SUITES[spec.suite]
    total = suite.count(spec)
    report = Report(spec)
    start = time.perf_counter()
    if spec.verbose:
        print(f"Running {suite.name} ({suite.description}): {total} instances", file=sys.stderr)

    if spec.workers > 1 and total > 1:
        chunk = max(1, total // (spec.workers * 4))
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            mapped = pool.map(run_instance, repeat(spec), range(total), chunksize=chunk)
            results = sorted(mapped, key=lambda r: r.index)
    else:
        results = (run_instance(spec, index) for index in range(total))

    for result in results:
        report.add(result)
        if spec.verbose:
            print(f"  Instance {result.index + 1}/{total}: {result.status}", file=sys.stderr)

    report.wall_time = time.perf_counter() - start
    return report


def spot_check_tacticians(spec: SuiteSpec) -> Report:
    """The tactician sweep with the caps and seed of ``spec``."""
    return run_suite(replace(spec, suite="tacticians"))
