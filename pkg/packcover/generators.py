"""Seeded random instances and exhaustive catalogs.

Every generator is a pure function of its seed: it builds its own
``random.Random`` and never touches the global generator.
"""

import random
from collections.abc import Iterator
from functools import lru_cache
from itertools import combinations, product
from typing import Optional

import networkx as nx

from .errors import InvalidParameter
from .limits import max_ground
from .matroid import Matroid, MatroidPair, check_axioms, iter_bits, make_from_bases, make_uniform, submasks
from .trees import PairTree, TreeOfMatroids

UNIFORM = "uniform-random-rank"
REPAIRED = "random-downward-closed-repaired"
GRAPHIC = "graphic-sample"
MODELS = (UNIFORM, REPAIRED, GRAPHIC)

_LETTERS = "abcdfghijklmnopqrstuvwxyz"


def element_names(n: int) -> tuple:
    """``e`` followed by ``n - 1`` further letters."""
    if not 0 <= n <= len(_LETTERS) + 1:
        raise InvalidParameter(f"Cannot name {n} elements")
    return ("e",) + tuple(_LETTERS[: n - 1]) if n else ()


def _check_size(n: int) -> None:
    cap = max_ground()
    if not 0 <= n <= cap:
        raise InvalidParameter(f"Size {n} out of range 0..{cap}")


def _repaired(rng: random.Random, n: int) -> bytes:
    """Down-close a few random sets, then add sets until augmentation holds."""
    table = bytearray(1 << n)
    table[0] = 1
    for _ in range(rng.randint(1, max(n, 1))):
        seed_set = sum(1 << i for i in range(n) if rng.random() < 0.5)
        for sub in submasks(seed_set):
            table[sub] = 1
    changed = True
    while changed:
        changed = False
        independent = [m for m in range(1 << n) if table[m]]
        for small in independent:
            size = small.bit_count()
            for large in independent:
                if large.bit_count() != size + 1:
                    continue
                extra = large & ~small
                if any(table[small | bit] for bit in iter_bits(extra)):
                    continue
                grown = small | (extra & -extra)
                for sub in submasks(grown):
                    table[sub] = 1
                changed = True
                break
            if changed:
                break
    return bytes(table)


def _graphic(rng: random.Random, ground: tuple) -> bytes:
    """Cycle matroid of a random multigraph, one edge per element."""
    vertices = rng.randint(1, max(len(ground), 1))
    ends = [(rng.randrange(vertices), rng.randrange(vertices)) for _ in ground]
    table = bytearray(1 << len(ground))
    for mask in range(1 << len(ground)):
        chosen = [ends[i] for i in range(len(ground)) if mask >> i & 1]
        sub = nx.MultiGraph()
        sub.add_nodes_from(range(vertices))
        sub.add_edges_from(chosen)
        rank = vertices - nx.number_connected_components(sub)
        table[mask] = 1 if rank == len(chosen) else 0
    return bytes(table)


def random_matroid(seed: int, n: int, model: str = UNIFORM, ground: Optional[tuple] = None) -> Matroid:
    """A random matroid on ``n`` elements; deterministic in (seed, n, model)."""
    _check_size(n)
    if model not in MODELS:
        raise InvalidParameter(f"Unknown model {model!r}; choose from {', '.join(MODELS)}")
    ground = element_names(n) if ground is None else tuple(ground)
    if len(ground) != n:
        raise InvalidParameter(f"Ground {ground} does not have {n} elements")
    rng = random.Random(f"{model}:{n}:{seed}")
    if model == UNIFORM:
        return make_uniform(rng.randint(0, n), ground)
    table = _repaired(rng, n) if model == REPAIRED else _graphic(rng, ground)
    matroid = Matroid(ground, table)
    defect = check_axioms(matroid)
    if defect is not None:
        raise InvalidParameter(f"Generated table is not a matroid: {defect}")
    return matroid


def random_pair(seed: int, n: int, model: Optional[str] = None, ground: Optional[tuple] = None) -> MatroidPair:
    """Two independently drawn matroids; ``model=None`` picks one per side."""
    rng = random.Random(f"pair:{n}:{seed}")
    sides = []
    for _ in range(2):
        side_model = model or rng.choice(MODELS)
        sides.append(random_matroid(rng.getrandbits(64), n, side_model, ground))
    return MatroidPair(*sides)


def _nondegenerate(matroid: Matroid, dummies) -> bool:
    return not any(matroid.is_loop(d) or matroid.is_coloop(d) for d in dummies)


def random_pairtree(
    seed: int, nodes: int, max_node_ground: int = 4, nondegenerate: bool = True
) -> PairTree:
    """A random pair-tree rooted at the node holding ``e``.

    Nodes are ``t0, t1, ...``; the dummy edge above ``t<i>`` is ``d<i>``.
    With ``nondegenerate`` no dummy edge is a loop or coloop of a node
    matroid, so the tree is an honest iterated 2-sum.
    """
    if nodes < 1:
        raise InvalidParameter("A pair-tree needs at least one node")
    if max_node_ground < 2 and nodes > 1:
        raise InvalidParameter("Nodes joined by an edge need at least two elements")
    rng = random.Random(f"pairtree:{nodes}:{max_node_ground}:{seed}")
    degree = [0] * nodes
    edges = []
    for i in range(1, nodes):
        open_nodes = [j for j in range(i) if degree[j] < max_node_ground - 1]
        if not open_nodes:
            raise InvalidParameter(f"Cannot fit {nodes} nodes with node grounds of at most {max_node_ground}")
        parent = rng.choice(open_nodes)
        degree[parent] += 1
        degree[i] += 1
        edges.append((f"t{parent}", f"t{i}", f"d{i}"))
    names = iter(_LETTERS)
    dummies_at = {f"t{i}": [] for i in range(nodes)}
    for u, v, d in edges:
        dummies_at[u].append(d)
        dummies_at[v].append(d)
    m_nodes, n_nodes = {}, {}
    for i in range(nodes):
        t = f"t{i}"
        dummies = sorted(dummies_at[t], key=lambda d: int(d[1:]))
        own = rng.randint(1, max(1, max_node_ground - len(dummies)))
        elements = ["e"] if i == 0 else [next(names)]
        elements += [next(names) for _ in range(own - 1)]
        ground = tuple(elements + dummies)
        sides = []
        for _ in range(2):
            matroid = None
            for _ in range(20):
                candidate = random_matroid(rng.getrandbits(64), len(ground), rng.choice(MODELS), ground)
                if not nondegenerate or _nondegenerate(candidate, dummies):
                    matroid = candidate
                    break
            if matroid is None:
                matroid = make_uniform(1, ground)
            sides.append(matroid)
        m_nodes[t], n_nodes[t] = sides
    tree_m = TreeOfMatroids(m_nodes, edges, "t0")
    tree_n = TreeOfMatroids(n_nodes, edges, "t0")
    return PairTree(tree_m, tree_n, "e")


# -- catalogs ---------------------------------------------------------------------


def _exchange_holds(bases: tuple) -> bool:
    family = set(bases)
    for b1 in bases:
        for b2 in bases:
            for x in iter_bits(b1 & ~b2):
                if not any((b1 ^ x) | y in family for y in iter_bits(b2 & ~b1)):
                    return False
    return True


@lru_cache(maxsize=None)
def matroid_catalog(n: int) -> tuple:
    """Every labelled matroid on ``element_names(n)``, ``n <= 5``.

    Families of equal-size sets are kept when they satisfy basis exchange;
    the order is by rank, then by the family's masks.
    """
    if not 0 <= n <= 5:
        raise InvalidParameter(f"The catalog covers 0..5 elements, got {n}")
    ground = element_names(n)
    found = []
    for rank in range(n + 1):
        candidates = [sum(1 << i for i in c) for c in combinations(range(n), rank)]
        for size in range(1, len(candidates) + 1):
            for family in combinations(candidates, size):
                if _exchange_holds(family):
                    found.append(make_from_bases(ground, [[ground[i] for i in range(n) if b >> i & 1] for b in family]))
    return tuple(found)


def pair_catalog(n: int) -> Iterator[MatroidPair]:
    """Every ordered pair of catalog matroids on ``n`` elements."""
    catalog = matroid_catalog(n)
    for m, n_side in product(catalog, catalog):
        yield MatroidPair(m, n_side)
