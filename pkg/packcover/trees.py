"""Finite trees of matroids of overlap 1 and the matroids they assemble to."""

from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Callable, Optional

import networkx as nx

from .arena import Arena
from .errors import InvalidParameter
from .matroid import Matroid, MatroidPair, make_from_circuits, two_sum


class TreeOfMatroids:
    """Matroids on the nodes of a finite tree.

    Adjacent nodes share exactly one element, the dummy edge of the tree
    edge between them; all other node grounds are disjoint. The ground set
    is the union of the node grounds without the dummy edges.
    """

    def __init__(self, matroids: Mapping, edges: Iterable = (), root: Optional[str] = None):
        graph = nx.Graph()
        for node, matroid in matroids.items():
            graph.add_node(str(node), matroid=matroid)
        if graph.number_of_nodes() == 0:
            raise InvalidParameter("A tree of matroids needs at least one node")
        for u, v, dummy in edges:
            u, v = str(u), str(v)
            for node in (u, v):
                if node not in graph:
                    raise InvalidParameter(f"Edge {u}-{v} names an unknown node {node}")
            if u == v or graph.has_edge(u, v):
                raise InvalidParameter(f"Edge {u}-{v} is a loop or repeated")
            graph.add_edge(u, v, dummy=str(dummy))
        if not nx.is_tree(graph):
            raise InvalidParameter("Nodes and edges do not form a tree")
        self.graph = graph
        self.root = str(root) if root is not None else next(iter(graph.nodes))
        if self.root not in graph:
            raise InvalidParameter(f"Root {self.root} is not a node")
        self._check_grounds()

    def _check_grounds(self) -> None:
        owners = {}
        for node in self.graph.nodes:
            for x in self.matroid(node).ground:
                owners.setdefault(x, []).append(node)
        seen = set()
        for u, v, dummy in self.graph.edges(data="dummy"):
            if dummy in seen:
                raise InvalidParameter(f"Dummy edge {dummy} is used by two tree edges")
            seen.add(dummy)
            if sorted(owners.get(dummy, [])) != sorted((u, v)):
                raise InvalidParameter(
                    f"Dummy edge {dummy} must lie in exactly the grounds of {u} and {v}"
                )
        for x, nodes in owners.items():
            if len(nodes) > 1 and x not in seen:
                raise InvalidParameter(f"Element {x} is shared by {sorted(nodes)} but is no dummy edge")

    # -- structure --------------------------------------------------------------

    @cached_property
    def nodes(self) -> tuple:
        """Nodes by height: the root first, then breadth-first."""
        return (self.root,) + tuple(v for _, v in nx.bfs_edges(self.graph, self.root))

    @cached_property
    def _parents(self) -> dict:
        return dict(nx.bfs_predecessors(self.graph, self.root))

    def parent(self, node: str) -> Optional[str]:
        return self._parents.get(node)

    def children(self, node: str) -> tuple:
        return tuple(v for v in self.graph.neighbors(node) if v != self.parent(node))

    @cached_property
    def edges_in_order(self) -> tuple:
        """Tree edges as ``(parent, child)`` pairs, breadth-first."""
        return tuple(nx.bfs_edges(self.graph, self.root))

    def matroid(self, node: str) -> Matroid:
        return self.graph.nodes[node]["matroid"]

    def dummy(self, u: str, v: str) -> str:
        return self.graph.edges[u, v]["dummy"]

    @cached_property
    def dummies(self) -> frozenset:
        return frozenset(d for _, _, d in self.graph.edges(data="dummy"))

    @cached_property
    def ground(self) -> tuple:
        result = []
        for node in self.nodes:
            result.extend(x for x in self.matroid(node).ground if x not in self.dummies)
        return tuple(result)

    def node_of(self, element: str) -> str:
        for node in self.nodes:
            if element in self.matroid(node).ground and element not in self.dummies:
                return node
        raise InvalidParameter(f"Element {element} is not in the ground set of the tree")

    def path(self, t: str, u: str) -> list:
        return nx.shortest_path(self.graph, t, u)

    def edge_list(self) -> list:
        return [(u, v, self.dummy(u, v)) for u, v in self.edges_in_order]

    @cached_property
    def edge_set(self) -> frozenset:
        """Tree edges without orientation, as ``(endpoints, dummy)``."""
        return frozenset((frozenset((u, v)), d) for u, v, d in self.edge_list())

    # -- derived trees ------------------------------------------------------------

    def map(self, transform: Callable[[str, Matroid], Matroid], root: Optional[str] = None) -> "TreeOfMatroids":
        matroids = {t: transform(t, self.matroid(t)) for t in self.nodes}
        return TreeOfMatroids(matroids, self.edge_list(), self.root if root is None else root)

    def rerooted(self, root: str) -> "TreeOfMatroids":
        return self.map(lambda t, m: m, root)

    def dual(self) -> "TreeOfMatroids":
        return self.map(lambda t, m: m.dual())

    def subtree(self, parent: str, node: str) -> "TreeOfMatroids":
        """The component of ``node`` once the edge to ``parent`` is removed.

        Its dummy edge towards ``parent`` becomes an ordinary element.
        """
        if not self.graph.has_edge(parent, node):
            raise InvalidParameter(f"{parent}-{node} is not a tree edge")
        graph = self.graph.copy()
        graph.remove_edge(parent, node)
        keep = nx.node_connected_component(graph, node)
        matroids = {t: self.matroid(t) for t in self.nodes if t in keep}
        edges = [(u, v, d) for u, v, d in self.edge_list() if u in keep and v in keep]
        return TreeOfMatroids(matroids, edges, node)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TreeOfMatroids):
            return NotImplemented
        return (
            set(self.nodes) == set(other.nodes)
            and self.edge_set == other.edge_set
            and all(self.matroid(t) == other.matroid(t) for t in self.nodes)
        )

    def __hash__(self) -> int:
        return hash((frozenset(self.nodes), self.edge_set))

    def __repr__(self) -> str:
        return f"TreeOfMatroids(nodes={list(self.nodes)}, edges={self.edge_list()})"


# -- precircuits --------------------------------------------------------------------


@dataclass(frozen=True)
class Precircuit:
    """A connected set of nodes with one circuit chosen at each.

    At a node ``t`` of the set, the dummy edge towards a neighbour lies in
    the chosen circuit exactly when the neighbour is in the set as well.
    """

    nodes: frozenset
    circuits: tuple

    def circuit_at(self, node: str) -> frozenset:
        return dict(self.circuits)[node]

    def underlying(self, tree: TreeOfMatroids) -> frozenset:
        union = frozenset().union(*(c for _, c in self.circuits))
        return union - tree.dummies

    def restrict(self, nodes: Iterable) -> "Precircuit":
        keep = frozenset(nodes) & self.nodes
        return Precircuit(keep, tuple((t, c) for t, c in self.circuits if t in keep))

    def to_dict(self) -> dict:
        return {t: sorted(c) for t, c in self.circuits}


def _node_circuits(matroid: Matroid) -> list:
    return [matroid.names(c) for c in matroid.circuit_masks]


def _grow(tree: TreeOfMatroids, node: str, circuit: frozenset) -> Iterator[list]:
    """Completions below ``node`` once its circuit is fixed."""
    branches = []
    for child in tree.children(node):
        d = tree.dummy(node, child)
        if d not in circuit:
            continue
        options = []
        for below in _node_circuits(tree.matroid(child)):
            if d in below:
                options.extend(_grow(tree, child, below))
        branches.append(options)
    for combo in product(*branches):
        rest = [pair for part in combo for pair in part]
        yield [(node, circuit)] + rest


def is_precircuit(tree: TreeOfMatroids, precircuit: Precircuit) -> bool:
    nodes = precircuit.nodes
    if not nodes or not nx.is_connected(tree.graph.subgraph(nodes)):
        return False
    chosen = dict(precircuit.circuits)
    if set(chosen) != set(nodes):
        return False
    for t in nodes:
        matroid = tree.matroid(t)
        if chosen[t] not in matroid.circuits():
            return False
        for neighbour in tree.graph.neighbors(t):
            if (tree.dummy(t, neighbour) in chosen[t]) != (neighbour in nodes):
                return False
    return True


def enumerate_precircuits(tree: TreeOfMatroids) -> Iterator[Precircuit]:
    """Every precircuit, grouped by its top node in height order."""
    order = {t: i for i, t in enumerate(tree.nodes)}
    for top in tree.nodes:
        parent = tree.parent(top)
        upward = None if parent is None else tree.dummy(parent, top)
        for circuit in _node_circuits(tree.matroid(top)):
            if upward is not None and upward in circuit:
                continue
            for chosen in _grow(tree, top, circuit):
                chosen.sort(key=lambda pair: order[pair[0]])
                yield Precircuit(frozenset(t for t, _ in chosen), tuple(chosen))


def enumerate_psi_circuits(tree: TreeOfMatroids) -> list:
    """Minimal nonempty underlying sets, each with one witnessing precircuit.

    The result is ordered by size, then by position in the ground set.
    """
    index = {x: i for i, x in enumerate(tree.ground)}
    witnesses = {}
    for precircuit in enumerate_precircuits(tree):
        underlying = precircuit.underlying(tree)
        if underlying and underlying not in witnesses:
            witnesses[underlying] = precircuit

    def sort_key(s):
        return (len(s), sum(1 << index[x] for x in s))

    minimal = []
    for candidate in sorted(witnesses, key=sort_key):
        if not any(kept < candidate for kept, _ in minimal):
            minimal.append((candidate, witnesses[candidate]))
    return minimal


def assemble_tree(tree: TreeOfMatroids) -> Matroid:
    """The matroid on the ground of ``tree`` whose circuits are the minimal underlying sets."""
    circuits = [c for c, _ in enumerate_psi_circuits(tree)]
    return make_from_circuits(tree.ground, circuits)


def iterated_two_sum(tree: TreeOfMatroids) -> Matroid:
    """2-sum along every tree edge; raises when a dummy edge is degenerate."""
    result = tree.matroid(tree.root)
    for parent, child in tree.edges_in_order:
        result = two_sum(result, tree.matroid(child), tree.dummy(parent, child))
    return result


def tree_minor(tree: TreeOfMatroids, contract: Iterable = (), delete: Iterable = ()) -> TreeOfMatroids:
    """Node-wise minor; ``contract`` and ``delete`` avoid the dummy edges."""
    contract, delete = frozenset(contract), frozenset(delete)
    if (contract | delete) & tree.dummies:
        raise InvalidParameter(f"Cannot remove dummy edges {sorted((contract | delete) & tree.dummies)}")
    unknown = (contract | delete) - set(tree.ground)
    if unknown:
        raise InvalidParameter(f"Elements {sorted(unknown)} are not in the ground set of the tree")
    if contract & delete:
        raise InvalidParameter(f"Contracted and deleted sets overlap in {sorted(contract & delete)}")

    def node_minor(t: str, matroid: Matroid) -> Matroid:
        here = set(matroid.ground)
        return matroid.minor(contract & here, delete & here)

    return tree.map(node_minor)


def verify_tom_minor(tree: TreeOfMatroids, contract: Iterable = (), delete: Iterable = ()) -> bool:
    """Assembling the node-wise minor gives the minor of the assembled matroid."""
    contract, delete = frozenset(contract), frozenset(delete)
    left = assemble_tree(tree_minor(tree, contract, delete))
    right = assemble_tree(tree).minor(contract, delete)
    return left == right


# -- pair-trees -----------------------------------------------------------------


@dataclass(frozen=True)
class AssembledPair:
    tree_M: TreeOfMatroids
    tree_N: TreeOfMatroids
    assembled: MatroidPair


@dataclass(frozen=True)
class PairTree:
    """Two trees of matroids on the same tree, node grounds and dummy edges.

    The tree is rooted at the node holding the designated element ``e``.
    """

    M: TreeOfMatroids
    N: TreeOfMatroids
    e: str

    def __post_init__(self):
        if set(self.M.nodes) != set(self.N.nodes):
            raise InvalidParameter("M and N trees have different nodes")
        if self.M.edge_set != self.N.edge_set:
            raise InvalidParameter("M and N trees have different edges or dummy edges")
        for t in self.M.nodes:
            if set(self.M.matroid(t).ground) != set(self.N.matroid(t).ground):
                raise InvalidParameter(f"Node {t} has different grounds on the two sides")
        root = self.M.node_of(self.e)
        if self.M.root != root:
            object.__setattr__(self, "M", self.M.rerooted(root))
        if self.N.root != root:
            object.__setattr__(self, "N", self.N.rerooted(root))

    @property
    def root(self) -> str:
        return self.M.root

    @property
    def nodes(self) -> tuple:
        return self.M.nodes

    @property
    def ground(self) -> tuple:
        return self.M.ground

    def parent(self, node: str) -> Optional[str]:
        return self.M.parent(node)

    def children(self, node: str) -> tuple:
        return self.M.children(node)

    def node_pair(self, node: str) -> MatroidPair:
        return MatroidPair(self.M.matroid(node), self.N.matroid(node))

    def lower_edge(self, node: str) -> str:
        parent = self.parent(node)
        return self.e if parent is None else self.M.dummy(parent, node)

    def upper_edges(self, node: str) -> frozenset:
        return frozenset(self.M.dummy(node, c) for c in self.children(node))

    def child_across(self, node: str, edge: str) -> str:
        for child in self.children(node):
            if self.M.dummy(node, child) == edge:
                return child
        raise InvalidParameter(f"{edge} is not an upper edge of node {node}")

    def arena_at(self, node: str) -> Arena:
        return Arena(self.node_pair(node), self.upper_edges(node), self.lower_edge(node))

    def dual(self) -> "PairTree":
        return PairTree(self.M.dual(), self.N.dual(), self.e)

    def minor(self, contract: Iterable = (), delete: Iterable = ()) -> "PairTree":
        if self.e in set(contract) | set(delete):
            raise InvalidParameter(f"The designated element {self.e} must stay")
        return PairTree(tree_minor(self.M, contract, delete), tree_minor(self.N, contract, delete), self.e)

    def subtree_pair(self, node: str) -> MatroidPair:
        """Assembled pair of the part of the tree hanging below ``node``."""
        parent = self.parent(node)
        if parent is None:
            return assemble(self).assembled
        m = assemble_tree(self.M.subtree(parent, node))
        n = assemble_tree(self.N.subtree(parent, node))
        return MatroidPair(m, n)


def assemble(pairtree: PairTree) -> AssembledPair:
    return AssembledPair(
        pairtree.M, pairtree.N, MatroidPair(assemble_tree(pairtree.M), assemble_tree(pairtree.N))
    )


def arena_at(pairtree: PairTree, node: str) -> Arena:
    """``A(t)``: upper edges towards the children, lower edge towards the parent."""
    if node not in pairtree.M.graph:
        raise InvalidParameter(f"Unknown node {node}")
    return pairtree.arena_at(node)


def _witness_precircuit(
    tree: TreeOfMatroids, edge: str, allowed: frozenset
) -> Optional[Precircuit]:
    for precircuit in enumerate_precircuits(tree):
        underlying = precircuit.underlying(tree)
        if edge in underlying and underlying <= allowed | {edge}:
            return precircuit
    return None


def pick_compatible_precircuits(
    tree: TreeOfMatroids, X: Iterable, e: Optional[str] = None
) -> dict:
    """Precircuits witnessing which lower edges ``X`` spans, chosen compatibly.

    A non-root node ``u`` is picked when a precircuit of the part below ``u``
    has an underlying set containing the dummy edge above ``u`` and lying in
    ``X`` plus that edge. The root is picked when ``e`` is spanned by
    ``X - e``. Nodes are handled by height; a node inside the precircuit of
    an ancestor reuses that precircuit's restriction, so that any two chosen
    precircuits agree on the nodes they share.
    """
    X = frozenset(X)
    chosen = {}
    for u in tree.nodes:
        parent = tree.parent(u)
        if parent is None:
            if e is None:
                continue
            found = _witness_precircuit(tree, e, X - {e})
            if found is not None:
                chosen[u] = found
            continue
        below = tree.subtree(parent, u)
        edge = tree.dummy(parent, u)
        inherited = None
        for ancestor in reversed(tree.path(tree.root, u)[:-1]):
            if ancestor in chosen and u in chosen[ancestor].nodes:
                inherited = chosen[ancestor]
        if inherited is not None:
            chosen[u] = inherited.restrict(below.nodes)
            continue
        found = _witness_precircuit(below, edge, X & set(below.ground))
        if found is not None:
            chosen[u] = found
    return chosen


def precircuits_compatible(family: Mapping) -> bool:
    """Any two precircuits of ``family`` choose the same circuit at a shared node."""
    seen = {}
    for precircuit in family.values():
        for node, circuit in precircuit.circuits:
            if seen.setdefault(node, circuit) != circuit:
                return False
    return True
