"""Text formats for matroids, pairs, arenas and pair-trees.

The grammars are documented in FILE_FORMATS.md. Every format is line
oriented; ``#`` starts a comment and blank lines are ignored. Errors carry
the 1-based line and column of the offending token.
"""

import re
from collections.abc import Iterator
from dataclasses import dataclass
from typing import Optional, Set

from .arena import Arena
from .errors import BasepointDegenerateError, InvalidParameter, NotAMatroidError, ParseError
from .matroid import Matroid, MatroidPair, make_from_circuits, make_uniform
from .trees import PairTree, TreeOfMatroids

_TOKEN = re.compile(r"[{},:]|[^\s{},:#]+")
_INTEGER = re.compile(r"^\d+$")


@dataclass(frozen=True)
class Token:
    text: str
    line: int
    column: int


def _lines(text: str) -> Iterator[list[Token]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        tokens = [Token(m.group(0), number, m.start() + 1) for m in _TOKEN.finditer(body)]
        if tokens:
            yield tokens


class _Cursor:
    """Walks the tokens of one line."""

    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.index = 0

    @property
    def line(self) -> int:
        return self.tokens[0].line

    def at_end(self) -> bool:
        return self.index >= len(self.tokens)

    def peek(self) -> Optional[Token]:
        return None if self.at_end() else self.tokens[self.index]

    def take(self, what: str = "a token") -> Token:
        token = self.peek()
        if token is None:
            last = self.tokens[-1]
            raise ParseError(f"Expected {what} at end of line", last.line, last.column + len(last.text))
        self.index += 1
        return token

    def word(self, what: str = "a name") -> Token:
        token = self.take(what)
        if token.text in "{},:":
            raise ParseError(f"Expected {what}, got {token.text!r}", token.line, token.column)
        return token

    def expect(self, text: str) -> Token:
        token = self.take(repr(text))
        if token.text != text:
            raise ParseError(f"Expected {text!r}, got {token.text!r}", token.line, token.column)
        return token

    def finish(self) -> None:
        token = self.peek()
        if token is not None:
            raise ParseError(f"Unexpected {token.text!r}", token.line, token.column)


def _circuit(cursor: _Cursor, ground: set) -> frozenset:
    cursor.expect("{")
    members = []
    while True:
        token = cursor.word("an element")
        if token.text not in ground:
            raise ParseError(f"Unknown element {token.text!r}", token.line, token.column)
        members.append(token.text)
        closing = cursor.take("',' or '}'")
        if closing.text == "}":
            return frozenset(members)
        if closing.text != ",":
            raise ParseError(f"Expected ',' or '}}', got {closing.text!r}", closing.line, closing.column)


def _matroid_spec(cursor: _Cursor, ground: tuple) -> Matroid:
    """``uniform <m>`` or ``circuits {a,b} ...`` over ``ground``."""
    keyword = cursor.word("'uniform' or 'circuits'")
    try:
        if keyword.text == "uniform":
            rank = cursor.word("a rank")
            if not _INTEGER.match(rank.text):
                raise ParseError(f"Rank must be a non-negative integer, got {rank.text!r}", rank.line, rank.column)
            return make_uniform(int(rank.text), ground)
        if keyword.text == "circuits":
            circuits = []
            while cursor.peek() is not None and cursor.peek().text == "{":
                circuits.append(_circuit(cursor, set(ground)))
            return make_from_circuits(ground, circuits)
    except (NotAMatroidError, InvalidParameter) as e:
        raise ParseError(str(e), keyword.line, keyword.column) from e
    raise ParseError(
        f"Expected 'uniform' or 'circuits', got {keyword.text!r}", keyword.line, keyword.column
    )


def _ground_line(cursor: _Cursor) -> tuple:
    cursor.expect("ground")
    names = []
    while not cursor.at_end():
        token = cursor.word("an element")
        if token.text in names:
            raise ParseError(f"Repeated element {token.text!r}", token.line, token.column)
        names.append(token.text)
    return tuple(names)


def _need(lines: list, index: int, what: str) -> _Cursor:
    if index >= len(lines):
        raise ParseError(f"Missing {what}", lines[-1][0].line + 1 if lines else 1, 1)
    return _Cursor(lines[index])


def parse_matroid(text: str) -> Matroid:
    """Parse ``ground ...`` followed by one matroid line."""
    lines = list(_lines(text))
    ground = _ground_line(_need(lines, 0, "'ground' line"))
    cursor = _need(lines, 1, "matroid line")
    matroid = _matroid_spec(cursor, ground)
    cursor.finish()
    if len(lines) > 2:
        extra = lines[2][0]
        raise ParseError(f"Unexpected {extra.text!r}", extra.line, extra.column)
    return matroid


def _pair_lines(lines: list) -> tuple[MatroidPair, list]:
    cursor = _need(lines, 0, "'ground' line")
    ground = _ground_line(cursor)
    cursor = _need(lines, 1, "'M' line")
    cursor.expect("M")
    m = _matroid_spec(cursor, ground)
    cursor.finish()
    n = m
    rest = lines[2:]
    if rest and rest[0][0].text == "N":
        cursor = _Cursor(rest[0])
        cursor.expect("N")
        n = _matroid_spec(cursor, ground)
        cursor.finish()
        rest = rest[1:]
    return MatroidPair(m, n), rest


def parse_pair(text: str) -> MatroidPair:
    """Parse ``ground``, ``M <spec>`` and an optional ``N <spec>`` line."""
    pair, rest = _pair_lines(list(_lines(text)))
    if rest:
        extra = rest[0][0]
        raise ParseError(f"Unexpected {extra.text!r}", extra.line, extra.column)
    return pair


def parse_arena(text: str) -> Arena:
    """A pair followed by ``upper f ...`` (optional) and ``lower e``."""
    pair, rest = _pair_lines(list(_lines(text)))
    upper, lower = (), None
    for tokens in rest:
        cursor = _Cursor(tokens)
        keyword = cursor.word("'upper' or 'lower'")
        if keyword.text == "upper":
            upper = tuple(cursor.word("an element").text for _ in range(len(tokens) - 1))
        elif keyword.text == "lower":
            lower = cursor.word("an element").text
            cursor.finish()
        else:
            raise ParseError(f"Expected 'upper' or 'lower', got {keyword.text!r}", keyword.line, keyword.column)
    if lower is None:
        raise ParseError("Missing 'lower' line", (rest[-1][0].line if rest else 0) + 1, 1)
    try:
        return Arena(pair, upper, lower)
    except InvalidParameter as e:
        raise ParseError(str(e), rest[-1][0].line, 1) from e


def parse_pairtree(text: str) -> PairTree:
    """Parse ``node``, ``edge`` and ``root`` lines into a pair-tree."""
    m_nodes, n_nodes, edges = {}, {}, []
    root = None
    last_line = 1
    for tokens in _lines(text):
        cursor = _Cursor(tokens)
        last_line = cursor.line
        keyword = cursor.word("'node', 'edge' or 'root'")
        if keyword.text == "node":
            name = cursor.word("a node name")
            if name.text in m_nodes:
                raise ParseError(f"Node {name.text!r} defined twice", name.line, name.column)
            ground = []
            while cursor.peek() is not None and cursor.peek().text != ":":
                ground.append(cursor.word("an element").text)
            cursor.expect(":")
            m_nodes[name.text] = _matroid_spec(cursor, tuple(ground))
            n_nodes[name.text] = m_nodes[name.text]
            if not cursor.at_end():
                cursor.expect(":")
                n_nodes[name.text] = _matroid_spec(cursor, tuple(ground))
            cursor.finish()
        elif keyword.text == "edge":
            u, v, d = (cursor.word(what).text for what in ("a node name", "a node name", "a dummy element"))
            cursor.finish()
            edges.append((u, v, d))
        elif keyword.text == "root":
            if root is not None:
                raise ParseError("Only one 'root' line is allowed", keyword.line, keyword.column)
            node = cursor.word("a node name")
            element = cursor.word("the designated element")
            cursor.finish()
            root = (node.text, element.text)
        else:
            raise ParseError(
                f"Expected 'node', 'edge' or 'root', got {keyword.text!r}", keyword.line, keyword.column
            )
    if root is None:
        raise ParseError("Missing 'root' line", last_line + 1, 1)
    if not m_nodes:
        raise ParseError("A pair-tree needs at least one node", last_line, 1)
    node, element = root
    try:
        tree_m = TreeOfMatroids(m_nodes, edges, node)
        tree_n = TreeOfMatroids(n_nodes, edges, node)
        pairtree = PairTree(tree_m, tree_n, element)
    except (InvalidParameter, BasepointDegenerateError) as e:
        raise ParseError(str(e), last_line, 1) from e
    if pairtree.root != node:
        raise ParseError(f"Element {element} does not belong to node {node}", last_line, 1)
    return pairtree


# -- serialization -----------------------------------------------------------------


def _spec(matroid: Matroid) -> str:
    rank = matroid.full_rank
    if matroid == make_uniform(rank, matroid.ground):
        return f"uniform {rank}"
    circuits = sorted(matroid.circuit_masks)
    body = " ".join("{" + ",".join(matroid.ordered(c)) + "}" for c in circuits)
    return f"circuits {body}".rstrip()


def serialize_matroid(matroid: Matroid) -> str:
    return f"ground {' '.join(matroid.ground)}\n{_spec(matroid)}\n"


def serialize_pair(pair: MatroidPair) -> str:
    text = f"ground {' '.join(pair.ground)}\nM {_spec(pair.M)}\n"
    if pair.N != pair.M:
        text += f"N {_spec(pair.N)}\n"
    return text


def serialize_arena(arena: Arena) -> str:
    text = serialize_pair(arena.pair)
    if arena.upper:
        text += f"upper {' '.join(arena.upper)}\n"
    return text + f"lower {arena.e}\n"


def serialize_pairtree(pairtree: PairTree) -> str:
    lines = []
    for t in pairtree.nodes:
        m, n = pairtree.M.matroid(t), pairtree.N.matroid(t)
        line = f"node {t} {' '.join(m.ground)} : {_spec(m)}"
        if n != m:
            line += f" : {_spec(n.reorder(m.ground))}"
        lines.append(line)
    lines.extend(f"edge {u} {v} {d}" for u, v, d in pairtree.M.edge_list())
    lines.append(f"root {pairtree.root} {pairtree.e}")
    return "\n".join(lines) + "\n"


def parse_size_range(sizes_str: str) -> Set[int]:
    """Parse a size specification into a set of sizes.

    Examples:
        "4" -> {4}
        "5-6" -> {5, 6}
        "3,5" -> {3, 5}

    Raises:
        ValueError: If the specification is invalid
    """
    sizes = set()

    for part in (part.strip() for part in sizes_str.split(",")):
        if not part:
            continue

        range_match = re.match(r"^(\d+)\s*-\s*(\d+)$", part)
        if range_match:
            start, end = int(range_match.group(1)), int(range_match.group(2))
            if start > end:
                raise ValueError(f"Invalid range: start ({start}) > end ({end})")
            if start < 1:
                raise ValueError(f"Sizes must be >= 1, got: {start}")
            sizes.update(range(start, end + 1))
        else:
            size_match = re.match(r"^(-?\d+)$", part)
            if not size_match:
                raise ValueError(f"Invalid size: {part}")
            size = int(size_match.group(1))
            if size < 1:
                raise ValueError(f"Sizes must be >= 1, got: {size}")
            sizes.add(size)

    if not sizes:
        raise ValueError("No valid sizes specified")

    return sizes
