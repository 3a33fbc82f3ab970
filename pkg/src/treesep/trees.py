"""Ranked alphabets, trees, and linear terms with ports.

A term is an ordinary tree that may contain the reserved leaf ``*`` (a port).
Ports are numbered 1..n in left-to-right leaf order and each port is a
substitution slot used exactly once, so composition never duplicates an
argument.
"""

from __future__ import annotations

import itertools
import re
from typing import Iterable, Iterator

from .errors import AlphabetError, ArityError, ParseError, ShapeError

PORT = "*"

_NAME = re.compile(r"[A-Za-z0-9]+")


class RankedAlphabet:
    """Finite set of letters, each with a fixed arity.

    Letter names are nonempty alphanumeric tokens; ``*`` is reserved for
    ports.  At least one letter must have arity 0, otherwise no finite tree
    exists over the alphabet.
    """

    __slots__ = ("_letters", "_max")

    def __init__(self, letters: dict):
        if not letters:
            raise AlphabetError("alphabet has no letters")
        for name, ar in letters.items():
            if not isinstance(name, str) or not _NAME.fullmatch(name):
                raise AlphabetError(f"bad letter name {name!r}")
            if not isinstance(ar, int) or ar < 0:
                raise AlphabetError(f"bad arity {ar!r} for letter {name!r}")
        if not any(ar == 0 for ar in letters.values()):
            raise AlphabetError("alphabet needs at least one arity-0 letter")
        self._letters = dict(sorted(letters.items()))
        self._max = max(letters.values())

    @property
    def maxarity(self) -> int:
        return self._max

    def arity(self, name: str) -> int:
        try:
            return self._letters[name]
        except KeyError:
            raise AlphabetError(f"letter {name!r} not in alphabet") from None

    def __contains__(self, name) -> bool:
        return name in self._letters

    def items(self) -> tuple:
        return tuple(self._letters.items())

    def names(self) -> tuple:
        return tuple(self._letters)

    def zero_arity(self) -> tuple:
        return tuple(n for n, a in self._letters.items() if a == 0)

    def extended(self, extra: dict) -> "RankedAlphabet":
        """New alphabet with extra letters; rejects clashes on existing names."""
        merged = dict(self._letters)
        for name, ar in extra.items():
            if name in merged and merged[name] != ar:
                raise AlphabetError(f"letter {name!r} already has arity {merged[name]}")
            merged[name] = ar
        return RankedAlphabet(merged)

    def validate(self, tree: "Tree", ports: bool = False) -> None:
        """Check labels and child counts; `ports=True` additionally admits ``*``."""
        stack = [tree]
        while stack:
            node = stack.pop()
            if node.label == PORT:
                if not ports:
                    raise AlphabetError("ports not allowed here")
                if node.children:
                    raise AlphabetError("port must be a leaf")
                continue
            if len(node.children) != self.arity(node.label):
                raise AlphabetError(
                    f"letter {node.label!r} has arity {self.arity(node.label)}, "
                    f"node has {len(node.children)} children"
                )
            stack.extend(node.children)

    def __eq__(self, other):
        return isinstance(other, RankedAlphabet) and self._letters == other._letters

    def __hash__(self):
        return hash(tuple(self._letters.items()))

    def __repr__(self):
        inner = ", ".join(f"{n}/{a}" for n, a in self._letters.items())
        return f"RankedAlphabet({inner})"


class Tree:
    """Immutable sibling-ordered tree with string labels.

    Equality and hashing are structural.  Values are safe to share between
    threads; nothing mutates a tree after construction.
    """

    __slots__ = ("label", "children", "_hash", "_size", "_arity")

    def __init__(self, label: str, children: Iterable["Tree"] = ()):
        self.label = label
        self.children = tuple(children)
        self._hash = hash((label,) + self.children)
        self._size = -1
        self._arity = -1

    @property
    def size(self) -> int:
        """Number of nodes, ports included."""
        if self._size < 0:
            self._size = 1 + sum(c.size for c in self.children)
        return self._size

    @property
    def arity(self) -> int:
        """Number of ports, i.e. ``*`` leaves."""
        if self._arity < 0:
            if self.label == PORT:
                self._arity = 1
            else:
                self._arity = sum(c.arity for c in self.children)
        return self._arity

    def is_leaf(self) -> bool:
        return not self.children

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, Tree)
            and self._hash == other._hash
            and self.label == other.label
            and self.children == other.children
        )

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Tree[{format_tree(self)}]"


def leaf(label: str) -> Tree:
    return Tree(label)


def subtree_at(tree: Tree, path: Iterable[int]) -> Tree:
    """Node reached by following 1-based child indices from the root."""
    node = tree
    for i in path:
        if i < 1 or i > len(node.children):
            raise ShapeError(f"no child {i} at node {format_tree(node)!r}")
        node = node.children[i - 1]
    return node


def replace_at(tree: Tree, path, replacement: Tree) -> Tree:
    path = tuple(path)
    if not path:
        return replacement
    i = path[0]
    if i < 1 or i > len(tree.children):
        raise ShapeError(f"no child {i} at node {format_tree(tree)!r}")
    kids = list(tree.children)
    kids[i - 1] = replace_at(kids[i - 1], path[1:], replacement)
    return Tree(tree.label, kids)


def compose(term: Tree, args: Iterable[Tree]) -> Tree:
    """Substitute `args[i]` for the i-th port, in left-to-right leaf order.

    The result's arity is the sum of the argument arities.
    """
    args = tuple(args)
    if term.arity != len(args):
        raise ArityError(f"term has {term.arity} ports, got {len(args)} arguments")
    it = iter(args)

    def sub(node: Tree) -> Tree:
        if node.label == PORT and not node.children:
            return next(it)
        if not node.children:
            return node
        return Tree(node.label, tuple(sub(c) for c in node.children))

    return sub(term)


def comb(term: Tree, letters: Iterable[str]) -> Tree:
    """Fully left-nested composition of a binary term over arity-0 letters.

    ``comb(t, [x1..xn]) = t(t(...t(t(x1,x2),x3)...,x_{n-1}),xn)`` with n >= 2.
    """
    names = list(letters)
    if term.arity != 2:
        raise ArityError(f"comb needs a binary term, got arity {term.arity}")
    if len(names) < 2:
        raise ValueError("comb needs at least two letters")
    acc = compose(term, (Tree(names[0]), Tree(names[1])))
    for name in names[2:]:
        acc = compose(term, (acc, Tree(name)))
    return acc


def rotate_at(tree: Tree, path, direction: str) -> Tree:
    """Single re-association at `path`; the leaf sequence is unchanged.

    `direction="right"` rewrites a(a(x,y),z) into a(x,a(y,z)); `"left"` is the
    inverse.  The node and its designated child (left child for a right
    rotation, right child for a left one) must carry the same binary letter.
    """
    node = subtree_at(tree, tuple(path))
    if len(node.children) != 2:
        raise ShapeError(f"node {format_tree(node)!r} is not binary")
    if direction == "right":
        pivot, z = node.children
        if pivot.label != node.label or len(pivot.children) != 2:
            raise ShapeError("left child does not match the node's binary letter")
        x, y = pivot.children
        new = Tree(node.label, (x, Tree(node.label, (y, z))))
    elif direction == "left":
        x, pivot = node.children
        if pivot.label != node.label or len(pivot.children) != 2:
            raise ShapeError("right child does not match the node's binary letter")
        y, z = pivot.children
        new = Tree(node.label, (Tree(node.label, (x, y)), z))
    else:
        raise ValueError(f"direction must be 'left' or 'right', got {direction!r}")
    return replace_at(tree, path, new)


def leaf_word(tree: Tree, keep=None) -> tuple:
    """Left-to-right leaf labels; with `keep`, only labels in that set."""
    out = []
    stack = [tree]
    while stack:
        node = stack.pop()
        if node.is_leaf():
            if keep is None or node.label in keep:
                out.append(node.label)
        else:
            stack.extend(reversed(node.children))
    return tuple(out)


def enumerate_terms(alphabet: RankedAlphabet, arity: int, max_nodes: int) -> Iterator[Tree]:
    """All terms of the given arity with at most `max_nodes` nodes.

    Ports count as nodes.  The stream is duplicate-free, ordered by node
    count and, within one size, by s-expression text, so search logs are
    reproducible.
    """
    positive = [(name, ar) for name, ar in alphabet.items() if ar >= 1]
    memo: dict = {}

    def build(size: int, ports: int) -> list:
        key = (size, ports)
        if key in memo:
            return memo[key]
        out = []
        if size == 1:
            if ports == 1:
                out.append(Tree(PORT))
            elif ports == 0:
                out.extend(Tree(name) for name in alphabet.zero_arity())
        elif size >= 2 and 0 <= ports <= size:
            for name, ar in positive:
                for sizes in _sum_splits(size - 1, ar, minimum=1):
                    for parts in _sum_splits(ports, ar, minimum=0):
                        pools = [build(sizes[i], parts[i]) for i in range(ar)]
                        if any(not pool for pool in pools):
                            continue
                        for kids in itertools.product(*pools):
                            out.append(Tree(name, kids))
        memo[key] = out
        return out

    for size in range(1, max_nodes + 1):
        yield from sorted(build(size, arity), key=format_tree)


def _sum_splits(total: int, parts: int, minimum: int):
    """All `parts`-tuples of ints >= minimum summing to `total`."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        if total >= minimum:
            yield (total,)
        return
    for head in range(minimum, total - minimum * (parts - 1) + 1):
        for rest in _sum_splits(total - head, parts - 1, minimum):
            yield (head,) + rest


def format_tree(tree: Tree) -> str:
    """S-expression text: ``label`` for leaves, ``label(c1,...,cn)`` otherwise."""
    if not tree.children:
        return tree.label
    return f"{tree.label}({','.join(format_tree(c) for c in tree.children)})"


def encode_xml(tree: Tree) -> str:
    """XML encoding with one element per node, no attributes, no whitespace."""
    parts = []

    def walk(node: Tree):
        parts.append(f"<{node.label}>")
        for child in node.children:
            walk(child)
        parts.append(f"</{node.label}>")

    walk(tree)
    return "".join(parts)


class _TreeParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def token(self) -> str:
        self.skip_ws()
        if self.pos >= len(self.text):
            raise ParseError("unexpected end of input", self.pos)
        ch = self.text[self.pos]
        if ch == PORT:
            self.pos += 1
            return PORT
        m = _NAME.match(self.text, self.pos)
        if not m:
            raise ParseError(f"unexpected character {ch!r}", self.pos)
        self.pos = m.end()
        return m.group()

    def expect(self, ch: str):
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != ch:
            raise ParseError(f"expected {ch!r}", self.pos)
        self.pos += 1

    def node(self) -> Tree:
        name = self.token()
        if self.peek() != "(":
            return Tree(name)
        self.expect("(")
        kids = [self.node()]
        while self.peek() == ",":
            self.expect(",")
            kids.append(self.node())
        self.expect(")")
        return Tree(name, kids)


def parse_tree(text: str) -> Tree:
    """Parse the s-expression format; raises ParseError with a position."""
    parser = _TreeParser(text)
    tree = parser.node()
    parser.skip_ws()
    if parser.pos != len(text):
        raise ParseError("trailing input after tree", parser.pos)
    return tree
