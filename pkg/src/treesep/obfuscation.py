"""Grammar obfuscation: derivations with nonterminal nodes replaced by
arbitrary binary terms over two fresh letters.

For a derivation d the obfuscated set is defined by
``obf(leaf s) = {s}`` and
``obf(X(t1,t2)) = {s(s1,s2) : s a binary term over the fresh pair,
s1 in obf(t1), s2 in obf(t2)}``.  The language of a grammar is the union
over all derivations.  Note the set only depends on the derivation's shape
and leaf labels, never on which nonterminals appear.
"""

from __future__ import annotations

from .bottomup import Dbta, Nta
from .errors import AlphabetError
from .grammar import CnfGrammar
from .trees import RankedAlphabet, Tree, compose, enumerate_terms

FRESH_PAIR = ("a", "c")


def obf_alphabet(grammar: CnfGrammar, pair=FRESH_PAIR) -> RankedAlphabet:
    """Grammar terminals as arity-0 letters plus the fresh binary/leaf pair."""
    binary, pad = pair
    if binary in grammar.terminals or pad in grammar.terminals:
        raise AlphabetError(f"fresh letters {pair} collide with the terminals")
    letters = {t: 0 for t in grammar.terminals}
    letters[binary] = 2
    letters[pad] = 0
    return RankedAlphabet(letters)


def kop_oracle(derivation: Tree, max_nodes: int, pair=FRESH_PAIR) -> set:
    """Direct recursive enumeration of the obfuscation of one derivation,
    restricted to trees with at most `max_nodes` nodes."""
    binary, pad = pair
    pair_alphabet = RankedAlphabet({binary: 2, pad: 0})

    def go(node: Tree, budget: int) -> set:
        if node.is_leaf():
            return {node} if budget >= 1 else set()
        if budget < 3:
            return set()
        left, right = node.children
        lefts = go(left, budget - 2)
        rights = go(right, budget - 2)
        out = set()
        for shape in enumerate_terms(pair_alphabet, 2, budget):
            room = budget - (shape.size - 2)
            for s1 in lefts:
                if s1.size >= room:
                    continue
                for s2 in rights:
                    if s1.size + s2.size <= room:
                        out.add(compose(shape, (s1, s2)))
        return out

    return go(derivation, max_nodes)


def kop_nta(grammar: CnfGrammar, pair=FRESH_PAIR) -> Nta:
    """Nondeterministic tree automaton recognising the obfuscation.

    States: C for pure fresh-letter trees; per nonterminal X a leaf-member
    state L_X (exactly the letters with a leaf rule from X), a padded-leaf
    carrier P_X (a leaf member wrapped at least once, usable inside a larger
    member but never a member itself), and a binary-member state B_X (closed
    under padding, since wrapping a binary member yields another member).
    Without the P_X carriers the automaton would miss members whose leaf
    argument sits below padding, e.g. the tree obtained by wrapping the left
    argument of a two-leaf derivation.
    """
    binary, pad = pair
    alphabet = obf_alphabet(grammar, pair)
    c_state = "C"

    def l(x):
        return f"L_{x}"

    def p(x):
        return f"P_{x}"

    def b(x):
        return f"B_{x}"

    states = {c_state}
    for x in grammar.nonterminals:
        states |= {l(x), p(x), b(x)}
    transitions = {pad: {(): frozenset({c_state})}}
    for sigma in grammar.terminals:
        targets = {l(x) for x in grammar.leaf_index.get(sigma, ())}
        if targets:
            transitions[sigma] = {(): frozenset(targets)}
    table = {}

    def add(key, value):
        table.setdefault(key, set()).add(value)

    add((c_state, c_state), c_state)
    for x in grammar.nonterminals:
        add((l(x), c_state), p(x))
        add((c_state, l(x)), p(x))
        add((p(x), c_state), p(x))
        add((c_state, p(x)), p(x))
        add((b(x), c_state), b(x))
        add((c_state, b(x)), b(x))
    for x, y, z in grammar.binary_rules:
        for left in (l(y), p(y), b(y)):
            for right in (l(z), p(z), b(z)):
                add((left, right), b(x))
    transitions[binary] = {key: frozenset(values) for key, values in table.items()}
    accepting = {l(grammar.start), b(grammar.start)}
    return Nta(alphabet, states, accepting, transitions)


_dbta_cache: dict = {}


def kop_dbta(grammar: CnfGrammar, pair=FRESH_PAIR) -> Dbta:
    """Determinization of the obfuscation automaton, memoized per grammar."""
    key = (grammar, pair)
    if key not in _dbta_cache:
        _dbta_cache[key] = kop_nta(grammar, pair).determinize()
    return _dbta_cache[key]


def kop_member(grammar: CnfGrammar, tree: Tree, pair=FRESH_PAIR) -> bool:
    """Is the tree in the obfuscation of the grammar?"""
    alphabet = obf_alphabet(grammar, pair)
    alphabet.validate(tree)
    return kop_dbta(grammar, pair).accepts(tree)
