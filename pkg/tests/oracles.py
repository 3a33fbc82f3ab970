"""Independent oracles used by the test suite.

Everything here recomputes expected values by brute force or by a second
route (direct recursion, step-bounded simulation, exhaustive enumeration) so
the tests never trust the code path they are checking.
"""

from __future__ import annotations

import itertools
import random

from treesep.bottomup import Dbta
from treesep.trees import PORT, RankedAlphabet, Tree
from treesep.walking import ACCEPT, ESCAPE, LOOP, PARENT, REJECT, ROOT_TAG, STAY, Dtwa
from treesep.words import Dfa

SEED = 20260811


def brute_trees(alphabet: RankedAlphabet, max_nodes: int, ports: int = 0) -> set:
    """All terms up to a size bound, generated by plain recursion over root
    letters: an order-free second route, independent of enumerate_terms."""
    out = set()

    def grow(size, nports):
        if size < 1:
            return set()
        found = set()
        if size == 1:
            if nports == 1:
                found.add(Tree(PORT))
            if nports == 0:
                for name, ar in alphabet.items():
                    if ar == 0:
                        found.add(Tree(name))
            return found
        for name, ar in alphabet.items():
            if ar == 0:
                continue
            for sizes in _splits(size - 1, ar, 1):
                for parts in _splits(nports, ar, 0):
                    pools = [grow(sizes[i], parts[i]) for i in range(ar)]
                    for kids in itertools.product(*pools):
                        found.add(Tree(name, kids))
        return found

    for size in range(1, max_nodes + 1):
        out |= grow(size, ports)
    return out


def _splits(total, parts, minimum):
    if parts == 0:
        return [()] if total == 0 else []
    if parts == 1:
        return [(total,)] if total >= minimum else []
    out = []
    for head in range(minimum, total - minimum * (parts - 1) + 1):
        for rest in _splits(total - head, parts - 1, minimum):
            out.append((head,) + rest)
    return out


def leaves_left_to_right(tree: Tree) -> list:
    """Recursive leaf collection; independent of trees.leaf_word."""
    if not tree.children:
        return [tree.label]
    out = []
    for child in tree.children:
        out.extend(leaves_left_to_right(child))
    return out


def bounded_run(dtwa: Dtwa, tree: Tree, slack: int = 1):
    """Step-bounded walking simulation, no configuration bookkeeping.

    A deterministic run longer than |states| * |nodes| must repeat a
    configuration, so exceeding the bound is reported as a loop.
    """
    bound = len(dtwa.states) * tree.size + slack
    path = []
    node_stack = [tree]
    state = dtwa.initial
    for _ in range(bound + 1):
        node = node_stack[-1]
        tag = path[-1] if path else ROOT_TAG
        act = dtwa.delta[(node.label, tag, state)]
        if act == ACCEPT:
            return ACCEPT
        if act == REJECT:
            return REJECT
        state, move = act
        if move == PARENT:
            if not path:
                return ESCAPE
            path.pop()
            node_stack.pop()
        elif move != STAY:
            node_stack.append(node.children[move - 1])
            path.append(move)
    return LOOP


def run_inside_host(dtwa: Dtwa, subtree: Tree, tag: int, entry: str):
    """Direct simulation of a token entering `subtree` at a position with the
    given tag: stops the moment the token exits upward from the subtree root.

    Returns one of ("accept",), ("reject",), ("loop",), ("exit", state)."""
    bound = len(dtwa.states) * subtree.size + 1
    path = []
    node_stack = [subtree]
    state = entry
    for _ in range(bound + 1):
        node = node_stack[-1]
        local_tag = tag if not path else path[-1]
        act = dtwa.delta[(node.label, local_tag, state)]
        if act == ACCEPT:
            return ("accept",)
        if act == REJECT:
            return ("reject",)
        state, move = act
        if move == PARENT:
            if not path:
                return ("exit", state)
            path.pop()
            node_stack.pop()
        elif move != STAY:
            node_stack.append(node.children[move - 1])
            path.append(move)
    return ("loop",)


def random_dfa(rng: random.Random, max_states: int = 4, alphabet=("p", "q")) -> Dfa:
    n = rng.randint(1, max_states)
    states = [f"k{i}" for i in range(n)]
    delta = {(q, letter): rng.choice(states) for q in states for letter in alphabet}
    accepting = {q for q in states if rng.random() < 0.5}
    return Dfa(alphabet, states, "k0", accepting, delta)


def criterion_dfas(count: int = 20):
    """The fixed family of seeded random word automata shared by the
    acceptance criteria."""
    rng = random.Random(SEED)
    return [random_dfa(rng) for _ in range(count)]


def random_nta(rng: random.Random, alphabet: RankedAlphabet, n_states: int = 3):
    from treesep.bottomup import Nta

    states = [f"n{i}" for i in range(n_states)]
    transitions = {}
    for letter, ar in alphabet.items():
        table = {}
        for key in itertools.product(states, repeat=ar):
            values = {q for q in states if rng.random() < 0.4}
            if values:
                table[key] = frozenset(values)
        transitions[letter] = table
    accepting = {q for q in states if rng.random() < 0.5}
    return Nta(alphabet, states, accepting, transitions)


def random_dbta(rng: random.Random, alphabet: RankedAlphabet, n_states: int = 3) -> Dbta:
    states = [f"r{i}" for i in range(n_states)]
    transitions = {}
    for letter, ar in alphabet.items():
        transitions[letter] = {
            key: rng.choice(states) for key in itertools.product(states, repeat=ar)
        }
    accepting = {q for q in states if rng.random() < 0.5}
    return Dbta(alphabet, states, accepting, transitions)


def kop_language(grammar, max_nodes: int) -> set:
    """The full obfuscation language up to a node bound, via the recursive
    oracle: union over every derivation of every short-enough word.

    A member for a word of length n has at least 2n - 1 nodes, so words
    longer than (max_nodes + 1) // 2 cannot contribute."""
    from treesep.grammar import derivations, generate_words
    from treesep.obfuscation import kop_oracle

    out = set()
    max_word = (max_nodes + 1) // 2
    for word in sorted(generate_words(grammar, max_word)):
        for derivation in derivations(grammar, word):
            out |= kop_oracle(derivation, max_nodes)
    return out


def definitional_l_equivalent(dbta: Dbta, t: Tree, u: Tree,
                              context_nodes: int = 7, filler_nodes: int = 5) -> bool:
    """The quantifier-based reading of interchangeability, bounded.

    Quantifies unary contexts up to `context_nodes` nodes and filler trees up
    to `filler_nodes` nodes.  Filler tuples are deduplicated by the state
    their trees evaluate to, which preserves the answer exactly because
    membership of s(t(fillers)) factors through those states; the factoring
    identity is itself tested elsewhere (eval_term versus compose).
    """
    from treesep.trees import enumerate_terms

    if t.arity != u.arity:
        raise ValueError("arity mismatch")
    filler_states = sorted({dbta.eval(tree)
                            for tree in brute_trees(dbta.alphabet, filler_nodes)})
    contexts = list(enumerate_terms(dbta.alphabet, 1, context_nodes))
    verdict = {}
    for q in dbta.states:
        verdict[q] = tuple(
            dbta.eval_term(ctx, (q,)) in dbta.accepting for ctx in contexts
        )
    for states in itertools.product(filler_states, repeat=t.arity):
        qt = dbta.eval_term(t, states)
        qu = dbta.eval_term(u, states)
        if verdict[qt] != verdict[qu]:
            return False
    return True


def definitional_l_equivalent_literal(dbta: Dbta, t: Tree, u: Tree,
                                      context_nodes: int, filler_nodes: int) -> bool:
    """Fully literal triple loop over contexts, fillers, and membership.

    Exponential; only for cross-validating the optimized oracle at tiny
    bounds."""
    from treesep.trees import compose, enumerate_terms

    fillers = sorted(brute_trees(dbta.alphabet, filler_nodes),
                     key=lambda x: (x.size, str(x)))
    contexts = list(enumerate_terms(dbta.alphabet, 1, context_nodes))
    for args in itertools.product(fillers, repeat=t.arity):
        for ctx in contexts:
            left = dbta.accepts(compose(ctx, (compose(t, args),)))
            right = dbta.accepts(compose(ctx, (compose(u, args),)))
            if left != right:
                return False
    return True
