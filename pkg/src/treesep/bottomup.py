"""Deterministic and nondeterministic bottom-up tree automata.

Transition tables may be partial as long as the automaton names a rejecting
sink: every missing entry, and every entry with a sink among its inputs,
resolves to the sink.  This keeps totality virtual, which matters for
automata whose full tables would be astronomically sparse.
"""

from __future__ import annotations

import hashlib
import itertools

from . import fmt
from .errors import AlphabetError, ArityError, FormatError, TransitionError
from .trees import PORT, RankedAlphabet, Tree, enumerate_terms, format_tree


class Dbta:
    """Deterministic bottom-up tree automaton.

    `transitions` maps each letter to a dict from child-state tuples to the
    resulting state.  `sink`, when set, must be a declared non-accepting
    state; it absorbs every missing entry.
    """

    def __init__(self, alphabet, states, accepting, transitions, sink=None):
        self.alphabet = alphabet
        self.states = tuple(sorted(set(states)))
        state_set = set(self.states)
        self.accepting = frozenset(accepting)
        if not self.accepting <= state_set:
            raise FormatError("accepting states not declared")
        self.sink = sink
        if sink is not None:
            if sink not in state_set:
                raise FormatError(f"sink {sink!r} not declared")
            if sink in self.accepting:
                raise FormatError("sink must be non-accepting")
        self.transitions = {}
        for letter, table in transitions.items():
            ar = alphabet.arity(letter)
            cleaned = {}
            for key, value in table.items():
                key = tuple(key)
                if len(key) != ar:
                    raise ArityError(f"{letter!r} transition keyed by {len(key)} states, arity is {ar}")
                if not set(key) <= state_set or value not in state_set:
                    raise FormatError(f"undeclared state in transition {letter}{key} -> {value}")
                if sink is not None and sink in key and value != sink:
                    raise FormatError("transitions touching the sink must yield the sink")
                cleaned[key] = value
            self.transitions[letter] = cleaned
        for letter, _ in alphabet.items():
            self.transitions.setdefault(letter, {})

    def step(self, letter, child_states) -> str:
        key = tuple(child_states)
        if self.sink is not None and self.sink in key:
            return self.sink
        try:
            table = self.transitions[letter]
        except KeyError:
            raise AlphabetError(f"letter {letter!r} not in alphabet") from None
        got = table.get(key)
        if got is None:
            if self.sink is None:
                raise TransitionError(f"no transition for {letter}{key} and no sink")
            return self.sink
        return got

    def eval(self, tree: Tree) -> str:
        """State reached bottom-up; total and deterministic on conforming trees."""
        self.alphabet.validate(tree)
        return self._eval(tree)

    def _eval(self, tree: Tree) -> str:
        return self.step(tree.label, tuple(self._eval(c) for c in tree.children))

    def eval_term(self, term: Tree, port_states) -> str:
        """Value of `term` with port i treated as a subtree evaluated to `port_states[i]`."""
        port_states = tuple(port_states)
        if term.arity != len(port_states):
            raise ArityError(f"term has {term.arity} ports, got {len(port_states)} states")
        self.alphabet.validate(term, ports=True)
        it = iter(port_states)

        def go(node):
            if node.label == PORT:
                return next(it)
            return self.step(node.label, tuple(go(c) for c in node.children))

        return go(term)

    def accepts(self, tree: Tree) -> bool:
        return self.eval(tree) in self.accepting

    def reachable(self) -> list:
        """States some tree evaluates to, in deterministic discovery order."""
        found = []
        seen = set()

        def add(q):
            if q not in seen:
                seen.add(q)
                found.append(q)

        changed = True
        while changed:
            changed = False
            before = len(found)
            for letter, ar in self.alphabet.items():
                if ar == 0:
                    add(self.step(letter, ()))
                else:
                    snapshot = list(found)
                    for key in itertools.product(snapshot, repeat=ar):
                        add(self.step(letter, key))
            changed = len(found) > before
        return found

    def completed(self) -> "Dbta":
        """Equivalent automaton restricted to reachable states, with total tables."""
        reach = self.reachable()
        table = {}
        for letter, ar in self.alphabet.items():
            table[letter] = {
                key: self.step(letter, key) for key in itertools.product(reach, repeat=ar)
            }
        return Dbta(self.alphabet, reach, self.accepting & set(reach), table, sink=None)

    def complement(self) -> "Dbta":
        done = self.completed()
        flipped = set(done.states) - set(done.accepting)
        return Dbta(done.alphabet, done.states, flipped, done.transitions, sink=None)

    def product(self, other: "Dbta", op: str) -> "Dbta":
        """Pairing construction; `op` is one of and / or / andnot."""
        if op not in ("and", "or", "andnot"):
            raise ValueError(f"unknown op {op!r}")
        if self.alphabet != other.alphabet:
            raise AlphabetError("product needs a shared alphabet")
        pairs = []
        seen = set()

        def name(pair):
            return f"{pair[0]}|{pair[1]}"

        def add(pair):
            if pair not in seen:
                seen.add(pair)
                pairs.append(pair)

        table = {letter: {} for letter, _ in self.alphabet.items()}
        while True:
            grew = False
            for letter, ar in self.alphabet.items():
                for combo in itertools.product(list(pairs), repeat=ar) if ar else [()]:
                    key = tuple(name(p) for p in combo)
                    if key in table[letter]:
                        continue
                    target = (
                        self.step(letter, tuple(p[0] for p in combo)),
                        other.step(letter, tuple(p[1] for p in combo)),
                    )
                    add(target)
                    table[letter][key] = name(target)
                    grew = True
            if not grew:
                break
        accepting = set()
        for pair in pairs:
            in_a = pair[0] in self.accepting
            in_b = pair[1] in other.accepting
            keep = (in_a and in_b) if op == "and" else (in_a or in_b) if op == "or" else (in_a and not in_b)
            if keep:
                accepting.add(name(pair))
        return Dbta(self.alphabet, [name(p) for p in pairs], accepting, table, sink=None)

    def is_empty(self):
        """(True, None) if the language is empty, else (False, witness tree).

        The witness has minimal node count; ties break on s-expression text,
        which is exact whenever no label is a prefix of another.
        """
        minsize = {}
        changed = True
        while changed:
            changed = False
            for letter, ar in self.alphabet.items():
                for key in itertools.product(list(minsize), repeat=ar) if ar else [()]:
                    cand = 1 + sum(minsize[q] for q in key)
                    target = self.step(letter, key)
                    if cand < minsize.get(target, float("inf")):
                        minsize[target] = cand
                        changed = True
        live = [q for q in self.accepting if q in minsize]
        if not live:
            return True, None
        best = {}
        changed = True
        while changed:
            changed = False
            for letter, ar in self.alphabet.items():
                for key in itertools.product(list(best), repeat=ar) if ar else [()]:
                    target = self.step(letter, key)
                    if 1 + sum(minsize[q] for q in key) != minsize[target]:
                        continue
                    cand = Tree(letter, tuple(best[q] for q in key))
                    text = format_tree(cand)
                    if target not in best or text < format_tree(best[target]):
                        best[target] = cand
                        changed = True
        witness = min((best[q] for q in live), key=lambda t: (t.size, format_tree(t)))
        return False, witness

    def minimize(self) -> "Dbta":
        """Reachable states merged up to context distinguishability.

        Partition refinement with single-letter contexts: two states split as
        soon as some letter, position, and tuple of reachable sibling states
        sends them to different blocks.  Tree contexts factor through these
        one-node contexts, so the result is the Myhill-Nerode quotient and
        equality of state transformations on it coincides with
        interchangeability in every context.
        """
        reach = self.reachable()
        block = {q: (q in self.accepting) for q in reach}
        while True:
            signature = {}
            for letter, ar in self.alphabet.items():
                for key in itertools.product(reach, repeat=ar):
                    target_block = block[self.step(letter, key)]
                    for i, q in enumerate(key):
                        ctx = (letter, i, tuple(key[:i] + key[i + 1 :]))
                        signature.setdefault(q, {})[ctx] = target_block
            new_block = {}
            rename = {}
            for q in reach:
                sig = (block[q], tuple(sorted(signature.get(q, {}).items())))
                new_block[q] = rename.setdefault(sig, len(rename))
            if len(set(new_block.values())) == len(set(block.values())):
                block = new_block
                break
            block = new_block
        members = {}
        for q in reach:
            members.setdefault(block[q], []).append(q)
        ordered = sorted(members.values(), key=lambda qs: sorted(qs))
        name_of = {}
        for i, qs in enumerate(ordered):
            for q in qs:
                name_of[q] = f"m{i}"
        reps = [qs[0] for qs in ordered]
        table = {}
        for letter, ar in self.alphabet.items():
            table[letter] = {}
            for key in itertools.product(reps, repeat=ar):
                table[letter][tuple(name_of[q] for q in key)] = name_of[self.step(letter, key)]
        accepting = {name_of[q] for q in reach if q in self.accepting}
        sink = name_of[self.sink] if self.sink in name_of else None
        if sink in accepting:
            sink = None
        return Dbta(self.alphabet, set(name_of.values()), accepting, table, sink=sink)

    def to_text(self) -> str:
        lines = ["alphabet:"]
        lines += [f"{name}/{ar}" for name, ar in self.alphabet.items()]
        lines.append(f"states: {' '.join(self.states)}")
        lines.append(f"accepting: {' '.join(sorted(self.accepting))}")
        if self.sink is not None:
            lines.append(f"sink: {self.sink}")
        for letter in sorted(self.transitions):
            for key in sorted(self.transitions[letter]):
                lines.append(f"{letter}({','.join(key)}) -> {self.transitions[letter][key]}")
        return "\n".join(lines) + "\n"

    def fingerprint(self) -> str:
        return hashlib.sha256(self.to_text().encode()).hexdigest()[:16]


class Nta:
    """Nondeterministic bottom-up tree automaton; transitions map tuples to state sets."""

    def __init__(self, alphabet, states, accepting, transitions):
        self.alphabet = alphabet
        self.states = tuple(sorted(set(states)))
        state_set = set(self.states)
        self.accepting = frozenset(accepting)
        if not self.accepting <= state_set:
            raise FormatError("accepting states not declared")
        self.transitions = {}
        for letter, table in transitions.items():
            ar = alphabet.arity(letter)
            cleaned = {}
            for key, values in table.items():
                key = tuple(key)
                values = frozenset(values)
                if len(key) != ar:
                    raise ArityError(f"{letter!r} transition keyed by {len(key)} states, arity is {ar}")
                if not set(key) <= state_set or not values <= state_set:
                    raise FormatError(f"undeclared state in transition {letter}{key}")
                if values:
                    cleaned[key] = values
            self.transitions[letter] = cleaned
        for letter, _ in alphabet.items():
            self.transitions.setdefault(letter, {})

    def eval_set(self, tree: Tree) -> frozenset:
        self.alphabet.validate(tree)
        return self._eval_set(tree)

    def _eval_set(self, tree: Tree) -> frozenset:
        child_sets = [self._eval_set(c) for c in tree.children]
        out = set()
        for key, values in self.transitions[tree.label].items():
            if all(key[i] in child_sets[i] for i in range(len(key))):
                out |= values
        return frozenset(out)

    def accepts(self, tree: Tree) -> bool:
        return bool(self.eval_set(tree) & self.accepting)

    def determinize(self) -> Dbta:
        """Subset construction over reachable subsets; the empty subset is the sink."""
        order = []
        index = {}

        def intern(subset):
            if subset not in index:
                index[subset] = f"d{len(order)}"
                order.append(subset)
                return True
            return False

        table = {letter: {} for letter, _ in self.alphabet.items()}
        while True:
            grew = False
            for letter, ar in self.alphabet.items():
                rel = self.transitions[letter]
                for combo in itertools.product(range(len(order)), repeat=ar) if ar else [()]:
                    subsets = [order[i] for i in combo]
                    key = tuple(index[s] for s in subsets)
                    if key in table[letter]:
                        continue
                    target = set()
                    for rel_key, values in rel.items():
                        if all(rel_key[i] in subsets[i] for i in range(ar)):
                            target |= values
                    if not target:
                        continue
                    fz = frozenset(target)
                    if intern(fz):
                        grew = True
                    table[letter][key] = index[fz]
                    grew = True
            if not grew:
                break
        sink = "dempty"
        states = [index[s] for s in order] + [sink]
        accepting = {index[s] for s in order if s & self.accepting}
        return Dbta(self.alphabet, states, accepting, table, sink=sink)

    def to_text(self) -> str:
        lines = ["alphabet:"]
        lines += [f"{name}/{ar}" for name, ar in self.alphabet.items()]
        lines.append(f"states: {' '.join(self.states)}")
        lines.append(f"accepting: {' '.join(sorted(self.accepting))}")
        for letter in sorted(self.transitions):
            for key in sorted(self.transitions[letter]):
                targets = ",".join(sorted(self.transitions[letter][key]))
                lines.append(f"{letter}({','.join(key)}) -> {{{targets}}}")
        return "\n".join(lines) + "\n"


def smallest_trees(alphabet: RankedAlphabet, max_nodes: int):
    """All trees (no ports) up to the size bound, smallest first."""
    return enumerate_terms(alphabet, 0, max_nodes)


def _parse_common(text: str, where: str):
    letters, headers, transition_lines = fmt.split_document(text)
    alphabet = fmt.parse_alphabet(letters, where)
    states = fmt.header_tokens(headers, "states")
    if not states:
        raise FormatError(f"{where}: missing 'states' header")
    accepting = fmt.header_tokens(headers, "accepting")
    return alphabet, states, accepting, headers, transition_lines


def parse_dbta(text: str) -> Dbta:
    alphabet, states, accepting, headers, lines = _parse_common(text, "dbta")
    sink_tokens = fmt.header_tokens(headers, "sink")
    sink = sink_tokens[0] if sink_tokens else None
    transitions = {}
    for lineno, line in lines:
        lhs, rhs = fmt.split_transition(lineno, line)
        letter, key = fmt.parse_application(lineno, lhs)
        if "{" in rhs:
            raise FormatError(f"line {lineno}: set-valued target in a deterministic automaton")
        transitions.setdefault(letter, {})[key] = rhs
    return Dbta(alphabet, states, accepting, transitions, sink=sink)


def parse_nta(text: str) -> Nta:
    alphabet, states, accepting, _headers, lines = _parse_common(text, "nta")
    transitions = {}
    for lineno, line in lines:
        lhs, rhs = fmt.split_transition(lineno, line)
        letter, key = fmt.parse_application(lineno, lhs)
        if not (rhs.startswith("{") and rhs.endswith("}")):
            raise FormatError(f"line {lineno}: expected a {{...}} target set")
        inner = rhs[1:-1].strip()
        values = {part.strip() for part in inner.split(",")} if inner else set()
        table = transitions.setdefault(letter, {})
        table[key] = table.get(key, frozenset()) | values
    return Nta(alphabet, states, accepting, transitions)
