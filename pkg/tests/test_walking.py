import itertools
import random

import pytest

from treesep.bottomup import smallest_trees
from treesep.errors import AlphabetError, ArityError, FormatError
from treesep.fixtures import (
    always_accept_dtwa,
    even_p_dfa,
    obf_sigma,
    p_prefix_dfa,
    stay_loop_dtwa,
)
from treesep.trees import parse_tree
from treesep.walking import (
    ACCEPT,
    ESCAPE,
    LOOP,
    PARENT,
    REJECT,
    Dtwa,
    behavior_compose,
    behavior_of_leaf,
    dfs_from_dfa,
    parse_dtwa,
    to_dbta,
)

from oracles import SEED, bounded_run, criterion_dfas, leaves_left_to_right, random_dfa, run_inside_host

SIGMA = obf_sigma()


def t(text):
    return parse_tree(text)


def escape_dtwa():
    """Moves to the parent immediately; escapes at the root on any tree."""
    delta = {
        (letter, tag, "out"): ("out", PARENT)
        for letter, _ in SIGMA.items()
        for tag in range(SIGMA.maxarity + 1)
    }
    return Dtwa(SIGMA, ("out",), "out", delta)


def behavior_of_tree(dtwa, tree):
    if tree.is_leaf():
        return behavior_of_leaf(dtwa, tree.label)
    children = [behavior_of_tree(dtwa, c) for c in tree.children]
    return behavior_compose(dtwa, tree.label, children)


class TestRun:
    def test_always_accept_in_zero_moves(self):
        w = always_accept_dtwa()
        for tree in (t("c"), t("a(p,q)"), t("a(a(p,c),q)")):
            outcome = w.run(tree)
            assert outcome.kind == ACCEPT and outcome.steps == 0

    def test_stay_loop_detected_after_one_step(self):
        w = stay_loop_dtwa()
        for tree in (t("c"), t("a(p,q)")):
            outcome = w.run(tree)
            assert outcome.kind == LOOP and outcome.steps == 1

    def test_escape_at_root(self):
        outcome = escape_dtwa().run(t("a(p,q)"))
        assert outcome.kind == ESCAPE and outcome.steps == 1
        assert not escape_dtwa().accepts(t("a(p,q)"))

    def test_alphabet_mismatch(self):
        with pytest.raises(AlphabetError):
            always_accept_dtwa().run(t("z"))

    def test_totality_validated(self):
        with pytest.raises(FormatError):
            Dtwa(SIGMA, ("q",), "q", {("a", 0, "q"): ACCEPT})

    def test_child_moves_bounded_by_arity(self):
        delta = {
            (letter, tag, "q"): ACCEPT
            for letter, _ in SIGMA.items()
            for tag in range(SIGMA.maxarity + 1)
        }
        delta[("c", 0, "q")] = ("q", 1)  # child move on an arity-0 letter
        with pytest.raises(FormatError):
            Dtwa(SIGMA, ("q",), "q", delta)

    def test_agrees_with_step_bounded_simulator(self):
        fixtures = [always_accept_dtwa(), stay_loop_dtwa(), escape_dtwa()]
        fixtures += [dfs_from_dfa(k, SIGMA) for k in (even_p_dfa(), p_prefix_dfa())]
        for w in fixtures:
            for tree in smallest_trees(SIGMA, 9):
                assert w.run(tree).kind == bounded_run(w, tree)

    def test_trace_is_collected(self):
        w = dfs_from_dfa(even_p_dfa(), SIGMA)
        outcome = w.run(t("a(p,q)"), collect_trace=True)
        assert outcome.trace[0] == (w.initial, (), 0)
        assert len(outcome.trace) == outcome.steps + 1


class TestDfsFromDfa:
    def test_all_words_dfa_accepts_everything(self):
        from treesep.fixtures import all_words_dfa

        w = dfs_from_dfa(all_words_dfa(), SIGMA)
        for tree in smallest_trees(SIGMA, 9):
            assert w.accepts(tree)

    def test_even_p_examples_match_leaf_word_oracle(self):
        k = even_p_dfa()
        w = dfs_from_dfa(k, SIGMA)
        for text in ("a(p,a(q,p))", "a(p,a(q,a(p,c)))"):
            tree = t(text)
            word = tuple(x for x in leaves_left_to_right(tree) if x in {"p", "q"})
            assert w.accepts(tree) == k.run(word)
        # concrete values, from the oracle: both leaf words are p q p
        assert w.accepts(t("a(p,a(q,p))"))
        assert w.accepts(t("a(p,a(q,a(p,c)))"))

    def test_exhaustive_leaf_word_agreement(self):
        rng = random.Random(SEED + 8)
        gamma = {"p", "q"}
        for k in [random_dfa(rng) for _ in range(6)]:
            w = dfs_from_dfa(k, SIGMA)
            for tree in smallest_trees(SIGMA, 9):
                word = tuple(x for x in leaves_left_to_right(tree) if x in gamma)
                outcome = w.run(tree)
                assert outcome.kind in (ACCEPT, REJECT), "dfs must never loop or escape"
                assert (outcome.kind == ACCEPT) == k.run(word)

    def test_word_alphabet_must_be_leaf_letters(self):
        bad = random_dfa(random.Random(0), alphabet=("p", "a"))
        with pytest.raises(AlphabetError):
            dfs_from_dfa(bad, SIGMA)


class TestBehaviors:
    def test_all_reject_leaf(self):
        delta = {
            (letter, tag, "q"): REJECT
            for letter, _ in SIGMA.items()
            for tag in range(SIGMA.maxarity + 1)
        }
        w = Dtwa(SIGMA, ("q",), "q", delta)
        reject_leaf = behavior_of_leaf(w, "c")
        assert set(reject_leaf.values()) == {("reject",)}
        composed = behavior_compose(w, "a", (reject_leaf, reject_leaf))
        assert set(composed.values()) == {("reject",)}

    def test_arity_checked(self):
        w = always_accept_dtwa()
        with pytest.raises(ArityError):
            behavior_of_leaf(w, "a")
        with pytest.raises(ArityError):
            behavior_compose(w, "a", (behavior_of_leaf(w, "c"),))

    def test_deterministic_and_congruent(self):
        w = dfs_from_dfa(even_p_dfa(), SIGMA)
        first = behavior_of_tree(w, t("a(p,c)"))
        second = behavior_of_tree(w, t("a(p,c)"))
        assert first == second
        # equal child behaviors give equal compositions even for distinct trees
        left = behavior_of_tree(w, t("a(p,c)"))
        right = behavior_of_tree(w, t("a(c,p)"))
        if left == right:
            assert behavior_compose(w, "a", (left, left)) == behavior_compose(w, "a", (right, right))

    def test_matches_direct_run_inside_host(self):
        fixtures = [
            dfs_from_dfa(even_p_dfa(), SIGMA),
            dfs_from_dfa(p_prefix_dfa(), SIGMA),
            stay_loop_dtwa(),
        ]
        for w in fixtures:
            for subtree in smallest_trees(SIGMA, 7):
                behavior = behavior_of_tree(w, subtree)
                for tag in range(SIGMA.maxarity + 1):
                    for q in w.states:
                        assert behavior[(tag, q)] == run_inside_host(w, subtree, tag, q), (
                            f"disagreement at tag {tag}, state {q} on {subtree!r}"
                        )


class TestToDbta:
    def test_always_accept_single_behavior(self):
        dbta = to_dbta(always_accept_dtwa())
        assert len(dbta.states) == 1
        for tree in smallest_trees(SIGMA, 6):
            assert dbta.accepts(tree)

    def test_stay_loop_accepts_nothing(self):
        dbta = to_dbta(stay_loop_dtwa())
        empty, witness = dbta.is_empty()
        assert empty and witness is None

    def test_exhaustive_agreement_with_runs(self):
        automata = [dfs_from_dfa(k, SIGMA) for k in (even_p_dfa(), p_prefix_dfa())]
        automata += [stay_loop_dtwa(), escape_dtwa()]
        for w in automata:
            dbta = to_dbta(w)
            for tree in smallest_trees(SIGMA, 9):
                assert dbta.accepts(tree) == w.accepts(tree)

    def test_minimized_behavior_counts_regression(self):
        # measured on the fixtures; the count is bounded by
        # |word automaton states| * (maxarity + 2)
        measured = {}
        for name, k in (("even_p", even_p_dfa()), ("p_prefix", p_prefix_dfa())):
            small = to_dbta(dfs_from_dfa(k, SIGMA)).minimize()
            measured[name] = len(small.states)
            assert len(small.states) <= len(k.states) * (SIGMA.maxarity + 2)
        assert measured == {"even_p": 2, "p_prefix": 3}


class TestTextFormat:
    def test_round_trip(self):
        for w in (dfs_from_dfa(even_p_dfa(), SIGMA), stay_loop_dtwa()):
            text = w.to_text()
            back = parse_dtwa(text)
            assert back.to_text() == text
            for tree in smallest_trees(SIGMA, 5):
                assert back.run(tree).kind == w.run(tree).kind

    def test_bad_action_rejected(self):
        w = stay_loop_dtwa()
        text = w.to_text().replace("spin stay", "spin hop", 1)
        with pytest.raises(FormatError):
            parse_dtwa(text)
