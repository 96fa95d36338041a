"""The grammar: schema instantiation counts against an independent
combinatorial enumeration, witness derivations, derivation shape
properties, and agreement with the operational oracle."""

import itertools
from collections import Counter

from hypothesis import given, settings
from hypothesis import strategies as st

from pmlang import grammar as gr
from pmlang import semantics as sem
from pmlang import square as sq


def test_schema_counts_match_independent_enumeration():
    """Re-derive every schema count from raw grid coordinates only."""
    cells = [(r, c) for r in range(3) for c in range(3)]
    symbols = [(cell, v) for cell in cells for v in (1, -1)]

    def share(p, q):
        return p[0] == q[0] or p[1] == q[1]

    def third_cell(p, q):
        line = (
            [(p[0], k) for k in range(3)]
            if p[0] == q[0]
            else [(k, p[1]) for k in range(3)]
        )
        return next(cell for cell in line if cell != p and cell != q)

    pairs = [
        (x, y)
        for x in symbols
        for y in symbols
        if x[0] != y[0] and share(x[0], y[0])
    ]
    expected = {
        "empty-word": 1,
        "first-symbol": len(symbols),
        "single-stop": len(symbols),
        "single-repeat": len(symbols),
        "single-switch": sum(
            1
            for x in symbols
            for z in symbols
            if x[0] != z[0] and not share(x[0], z[0])
        ),
        "single-extend": len(pairs),
        "pair-stop": len(pairs),
        "pair-repeat": len(pairs),
        "pair-swap": len(pairs),
        "pair-third": len(pairs),
        "pair-branch-last": sum(
            1
            for x, y in pairs
            for z in symbols
            if z[0] != y[0]
            and share(z[0], y[0])
            and z[0] != x[0]
            and not share(z[0], x[0])
        ),
        "pair-branch-third": sum(
            1
            for x, y in pairs
            for u in symbols
            for t in [third_cell(x[0], y[0])]
            if u[0] != t
            and share(u[0], t)
            and not share(u[0], x[0])
            and not share(u[0], y[0])
            and u[0] != x[0]
            and u[0] != y[0]
        ),
        "pair-branch-prior": sum(
            1
            for x, y in pairs
            for w in symbols
            if w[0] != x[0]
            and share(w[0], x[0])
            and w[0] != y[0]
            and not share(w[0], y[0])
        ),
    }
    g = gr.build_grammar()
    assert Counter(rule.schema for rule in g.rules) == expected
    assert len(g.rules) == sum(expected.values()) == 2647
    assert len(g.symbols) == 1 + 18 + len(pairs) == 163


def test_start_rules():
    g = gr.build_grammar()
    starts = [r for r in g.rules if r.lhs is gr.START]
    assert len(starts) == 19  # one per signed symbol plus the empty word
    assert sum(1 for r in starts if r.rhs is None and r.emitted is None) == 1
    singles = {r.rhs for r in starts if r.rhs is not None}
    assert singles == {gr.single(x) for x in sq.ALPHABET}


def test_contains_the_reference_rule_instance():
    g = gr.build_grammar()
    lhs = gr.pair(sq.signed("C", 1), sq.signed("c", 1))
    rhs = gr.pair(sq.signed("c", 1), sq.signed("gamma", -1))
    assert any(
        r.lhs == lhs and r.emitted == sq.signed("c", 1) and r.rhs == rhs
        for r in g.rules
    )


def test_reference_derivation():
    witness = gr.derive_membership("A B c ~gamma")
    assert witness is not None
    assert len(witness.steps) == 5
    assert [step.form() for step in witness.steps] == [
        "[A]",
        "A [A B]",
        "A B [C c]",
        "A B c [c ~gamma]",
        "A B c ~gamma",
    ]
    assert sq.format_string(witness.derived_string()) == "A B c ~gamma"


def test_clashing_string_has_no_derivation():
    assert gr.derive_membership("A B c gamma") is None
    assert gr.derive_membership("A ~A") is None


def test_empty_derivation():
    witness = gr.derive_membership("")
    assert len(witness.steps) == 1
    assert witness.steps[0].rule.schema == "empty-word"
    assert witness.steps[0].form() == "lambda"


def test_single_token_derivations():
    for sym in sq.ALPHABET:
        witness = gr.derive_membership((sym,))
        assert witness is not None and len(witness.steps) == 2


def test_nfa_shape():
    nfa = gr.to_nfa()
    g = gr.build_grammar()
    assert len(nfa.states) == len(g.symbols) + 1
    assert nfa.accepts(sq.parse_string("A"))
    assert nfa.accepts(sq.parse_string("A B c ~gamma"))
    assert not nfa.accepts(sq.parse_string("A B c gamma"))
    assert nfa.accepts(())


def test_grammar_matches_oracle_up_to_length_three():
    nfa = gr.to_nfa()
    for n in range(4):
        for combo in itertools.product(sq.ALPHABET, repeat=n):
            assert nfa.accepts(combo) == sem.is_consistent(combo), combo


def test_branch_through_prior_symbol_is_required():
    """Without the schema that opens a new context through the earlier
    recorded symbol, consistent strings like "A B a" become underivable:
    from the [A B] family one can branch through B or through the
    completed third value C, but not back through A."""
    g = gr.build_grammar()
    pruned = gr.Grammar(
        g.symbols,
        tuple(r for r in g.rules if r.schema != "pair-branch-prior"),
        g.start,
    )
    nfa = gr.to_nfa(pruned)
    w = sq.parse_string("A B a")
    assert sem.is_consistent(w)
    assert not nfa.accepts(w)
    assert gr.derive_membership(w, pruned) is None
    assert gr.derive_membership(w) is not None


def test_pair_symbols_mark_exactly_the_context_determining_promises():
    """A reachable generating symbol is a pair exactly when consuming
    its promised symbol leaves a full context determined."""
    nfa = gr.to_nfa()
    for n in range(3):
        for combo in itertools.product(sq.ALPHABET, repeat=n):
            reached = nfa.run(combo)
            for symbol in reached:
                if not isinstance(symbol, gr.GeneratingSymbol) or symbol.is_start:
                    continue
                extended = sem.final_state(combo + (symbol.promised,))
                assert extended is not None
                has_context = sem.determined_context(extended) is not None
                assert symbol.is_pair == has_context


tokens = st.sampled_from(sq.ALPHABET)


@st.composite
def consistent_strings(draw, max_len=8):
    length = draw(st.integers(0, max_len))
    out = []
    state = sem.EMPTY_STATE
    for _ in range(length):
        sym = draw(st.sampled_from(sem.consistent_continuations(state)))
        out.append(sym)
        state = sem.step(state, sym).state
    return tuple(out)


@given(consistent_strings())
@settings(max_examples=200)
def test_derivations_are_monotone_and_keep_pairs(w):
    witness = gr.derive_membership(w)
    assert witness is not None
    counts = witness.terminal_counts()
    assert all(a <= b for a, b in zip(counts, counts[1:]))
    seen_pair = False
    for step in witness.steps:
        if step.tail is None:
            continue
        if seen_pair:
            assert step.tail.is_pair
        seen_pair = seen_pair or step.tail.is_pair


@given(st.lists(tokens, max_size=8))
@settings(max_examples=300)
def test_membership_matches_oracle_on_random_strings(symbols):
    w = tuple(symbols)
    assert (gr.derive_membership(w) is not None) == sem.is_consistent(w)
