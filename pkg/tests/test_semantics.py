"""The operational oracle: the four-step worked sequence, the shape of
determination states, and the closure properties of consistency."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pmlang import semantics as sem
from pmlang import square as sq

A = sq.OBSERVABLE_BY_NAME["A"]
B = sq.OBSERVABLE_BY_NAME["B"]
C = sq.OBSERVABLE_BY_NAME["C"]
GAMMA = sq.OBSERVABLE_BY_NAME["gamma"]


def states_of(text):
    return [st.describe() for st in sem.trace(text).states]


def test_initial_state_is_empty():
    state = sem.initial_state()
    assert state.is_empty
    assert sem.predicted_value(state, A) is None


def test_every_single_measurement_is_consistent():
    for sym in sq.ALPHABET:
        assert sem.is_consistent((sym,))


def test_four_step_sequence():
    assert states_of("A B c") == [
        "A=+1",
        "A=+1 B=+1 C=+1",
        "C=+1 c=+1 gamma=-1",
    ]
    clash = sem.trace("A B c gamma")
    assert clash.failed_at == 3
    assert not clash.consistent
    assert sem.is_consistent("A B c ~gamma")
    assert sem.is_consistent("")


def test_context_completion_after_two_row_measurements():
    state = sem.final_state("A B")
    assert state.determined == {A: 1, B: 1, C: 1}


def test_incompatible_measurement_erases():
    state = sem.final_state("A b")
    assert state.describe() == "b=+1"


def test_predicted_values():
    after_ab = sem.final_state("A B")
    assert sem.predicted_value(after_ab, C) == 1
    assert sem.predicted_value(sem.final_state("A"), B) is None
    assert sem.predicted_value(sem.final_state("A B c"), A) is None


def test_determined_context():
    assert sem.determined_context(sem.initial_state()) is None
    ctx, values = sem.determined_context(sem.final_state("A B"))
    assert ctx.name == "row0" and values == (1, 1, 1)
    ctx, values = sem.determined_context(sem.final_state("A B c"))
    assert ctx.name == "col2" and values == (1, 1, -1)


def test_agree():
    assert sem.agree("A", "A", A)
    assert not sem.agree("A B", "A ~B", C)
    assert sem.agree("A", "b", GAMMA)  # both undetermined
    with pytest.raises(ValueError):
        sem.agree("A ~A", "A", A)


def test_step_is_a_verdict_not_an_exception():
    res = sem.step(sem.final_state("A"), sq.signed("A", -1))
    assert res is sem.INCONSISTENT
    assert not res.consistent


def test_reachable_state_census():
    """Empty state, 18 signed singletons, 24 context assignments."""
    states = sem.reachable_states()
    assert len(states) == 43
    sizes = [len(s.determined) for s in states]
    assert sizes.count(0) == 1
    assert sizes.count(1) == 18
    assert sizes.count(3) == 24
    assert all(sem.state_is_well_formed(s) for s in states)


def test_iter_consistent_strings_counts():
    by_length = {}
    for symbols, state in sem.iter_consistent_strings(3):
        by_length[len(symbols)] = by_length.get(len(symbols), 0) + 1
        assert state is sem.final_state(symbols)
    assert by_length == {0: 1, 1: 18, 2: 306, 3: 4914}


def test_exhaustive_walk_depth_three():
    """Well-formedness and context persistence over all consistent
    strings of length up to three."""
    def walk(state, depth, had_context):
        assert sem.state_is_well_formed(state)
        has_context = sem.determined_context(state) is not None
        if had_context:
            assert has_context
        if depth == 3:
            return
        for sym in sq.ALPHABET:
            res = sem.step(state, sym)
            if res.state is not None:
                walk(res.state, depth + 1, has_context)

    walk(sem.EMPTY_STATE, 0, False)


# -- property-based checks ------------------------------------------------

tokens = st.sampled_from(sq.ALPHABET)


@st.composite
def consistent_strings(draw, max_len=10):
    """Random consistent strings built by walking consistent continuations."""
    length = draw(st.integers(0, max_len))
    out = []
    state = sem.EMPTY_STATE
    for _ in range(length):
        options = sem.consistent_continuations(state)
        sym = draw(st.sampled_from(options))
        out.append(sym)
        state = sem.step(state, sym).state
    return tuple(out)


@given(st.lists(tokens, max_size=10))
@settings(max_examples=300)
def test_prefix_closure(symbols):
    """Every prefix of the maximal consistent prefix is consistent."""
    state = sem.EMPTY_STATE
    good = 0
    for sym in symbols:
        res = sem.step(state, sym)
        if res.state is None:
            break
        state = res.state
        good += 1
    prefix = tuple(symbols[:good])
    for k in range(good + 1):
        assert sem.is_consistent(prefix[:k])


@given(consistent_strings())
@settings(max_examples=300)
def test_repetition_of_last_token(w):
    if w:
        assert sem.is_consistent(w + (w[-1],))


@given(consistent_strings())
@settings(max_examples=300)
def test_states_stay_well_formed(w):
    state = sem.final_state(w)
    assert state is not None
    assert sem.state_is_well_formed(state)


@given(consistent_strings(), consistent_strings())
@settings(max_examples=200)
def test_agree_is_symmetric(u, v):
    for obs in sq.OBSERVABLES:
        assert sem.agree(u, v, obs) == sem.agree(v, u, obs)
