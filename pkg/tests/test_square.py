"""Structure of the square: observables, contexts, compatibility, the
forced third value, and parity of the context products."""

import itertools

import pytest

from pmlang import square as sq


def test_nine_observables_cover_the_grid():
    assert len(sq.OBSERVABLES) == 9
    assert {(o.row, o.col) for o in sq.OBSERVABLES} == {
        (r, c) for r in range(3) for c in range(3)
    }
    assert [o.name for o in sq.OBSERVABLES] == list(sq.OBSERVABLE_NAMES)


def test_six_contexts_with_one_negative_sign():
    assert len(sq.CONTEXTS) == 6
    negative = [ctx for ctx in sq.CONTEXTS if ctx.sign == -1]
    assert len(negative) == 1
    assert {o.name for o in negative[0].members} == {"C", "c", "gamma"}
    for obs in sq.OBSERVABLES:
        assert sum(obs in ctx.members for ctx in sq.CONTEXTS) == 2


def test_context_member_order():
    row0 = sq.CONTEXTS[0]
    assert [o.name for o in row0.members] == ["A", "B", "C"]
    col2 = sq.CONTEXTS[5]
    assert [o.name for o in col2.members] == ["C", "c", "gamma"]


def test_alphabet_has_18_symbols():
    assert len(sq.ALPHABET) == 18
    assert len({s.index for s in sq.ALPHABET}) == 18
    assert [sq.ALPHABET[i].index for i in range(18)] == list(range(18))


def test_compatible_examples():
    A = sq.signed("A", 1)
    assert sq.compatible(A, sq.signed("B", 1))  # same row
    assert sq.compatible(A, A)
    assert not sq.compatible(A, sq.signed("A", -1))
    assert not sq.compatible(A, sq.signed("b", 1))  # no shared line


def test_compatible_is_symmetric():
    for s, t in itertools.product(sq.ALPHABET, repeat=2):
        assert sq.compatible(s, t) == sq.compatible(t, s)


def test_each_observable_has_four_compatible_partners():
    for obs in sq.OBSERVABLES:
        partners = [o for o in sq.OBSERVABLES if sq.obs_compatible(obs, o)]
        assert len(partners) == 4
        foreign = [
            o
            for o in sq.OBSERVABLES
            if o is not obs and not sq.obs_compatible(obs, o)
        ]
        assert len(foreign) == 4


def test_third_value_examples():
    assert sq.third_value(sq.signed("A", 1), sq.signed("B", -1)) == sq.signed("C", -1)
    assert sq.third_value(sq.signed("C", 1), sq.signed("gamma", 1)) == sq.signed(
        "c", -1
    )
    assert sq.third_value(sq.signed("A", 1), sq.signed("B", 1)) == sq.signed("C", 1)


def test_third_value_closes_context_triples():
    for s, t in itertools.product(sq.ALPHABET, repeat=2):
        if s.obs is t.obs or not sq.compatible(s, t):
            continue
        u = sq.third_value(s, t)
        assert sq.third_value(s, u) == t
        assert sq.third_value(u, t) == s
        ctx = sq.shared_context(s.obs, t.obs)
        assert s.value * t.value * u.value == ctx.sign


def test_third_value_rejects_bad_input():
    with pytest.raises(ValueError):
        sq.third_value(sq.signed("A", 1), sq.signed("A", 1))
    with pytest.raises(ValueError):
        sq.third_value(sq.signed("A", 1), sq.signed("b", 1))


def test_negative_context_count_examples():
    all_plus = sq.SquareFilling((1,) * 9)
    assert sq.negative_context_count(all_plus) == 0
    only_a_negative = sq.SquareFilling((-1,) + (1,) * 8)
    assert sq.negative_context_count(only_a_negative) == 2


def test_every_filling_has_even_negative_count_and_none_is_perfect():
    perfect = 0
    for filling in sq.all_fillings():
        assert sq.negative_context_count(filling) % 2 == 0
        products = []
        for ctx in sq.CONTEXTS:
            p = 1
            for obs in ctx.members:
                p *= filling.value_of(obs)
            products.append(p == ctx.sign)
        if all(products):
            perfect += 1
    assert perfect == 0


def test_token_parsing_round_trip():
    text = "A ~B alpha ~gamma c"
    symbols = sq.parse_string(text)
    assert sq.format_string(symbols) == text
    assert sq.parse_string("") == ()
    assert sq.parse_string("  \n ") == ()


def test_token_errors_carry_position():
    with pytest.raises(sq.TokenError) as err:
        sq.parse_string("A B ~Gamma")
    assert err.value.position == 2
    assert "token 3" in str(err.value)
    with pytest.raises(ValueError):
        sq.parse_token("~~A")
