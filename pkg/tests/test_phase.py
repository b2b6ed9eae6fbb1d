from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from topozx.phase import PI, ZERO, Phase

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=64)


def test_reduced_into_range():
    assert Phase(Fraction(5, 2)).value == Fraction(1, 2)
    assert Phase(-1) == PI
    assert Phase(2) == ZERO


def test_pauli_predicates():
    assert ZERO.is_zero() and ZERO.is_pauli()
    assert PI.is_pi() and PI.is_pauli()
    assert not Phase(Fraction(1, 2)).is_pauli()


def test_from_ratio_rejects_bad_denominator():
    with pytest.raises(ValueError):
        Phase.from_ratio(1, 0)


@given(fractions)
def test_json_round_trip(x):
    p = Phase(x)
    assert Phase.from_json(p.to_json()) == p


@given(fractions, fractions)
def test_addition_is_modular(a, b):
    assert (Phase(a) + Phase(b)).value == (a + b) % 2


@given(fractions)
def test_negation_is_inverse(a):
    assert Phase(a) + (-Phase(a)) == ZERO
    assert Phase(a) - Phase(a) == ZERO
