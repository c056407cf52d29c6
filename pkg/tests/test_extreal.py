"""Extended-real conventions: saturation, ordering, JSON round trips."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lengthlab import INF
from lengthlab.extreal import ext_add, from_json, is_finite, to_json

# dyadic values (multiples of 1/8) keep float addition exact, so the
# associativity law can be asserted with equality rather than tolerance
dyadics = st.integers(min_value=0, max_value=8 * 1024).map(lambda k: k / 8.0)
extreals = st.one_of(dyadics, st.just(INF))


def test_saturation():
    assert ext_add(1.5, INF) == INF
    assert ext_add(INF, INF) == INF
    assert ext_add(0.0, 2.25) == 2.25
    assert ext_add() == 0.0


def test_total_order_against_inf():
    assert 1e300 < INF
    assert not (INF < INF)
    assert INF <= INF
    assert max(3.0, INF) == INF


def test_rejects_negative_and_nan():
    with pytest.raises(ValueError):
        ext_add(1.0, -0.5)
    with pytest.raises(ValueError):
        from_json(float("nan"))


def test_json_round_trip():
    assert to_json(INF) is None
    assert from_json(None) == INF
    assert from_json(to_json(2.5)) == 2.5
    assert math.isinf(from_json(to_json(INF)))


@given(extreals, extreals, extreals)
def test_addition_associative_commutative(a, b, c):
    assert ext_add(a, b) == ext_add(b, a)
    assert ext_add(ext_add(a, b), c) == ext_add(a, ext_add(b, c))


@given(extreals, extreals)
def test_zero_identity_and_absorption(a, b):
    assert ext_add(a, 0.0) == a
    if a == INF or b == INF:
        assert ext_add(a, b) == INF
