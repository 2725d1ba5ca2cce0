#!/usr/bin/env python3
"""
Tests for recurrence operators: arithmetic, division, lclm, text and application.
"""
import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import settings
from hypothesis import strategies as st

from submodule_telescoping.ore_ops.operator import OreOp
from submodule_telescoping.ore_ops.operator import SeqWindow
from submodule_telescoping.ore_ops.operator import lclm
from submodule_telescoping.ore_ops.operator import lclm_pair
from submodule_telescoping.ore_ops.operator import right_divmod
from submodule_telescoping.ore_ops.text import dumps_op
from submodule_telescoping.ore_ops.text import loads_op
from submodule_telescoping.ore_ops.text import parse_op
from submodule_telescoping.ore_ops.text import print_op
from submodule_telescoping.utils.errors import InsufficientWindow
from submodule_telescoping.utils.errors import InvalidInput
from submodule_telescoping.utils.errors import ParseError

PROPERTY_SETTINGS = settings(max_examples=200, derandomize=True, deadline=None)

coefficient_texts = st.sampled_from(["1", "-1", "2", "n", "n+1", "n-3", "2*n+5", "n^2+1", "-3*n"])


@st.composite
def operators(draw, max_order=2):
    order = draw(st.integers(min_value=0, max_value=max_order))
    terms = [f"({draw(coefficient_texts)})*S^{i}" for i in range(order)]
    terms.append(f"({draw(coefficient_texts)})*S^{order}")
    return parse_op(" + ".join(terms))


def window(fn, start=0, length=12) -> SeqWindow:
    return SeqWindow(start, tuple(Fraction(fn(n)) for n in range(start, start + length)))


def test_print_and_parse_agree():
    text = "(n+1)*S - (4*n+2)"
    op = parse_op(text)
    assert print_op(op) == text
    assert parse_op(print_op(op)) == op
    assert print_op(parse_op("S^3 - 1")) == "S^3 - 1"


def test_shift_commutation_rule():
    """S * n = (n + 1) * S"""
    assert parse_op("S*n") == parse_op("(n+1)*S")


def test_normalized_form():
    op = parse_op("S^-1*((n+1)*S - 1)")
    assert op == parse_op("n - S^-1")
    assert op.normalized() == parse_op("(n+1)*S - 1")
    assert parse_op("2*S - 2").normalized() == parse_op("S - 1")
    assert parse_op("(n+1)/2*S - (n+1)").normalized() == parse_op("S - 2")
    assert parse_op("-S + 1").normalized() == parse_op("S - 1")


def test_parse_error():
    with pytest.raises(ParseError):
        parse_op("S^x")
    with pytest.raises(ParseError):
        parse_op("S + k")


def test_lclm_of_constant_coefficient_operators():
    assert lclm_pair(parse_op("S - 1"), parse_op("S + 1")) == parse_op("S^2 - 1")
    assert lclm([parse_op("S - 1"), parse_op("S - 2")]) == parse_op("S^2 - 3*S + 2")
    assert lclm([parse_op("S - 2"), parse_op("2*S - 4")]) == parse_op("S - 2")
    assert lclm([parse_op("S - 1"), parse_op("S + 1"), parse_op("S - 2")]).order == 3
    with pytest.raises(InvalidInput):
        lclm([])


@PROPERTY_SETTINGS
@given(operators(), operators(max_order=2))
def test_right_divmod_reconstructs(a, b):
    q, r = right_divmod(a, b)
    assert q * b + r == a
    assert r.hi < b.hi or not r


@PROPERTY_SETTINGS
@given(operators(max_order=2), operators(max_order=2))
def test_lclm_is_right_divisible(a, b):
    if a.order < 1 or b.order < 1:
        return
    m = lclm([a, b])
    assert m.order <= a.order + b.order
    assert not right_divmod(m, a)[1]
    assert not right_divmod(m, b)[1]


@st.composite
def first_order_pairs(draw):
    a = draw(operators(max_order=1).filter(lambda op: op.order == 1))
    if draw(st.booleans()):
        return a, parse_op(draw(coefficient_texts)) * a
    return a, draw(operators(max_order=1).filter(lambda op: op.order == 1))


@PROPERTY_SETTINGS
@given(first_order_pairs())
def test_lclm_of_first_order_pair_is_minimal(pair):
    """
    An order-1 common left multiple is p*a = q*b with scalars p, q; the 2x2 system for
    (p, q) has a nonzero solution exactly when its determinant vanishes.
    """
    a, b = pair
    determinant = a.coefficient(0) * b.coefficient(1) - a.coefficient(1) * b.coefficient(0)
    expected = 1 if not determinant else 2
    assert lclm([a, b]).order == expected


def test_apply_annihilates_solutions():
    powers = window(lambda n: 2**n)
    assert parse_op("S - 2").apply(powers).is_zero()
    factorials = window(factorials_of)
    assert parse_op("S - (n+1)").apply(factorials).is_zero()
    result = parse_op("S^2 - S - 1").apply(window(fib))
    assert len(result) == 10
    assert result.is_zero()


def factorials_of(n: int) -> int:
    return 1 if n == 0 else n * factorials_of(n - 1)


def fib(n: int) -> int:
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def test_apply_needs_long_enough_window():
    with pytest.raises(InsufficientWindow):
        parse_op("S^3 - 1").apply(window(lambda n: 1, length=3))


def test_json_form_keeps_operator():
    op = parse_op("(n^2+1)*S^2 - (2*n+1)/(n+3)*S + 5")
    assert loads_op(dumps_op(op)) == op
    entries = {entry["exp"]: entry for entry in json.loads(dumps_op(op))}
    assert entries[1] == {"exp": 1, "num_coeffs": [-1, -2], "den_coeffs": [3, 1]}
    with pytest.raises(InvalidInput):
        loads_op('[{"exp": 0, "num": [1]}]')


def test_scalar_left_multiple_has_same_normal_form():
    op = parse_op("(n+1)*S - (4*n+2)")
    assert (OreOp.scalar(7) * op).normalized() == op.normalized()


@PROPERTY_SETTINGS
@given(operators(), operators(), operators())
def test_product_is_associative_and_distributive(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@settings(max_examples=50, derandomize=True, deadline=None)
@given(operators(), operators())
def test_apply_respects_products(a, b):
    values = window(lambda n: n * n + 3**n, start=4, length=16)
    assert (a * b).apply(values) == a.apply(b.apply(values))
