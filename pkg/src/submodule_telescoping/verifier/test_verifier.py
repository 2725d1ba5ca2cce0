#!/usr/bin/env python3
"""
Tests for exact summation, recurrence checks, certificates and guessing.
"""
from fractions import Fraction
from math import comb

import pytest

from submodule_telescoping.exact_algebra.polynomials import RFuncNK
from submodule_telescoping.factor_engine.telescope import TelescopeOptions
from submodule_telescoping.factor_engine.telescope import telescope
from submodule_telescoping.hyperterm.grammar import parse_term
from submodule_telescoping.hyperterm.support import KRange
from submodule_telescoping.hyperterm.term import certificates
from submodule_telescoping.ore_ops.operator import SeqWindow
from submodule_telescoping.ore_ops.operator import right_divmod
from submodule_telescoping.ore_ops.text import parse_op
from submodule_telescoping.utils.errors import InsufficientWindow
from submodule_telescoping.verifier.checks import VerificationReport
from submodule_telescoping.verifier.checks import check_annihilates
from submodule_telescoping.verifier.checks import check_certificate
from submodule_telescoping.verifier.checks import sum_sequence
from submodule_telescoping.verifier.checks import telescoper_certificate
from submodule_telescoping.verifier.checks import zero_sum_probe
from submodule_telescoping.verifier.guess import guess_recurrence
from submodule_telescoping.verifier.guess import required_window

MAIN_TERM = "binomial(n,k)^7/(2*n+3*k)"
CUBIC_TERM = "binomial(3*n,3*k)^2*binomial(3*n,3*k+1)"


def powers_of_two(length: int, start: int = 0) -> SeqWindow:
    return SeqWindow(start, tuple(Fraction(2**n) for n in range(start, start + length)))


def test_sum_sequence():
    assert sum_sequence(parse_term(MAIN_TERM), KRange(), 1, 1).values == (Fraction(7, 10),)
    assert sum_sequence(parse_term("binomial(n,k)"), KRange(), 4, 4).values == (16,)
    assert sum_sequence(parse_term("binomial(n,k)^2"), KRange(), 3, 3).values == (20,)


def test_sum_sequence_explicit_range():
    window = sum_sequence(parse_term("binomial(n,k)"), KRange.parse("0..n-1"), 1, 5)
    assert window.values == tuple(Fraction(2**n - 1) for n in range(1, 6))


def test_check_annihilates():
    assert check_annihilates(parse_op("S - 2"), powers_of_two(10)).passed
    failing = check_annihilates(parse_op("S - 2"), SeqWindow(0, (Fraction(1), Fraction(3))))
    assert not failing.passed
    assert failing.witness["n"] == 0


def test_check_annihilates_skips_leading_zeros():
    window = SeqWindow(0, tuple(Fraction(comb(2 * n, n)) for n in range(8)))
    result = check_annihilates(parse_op("(n+1)*S - (4*n+2)"), window)
    assert result.passed
    assert result.skipped == []
    shifted = check_annihilates(parse_op("(n-3)*((n+1)*S - (4*n+2))"), window)
    assert shifted.passed
    assert shifted.skipped == [3]


def test_check_annihilates_short_window():
    with pytest.raises(InsufficientWindow):
        check_annihilates(parse_op("S^3 - 1"), powers_of_two(2))


def test_gosper_certificate():
    # (k - n/2) * binomial(n,k) = Delta_k(-(k/2) * binomial(n,k))
    h = certificates(parse_term("(2*k-n)*binomial(n,k)"))
    op = parse_op("1")
    cert = RFuncNK.k() * (-1) / (2 * RFuncNK.k() - RFuncNK.n())
    assert check_certificate(op, cert, h).passed
    assert not check_certificate(op, cert + 1, h).passed


def test_telescoper_certificate():
    spec = parse_term("binomial(n,k)/(n+k+1)")
    result = telescope(spec, TelescopeOptions(track_cert=True))
    op, cert = telescoper_certificate(result)
    assert check_certificate(op, cert, certificates(spec)).passed
    window = sum_sequence(spec, KRange(), 1, 20)
    assert check_annihilates(op, window).passed
    assert check_annihilates(result.L_min, window).passed


def test_zero_sum_probe():
    spec = parse_term("binomial(n,k)^3")
    result = telescope(spec, TelescopeOptions(use_symmetry=True))
    (component,) = result.components
    assert not component.zero_sum
    probe = zero_sum_probe(result, component, spec, 6)
    assert not probe.passed


def test_report_table():
    report = VerificationReport()
    report.add(check_annihilates(parse_op("S - 2"), powers_of_two(6)))
    report.add(check_annihilates(parse_op("S - 3"), powers_of_two(6)))
    assert not report.passed
    table = report.to_table(color=False)
    assert table.splitlines()[0].startswith("PASS")
    assert "witness" in table.splitlines()[1]
    assert report.to_json()["passed"] is False


def test_guess_powers_of_two():
    window = powers_of_two(required_window(2, 1))
    assert guess_recurrence(window, 2, 1) == parse_op("S - 2")


def test_guess_central_binomials():
    window = SeqWindow(0, tuple(Fraction(comb(2 * n, n)) for n in range(required_window(1, 1))))
    assert guess_recurrence(window, 1, 1) == parse_op("(n+1)*S - (4*n+2)")


def test_guess_needs_a_long_window():
    with pytest.raises(InsufficientWindow):
        guess_recurrence(powers_of_two(5), 2, 1)


def test_guess_finds_nothing_below_caps():
    window = SeqWindow(0, tuple(Fraction(comb(3 * n, n)) for n in range(required_window(1, 0))))
    assert guess_recurrence(window, 1, 0) is None


@pytest.mark.parametrize("s", [1, 2, 3, *(pytest.param(s, marks=pytest.mark.slow) for s in (4, 5, 6))])
def test_telescoper_annihilates_sums(s):
    spec = parse_term(f"binomial(n,k)^{s}")
    result = telescope(spec, TelescopeOptions(expanded=True))
    window = sum_sequence(spec, KRange(), 1, 40)
    assert check_annihilates(result.L_min, window).passed
    assert check_annihilates(result.L_expanded, window).passed


def test_guess_agrees_with_pipeline_on_franel_numbers():
    spec = parse_term("binomial(n,k)^3")
    result = telescope(spec)
    window = sum_sequence(spec, KRange(), 1, required_window(3, 3))
    guessed = guess_recurrence(window, 3, 3)
    assert guessed.order == result.L_min.order
    assert check_annihilates(result.L_min, window).passed


@pytest.mark.slow
def test_main_example_sums():
    spec = parse_term(MAIN_TERM)
    result = telescope(spec, TelescopeOptions(expanded=True))
    window = sum_sequence(spec, KRange(), 1, 60)
    assert check_annihilates(result.L_min, window).passed
    assert check_annihilates(result.L_expanded, window).passed
    for component in result.components:
        if component.zero_sum:
            assert zero_sum_probe(result, component, spec).passed


@pytest.mark.slow
def test_cubic_example_sums():
    spec = parse_term(CUBIC_TERM)
    result = telescope(spec)
    window = sum_sequence(spec, KRange(), 1, 40)
    assert check_annihilates(result.L_min, window).passed


@pytest.mark.slow
@pytest.mark.parametrize("s", [4, 5, 6])
def test_guess_agrees_with_pipeline_on_binomial_powers(s):
    spec = parse_term(f"binomial(n,k)^{s}")
    result = telescope(spec)
    degree = result.L_min.max_coefficient_degree()
    window = sum_sequence(spec, KRange(), 1, required_window(result.L_min.order, degree))
    guessed = guess_recurrence(window, result.L_min.order, degree)
    assert guessed is not None
    assert guessed.order == result.L_min.order
    assert check_annihilates(guessed, window).passed


@pytest.mark.parametrize(
    "text",
    ["binomial(n,k)/(k+3)", "binomial(n,k)*(k+1)/(k+4)", "binomial(n,k)/(k+1)", "binomial(n,k)^2/(n+k+1)"],
)
def test_telescoper_annihilates_sums_with_prefactor(text):
    spec = parse_term(text)
    result = telescope(spec, TelescopeOptions(expanded=True))
    window = sum_sequence(spec, KRange(), 1, 25)
    assert check_annihilates(result.L_min, window).passed
    assert check_annihilates(result.L_expanded, window).passed


def assert_guess_matches(text: str, order: int):
    spec = parse_term(text)
    result = telescope(spec)
    assert result.L_min.order == order
    degree = result.L_min.max_coefficient_degree()
    window = sum_sequence(spec, KRange(), 1, required_window(order, degree))
    guessed = guess_recurrence(window, order, degree)
    assert guessed is not None
    assert guessed.order == order
    _, rem = right_divmod(guessed, result.L_min)
    assert not rem


@pytest.mark.slow
def test_guess_agrees_with_pipeline_on_main_example():
    assert_guess_matches(MAIN_TERM, 7)


@pytest.mark.slow
def test_guess_agrees_with_pipeline_on_cubic_example():
    assert_guess_matches(CUBIC_TERM, 5)
