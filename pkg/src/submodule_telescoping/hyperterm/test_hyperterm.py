#!/usr/bin/env python3
"""
Tests for term parsing, certificates, evaluation, shift reduction and automorphisms.
"""
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import settings
from hypothesis import strategies as st

from submodule_telescoping.exact_algebra.expression import parse_rational
from submodule_telescoping.exact_algebra.polynomials import Affine
from submodule_telescoping.exact_algebra.polynomials import PolyK
from submodule_telescoping.exact_algebra.polynomials import RFuncNK
from submodule_telescoping.exact_algebra.polynomials import dispersion_set
from submodule_telescoping.exact_algebra.polynomials import shift
from submodule_telescoping.hyperterm.document import parse_document
from submodule_telescoping.hyperterm.document import read_document
from submodule_telescoping.hyperterm.grammar import parse_term
from submodule_telescoping.hyperterm.support import KRange
from submodule_telescoping.hyperterm.support import natural_support
from submodule_telescoping.hyperterm.term import PHI
from submodule_telescoping.hyperterm.term import Binomial
from submodule_telescoping.hyperterm.term import ap_shift_reduce
from submodule_telescoping.hyperterm.term import automorphism_ratio
from submodule_telescoping.hyperterm.term import certificates
from submodule_telescoping.hyperterm.term import eval_term
from submodule_telescoping.hyperterm.term import eval_term_flagged
from submodule_telescoping.hyperterm.term import tau
from submodule_telescoping.utils.errors import InputFileError
from submodule_telescoping.utils.errors import ParseError
from submodule_telescoping.utils.errors import PoleAtPoint
from submodule_telescoping.utils.errors import UnsupportedDenominator

MAIN_TERM = "binomial(n,k)^7/(2*n+3*k)"
CUBIC_TERM = "binomial(3*n,3*k)^2*binomial(3*n,3*k+1)"

TERMS = [
    MAIN_TERM,
    CUBIC_TERM,
    "binomial(n,k)",
    "binomial(n,k)^2*factorial(k)/factorial(n+k)",
    "binomial(2*n,k)*pow(-2,k)",
    "binomial(n,k)*(k+1)/(k+4)",
]


def test_parse_main_term():
    spec = parse_term(MAIN_TERM)
    assert spec.factors == (Binomial(Affine(1, 0, 0), Affine(0, 1, 0), 7),)
    assert spec.prefactor == parse_rational("1/(2*n+3*k)")


def test_parse_cubic_term():
    spec = parse_term(CUBIC_TERM)
    assert len(spec.factors) == 2
    assert sorted(f.exponent for f in spec.factors) == [1, 2]


def test_equal_factors_merge():
    assert parse_term("binomial(n,k)*binomial(n,k)") == parse_term("binomial(n,k)^2")


@pytest.mark.parametrize(
    "text",
    ["binomial(n,k)^0", "binomial(n,k)^2+oops", "binomial(n/2,k)", "binomial(n,k^2)", "pow(n,k)", "bogus(n)"],
)
def test_parse_rejects(text):
    with pytest.raises(ParseError):
        parse_term(text)


def test_unknown_identifier_position():
    with pytest.raises(ParseError) as info:
        parse_term("binomial(n,k)^2+oops")
    assert info.value.position == 16


def test_certificates_of_seventh_power():
    h = certificates(parse_term("binomial(n,k)^7"))
    assert h.r1 == parse_rational("((n+1)/(n-k+1))^7")
    assert h.r2 == parse_rational("((n-k)/(k+1))^7")
    assert h.is_compatible()


def test_compatibility_of_single_binomial():
    h = certificates(parse_term("binomial(n,k)"))
    assert shift(h.r1, 0, 1) * h.r2 == parse_rational("(n+1)/(k+1)")
    assert shift(h.r2, 1, 0) * h.r1 == parse_rational("(n+1)/(k+1)")


@pytest.mark.parametrize("text", TERMS)
def test_all_terms_are_compatible(text):
    assert certificates(parse_term(text)).is_compatible()


@settings(max_examples=200, derandomize=True, deadline=None)
@given(st.sampled_from(TERMS), st.integers(min_value=1, max_value=9), st.integers(min_value=0, max_value=9))
def test_certificates_agree_with_evaluation(text, n0, k0):
    spec = parse_term(text)
    h = certificates(spec)
    for r, (n1, k1) in ((h.r1, (n0 + 1, k0)), (h.r2, (n0, k0 + 1))):
        try:
            here = eval_term(spec, n0, k0)
            there = eval_term(spec, n1, k1)
            expected = r.eval(n0, k0)
        except PoleAtPoint:
            continue
        if here:
            assert there / here == expected


def test_ap_shift_reduce_main_example():
    h = certificates(parse_term(MAIN_TERM))
    r0, h0 = ap_shift_reduce(h)
    assert r0 == parse_rational("1/(2*n+3*k)")
    assert h0.spec == parse_term("binomial(n,k)^7")


def test_ap_shift_reduce_keeps_reduced_term():
    h = certificates(parse_term("binomial(n,k)"))
    r0, h0 = ap_shift_reduce(h)
    assert r0 == 1
    assert h0 == h


@pytest.mark.parametrize(
    "text,r0_text,h0_text",
    [
        ("binomial(n,k)*(k+1)/(k+4)", "(k+1)/(k+4)", "binomial(n,k)"),
        ("binomial(n,k)/(k+3)", "1/(k+3)", "binomial(n,k)"),
        ("binomial(n,k)/(k+1)", "1/(k+1)", "binomial(n,k)"),
        ("binomial(n,k)^2/((n+1)*(n+k+1))", "1/(n+k+1)", "binomial(n,k)^2/(n+1)"),
    ],
)
def test_ap_shift_reduce_moves_the_prefactor(text, r0_text, h0_text):
    r0, h0 = ap_shift_reduce(certificates(parse_term(text)))
    assert r0 == parse_rational(r0_text)
    assert h0.spec == parse_term(h0_text)
    assert h0 == certificates(parse_term(h0_text))


def test_ap_shift_reduce_rejects_nonlinear_prefactor():
    with pytest.raises(UnsupportedDenominator):
        ap_shift_reduce(certificates(parse_term("binomial(n,k)/(n^2+k^2)")))


@pytest.mark.parametrize("text", TERMS)
def test_ap_shift_reduce_is_sound(text):
    h = certificates(parse_term(text))
    r0, h0 = ap_shift_reduce(h)
    assert h0.r1 * shift(r0, 1, 0) / r0 == h.r1
    assert h0.r2 * shift(r0, 0, 1) / r0 == h.r2
    num = PolyK.from_rfuncnk(RFuncNK(h0.r2.num))
    den = PolyK.from_rfuncnk(RFuncNK(h0.r2.den))
    if num.degree() > 0 and den.degree() > 0:
        assert dispersion_set(num, den) == set()
        assert dispersion_set(den, num) == set()


def test_eval_term():
    spec = parse_term(MAIN_TERM)
    assert eval_term(spec, 1, 1) == Fraction(1, 5)
    assert eval_term(parse_term("binomial(n,k)"), 5, 2) == 10
    assert eval_term(parse_term("binomial(n,k)"), 5, 7) == 0


def test_eval_term_poles():
    with pytest.raises(PoleAtPoint):
        eval_term(parse_term("binomial(n,k)/(n-k)"), 3, 3)
    value, flagged = eval_term_flagged(parse_term("binomial(n,k)/(n-k+1)"), 2, 3)
    assert value == 0
    assert flagged


def test_phi_ratio_of_symmetric_term():
    assert automorphism_ratio(parse_term("binomial(n,k)^7"), PHI) == 1


def test_tau_ratio_exists_for_cubic_term():
    spec = parse_term(CUBIC_TERM)
    ratio = automorphism_ratio(spec, tau(3))
    assert isinstance(ratio, RFuncNK)
    # tau applied three times is the shift in k
    product = ratio * shift(ratio, 0, Fraction(1, 3)) * shift(ratio, 0, Fraction(2, 3))
    assert product == certificates(spec).r2


def test_tau_is_not_an_automorphism_of_plain_binomial():
    assert not automorphism_ratio(parse_term("binomial(n,k)"), tau(3))


@pytest.mark.parametrize("text", [CUBIC_TERM, "binomial(n,k)^3", "binomial(2*n,2*k)/(n+1)"])
def test_phi_is_an_involution(text):
    ratio = automorphism_ratio(parse_term(text), PHI)
    assert ratio.reflect() * ratio == 1


def test_natural_support():
    assert natural_support(parse_term("binomial(n,k)"), 5) == (0, 5)
    assert natural_support(parse_term(CUBIC_TERM), 4) == (0, 3)
    assert KRange.parse("0..2*n").bounds(parse_term("pow(2,k)"), 3) == (0, 6)


def test_document_form():
    doc = parse_document('[term]\nexpr = "binomial(n,k)^2"\n\n[sum]\nk_range = "0..n"\n\n[options]\nminimal = true\n')
    assert doc.spec == parse_term("binomial(n,k)^2")
    assert doc.k_range.bounds(doc.spec, 4) == (0, 4)
    assert doc.options == {"minimal": "true"}


def test_document_errors():
    with pytest.raises(ParseError):
        parse_document("[term\nexpr = 1\n")
    with pytest.raises(ParseError):
        parse_document('[sum]\nk_range = "0..n"\n')


def test_read_document(tmp_path):
    path = tmp_path / "term.toml"
    path.write_text('[term]\nexpr = "binomial(n,k)^3"\n', encoding="utf-8")
    assert read_document(str(path)).spec == parse_term("binomial(n,k)^3")
    with pytest.raises(InputFileError) as info:
        read_document(str(tmp_path / "absent.toml"))
    assert info.value.path.endswith("absent.toml")
