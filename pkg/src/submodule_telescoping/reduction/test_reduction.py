#!/usr/bin/env python3
"""
Tests for the standard form modulo Delta_k(Omega), the basis of N and the S_n matrix.
"""
import pytest
from hypothesis import given
from hypothesis import settings
from hypothesis import strategies as st

from submodule_telescoping.exact_algebra.expression import parse_rational
from submodule_telescoping.exact_algebra.polynomials import PolyK
from submodule_telescoping.exact_algebra.polynomials import RFuncN
from submodule_telescoping.exact_algebra.polynomials import RFuncNK
from submodule_telescoping.exact_algebra.polynomials import shift
from submodule_telescoping.hyperterm.grammar import parse_term
from submodule_telescoping.hyperterm.term import certificates
from submodule_telescoping.reduction.context import ReductionContext
from submodule_telescoping.reduction.context import default_degree_cap
from submodule_telescoping.utils.errors import UnsupportedDenominator


def context(text: str) -> ReductionContext:
    return ReductionContext(certificates(parse_term(text)))


def assert_certificate(ctx: ReductionContext, f: RFuncNK) -> None:
    form = ctx.std_form(f, track_cert=True)
    g = form.cert
    assert f - form.frac - form.poly.to_rfuncnk() == shift(g, 0, 1) * ctx.h0.r2 - g


def test_single_binomial_basis():
    ctx = context("binomial(n,k)")
    assert ctx.basis().degrees == (0,)
    assert ctx.coords(PolyK.monomial(1)) == [RFuncN.variable() / 2]


def test_single_binomial_sn_matrix():
    matrix = context("binomial(n,k)").sn_matrix()
    assert matrix.entries == [[RFuncN(2)]]
    assert matrix.invertible


@pytest.mark.parametrize("s, dim", [(1, 1), (2, 1), (3, 3), (4, 3), (5, 5)])
def test_binomial_power_dimension(s, dim):
    assert context(f"binomial(n,k)^{s}").basis().dim == dim


def test_default_degree_cap():
    assert default_degree_cap(certificates(parse_term("binomial(n,k)^7"))) == 36


@pytest.mark.parametrize(
    "text, f",
    [
        ("binomial(n,k)", "1/(k+5)"),
        ("binomial(n,k)^2", "k^5"),
        ("binomial(n,k)^2", "1/(n+2*k+1)^2"),
        ("binomial(n,k)^3", "(n+1)^3/(n-k+1)^3"),
        ("binomial(n,k)^3", "k^2/(n-k+3)^2 + 1/(k+2)"),
        ("binomial(2*n,k)*pow(-2,k)", "1/(k+3)"),
    ],
)
def test_certificate_identity(text, f):
    assert_certificate(context(text), parse_rational(f))


def test_pole_absorbed_by_kernel():
    form = context("binomial(n,k)").std_form(parse_rational("1/(k+5)"))
    assert form.in_submodule()


def test_neutral_pole_is_kept():
    form = context("binomial(n,k)^2").std_form(parse_rational("1/(n+2*k+1)"))
    assert not form.in_submodule()
    assert form.frac == parse_rational("1/(n+2*k+1)")


def test_linearity():
    ctx = context("binomial(n,k)^3")
    f = parse_rational("k^4 + 1/(n-k+2)")
    g = parse_rational("(n+1)/(k+3)^2")
    left = ctx.std_form(f + g)
    a, b = ctx.std_form(f), ctx.std_form(g)
    assert left.frac == a.frac + b.frac
    assert list(left.coords) == [x + y for x, y in zip(a.coords, b.coords)]


def test_idempotence():
    ctx = context("binomial(n,k)^3")
    form = ctx.std_form(parse_rational("k^6/(n+2*k+1) + 1/(k+4)^2"))
    again = ctx.std_form(form.frac + form.poly.to_rfuncnk())
    assert again.frac == form.frac
    assert again.coords == form.coords


def test_shift_commutes_with_reduction():
    ctx = context("binomial(n,k)^3")
    p = PolyK.monomial(3)
    image = ctx.std_form(shift(p.to_rfuncnk(), 1, 0) * ctx.h0.r1)
    assert image.in_submodule()
    assert list(image.coords) == ctx.sn_matrix().twisted_apply(ctx.coords(p))


def test_inverse_shift_certificates():
    ctx = context("binomial(n,k)")
    assert ctx.r1_inverse_shift == parse_rational("(n-k)/n")
    assert ctx.r2_inverse_shift == parse_rational("k/(n-k+1)")


def test_non_affine_denominator():
    with pytest.raises(UnsupportedDenominator):
        context("binomial(n,k)").std_form(parse_rational("1/(n^2+k^2)"))


def test_std_form_json():
    data = context("binomial(n,k)").std_form(parse_rational("k"), track_cert=True).to_json()
    assert data["frac"] == "0"
    assert data["poly_coords"] == ["1/2*n"]
    assert data["cert"] is not None


PROPERTY_SETTINGS = settings(max_examples=200, derandomize=True, deadline=None)

CUBE = context("binomial(n,k)^3")


@st.composite
def summands(draw) -> RFuncNK:
    n, k = RFuncNK.n(), RFuncNK.k()
    f = RFuncNK(draw(st.integers(-5, 5))) * k ** draw(st.integers(0, 6))
    f = f + RFuncNK(draw(st.integers(-3, 3))) * n / (k + draw(st.integers(1, 4))) ** draw(st.integers(1, 2))
    f = f + RFuncNK(draw(st.integers(-3, 3))) / (n - k + draw(st.integers(1, 4)))
    return f + RFuncNK(draw(st.integers(-3, 3))) / (n + 2 * k + draw(st.integers(1, 3)))


@PROPERTY_SETTINGS
@given(summands())
def test_certificate_identity_property(f):
    assert_certificate(CUBE, f)


@PROPERTY_SETTINGS
@given(summands(), summands())
def test_linearity_property(f, g):
    left = CUBE.std_form(f + g)
    a, b = CUBE.std_form(f), CUBE.std_form(g)
    assert left.frac == a.frac + b.frac
    assert list(left.coords) == [x + y for x, y in zip(a.coords, b.coords)]
