"""
Term grammar: the shared expression syntax extended with the factor calls
binomial(A, B), factorial(A) and pow(q, A), where A and B are integer-affine in n and k.
"""
from dataclasses import dataclass
from fractions import Fraction

from submodule_telescoping.exact_algebra.expression import Algebra
from submodule_telescoping.exact_algebra.expression import parse
from submodule_telescoping.exact_algebra.polynomials import Affine
from submodule_telescoping.exact_algebra.polynomials import RFuncNK
from submodule_telescoping.exact_algebra.polynomials import is_affine
from submodule_telescoping.hyperterm.term import Binomial
from submodule_telescoping.hyperterm.term import Factorial
from submodule_telescoping.hyperterm.term import GeometricPower
from submodule_telescoping.hyperterm.term import TermSpec
from submodule_telescoping.utils.errors import InvalidInput
from submodule_telescoping.utils.errors import ParseError


@dataclass(frozen=True)
class PartialTerm:
    factors: tuple
    rational: RFuncNK


def _scale_form(a: Affine, e: int) -> Affine:
    return Affine(a.n_coeff * e, a.k_coeff * e, a.const * e)


def _raise_factor(f, e: int):
    if isinstance(f, GeometricPower):
        return GeometricPower(f.base, _scale_form(f.power, e))
    if isinstance(f, Binomial):
        return Binomial(f.top, f.bottom, f.exponent * e)
    return Factorial(f.arg, f.exponent * e)


class TermAlgebra(Algebra):
    """Evaluates the term grammar into `PartialTerm` values."""

    def integer(self, value: int) -> PartialTerm:
        return PartialTerm((), RFuncNK(value))

    def name(self, name: str, position: int, text: str) -> PartialTerm:
        if name == "n":
            return PartialTerm((), RFuncNK.n())
        if name == "k":
            return PartialTerm((), RFuncNK.k())
        return super().name(name, position, text)

    def _affine(self, value: PartialTerm, position: int, text: str) -> Affine:
        if value.factors or value.rational.den != 1 or not is_affine(value.rational.num):
            raise ParseError("argument must be integer-affine in n and k", position, text)
        return Affine.from_poly(value.rational.num)

    def call(self, name: str, args: list, position: int, text: str) -> PartialTerm:
        arity = {"binomial": 2, "factorial": 1, "pow": 2}
        if name not in arity:
            return super().call(name, args, position, text)
        if len(args) != arity[name]:
            raise ParseError(f"{name} takes {arity[name]} argument(s)", position, text)
        if name == "binomial":
            top, bottom = (self._affine(a, position, text) for a in args)
            return PartialTerm((Binomial(top, bottom),), RFuncNK(1))
        if name == "factorial":
            return PartialTerm((Factorial(self._affine(args[0], position, text)),), RFuncNK(1))
        base = args[0]
        if base.factors or not base.rational.is_k_free() or base.rational.to_rfuncn().degree() > 0:
            raise ParseError("pow base must be a rational constant", position, text)
        q = base.rational.to_rfuncn().constant_value()
        if q == 0:
            raise ParseError("pow base must be nonzero", position, text)
        power = self._affine(args[1], position, text)
        return PartialTerm((GeometricPower(Fraction(q), power),), RFuncNK(1))

    def add(self, a, b, position: int, text: str) -> PartialTerm:
        self._rational_only(a, b, position, text)
        return PartialTerm((), a.rational + b.rational)

    def sub(self, a, b, position: int, text: str) -> PartialTerm:
        self._rational_only(a, b, position, text)
        return PartialTerm((), a.rational - b.rational)

    def _rational_only(self, a, b, position: int, text: str) -> None:
        if a.factors or b.factors:
            raise ParseError("sums of special factors are not hypergeometric", position, text)

    def mul(self, a, b, position: int, text: str) -> PartialTerm:
        return PartialTerm(a.factors + b.factors, a.rational * b.rational)

    def div(self, a, b, position: int, text: str) -> PartialTerm:
        if not b.rational:
            raise ParseError("division by zero", position, text)
        inverted = tuple(_raise_factor(f, -1) for f in b.factors)
        return PartialTerm(a.factors + inverted, a.rational / b.rational)

    def neg(self, a, position: int, text: str) -> PartialTerm:
        return PartialTerm(a.factors, -a.rational)

    def power(self, a, exponent: int, position: int, text: str) -> PartialTerm:
        if exponent == 0 and a.factors:
            raise ParseError("zero exponent", position, text)
        if exponent < 0 and not a.rational:
            raise ParseError("zero raised to a negative power", position, text)
        factors = tuple(_raise_factor(f, exponent) for f in a.factors)
        return PartialTerm(factors, a.rational**exponent)


def parse_term(text: str) -> TermSpec:
    """
    Parses a term such as "binomial(n,k)^7 / (2*n+3*k)".

    Args:
        text (str): The term in the factor grammar.

    Returns:
        TermSpec: The canonical term.

    Raises:
        ParseError: On syntax errors, non-affine arguments or zero exponents.
    """
    value = parse(text, TermAlgebra())
    if not value.rational:
        raise ParseError("the term is identically zero", 0, text)
    try:
        return TermSpec.build(list(value.factors), value.rational)
    except InvalidInput as err:
        raise ParseError(str(err), 0, text) from err
