"""
The arithmetic text grammar shared by terms, rational functions and operators:

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("-" | "+") unary | power
    power  := atom ("^" exponent)?
    atom   := INTEGER | NAME | NAME "(" expr ("," expr)* ")" | "(" expr ")"

A parse is evaluated through an `Algebra`, so the same grammar builds rational
functions, hypergeometric terms or Ore operators.
"""
from lark import Lark
from lark import Token
from lark import Transformer
from lark import v_args
from lark.exceptions import UnexpectedCharacters
from lark.exceptions import UnexpectedEOF
from lark.exceptions import UnexpectedToken
from lark.exceptions import VisitError

from submodule_telescoping.exact_algebra.polynomials import RFuncNK
from submodule_telescoping.utils.errors import ParseError

GRAMMAR = r"""
    ?start: expr

    ?expr: term
        | expr PLUSMINUS term -> binary

    ?term: unary
        | term MULDIV unary -> binary

    ?unary: power
        | PLUSMINUS unary -> signed

    ?power: atom
        | atom POW exponent -> power

    exponent: PLUSMINUS? INT
        | "(" PLUSMINUS? INT ")"

    ?atom: INT -> integer
        | NAME -> name
        | NAME "(" expr ("," expr)* ")" -> call
        | "(" expr ")"

    PLUSMINUS: "+" | "-"
    MULDIV: "*" | "/"
    POW: "^"

    %import common.CNAME -> NAME
    %import common.INT
    %import common.WS
    %ignore WS
"""

EXPRESSION_PARSER = Lark(GRAMMAR, parser="lalr")


class Algebra:
    """
    The values a parse evaluates into. Subclasses override `name` and `call` and any
    arithmetic their values do not support natively.
    """

    def integer(self, value: int):
        return value

    def name(self, name: str, position: int, text: str):
        raise ParseError(f"unknown identifier {name!r}", position, text)

    def call(self, name: str, args: list, position: int, text: str):
        raise ParseError(f"unknown function {name!r}", position, text)

    def add(self, a, b, position: int, text: str):
        return a + b

    def sub(self, a, b, position: int, text: str):
        return a - b

    def mul(self, a, b, position: int, text: str):
        return a * b

    def div(self, a, b, position: int, text: str):
        try:
            return a / b
        except ZeroDivisionError:
            raise ParseError("division by zero", position, text) from None

    def neg(self, a, position: int, text: str):
        return -a

    def power(self, a, exponent: int, position: int, text: str):
        try:
            return a**exponent
        except ZeroDivisionError:
            raise ParseError("zero raised to a negative power", position, text) from None


@v_args(inline=True)
class Evaluate(Transformer):
    """Folds a parse tree bottom-up through an algebra, passing token positions along."""

    def __init__(self, algebra: Algebra, text: str):
        super().__init__()
        self.algebra = algebra
        self.text = text

    def integer(self, token: Token):
        return self.algebra.integer(int(token))

    def name(self, token: Token):
        return self.algebra.name(str(token), token.start_pos, self.text)

    def call(self, token: Token, *args):
        return self.algebra.call(str(token), list(args), token.start_pos, self.text)

    def binary(self, a, op: Token, b):
        methods = {"+": self.algebra.add, "-": self.algebra.sub, "*": self.algebra.mul, "/": self.algebra.div}
        return methods[str(op)](a, b, op.start_pos, self.text)

    def signed(self, op: Token, value):
        return value if op == "+" else self.algebra.neg(value, op.start_pos, self.text)

    def power(self, value, op: Token, exponent: int):
        return self.algebra.power(value, exponent, op.start_pos, self.text)

    def exponent(self, *tokens: Token) -> int:
        sign = -1 if tokens[0] == "-" else 1
        return sign * int(tokens[-1])


def parse(text: str, algebra: Algebra):
    """
    Parses and evaluates `text` with the given algebra.

    Args:
        text (str): The expression text.
        algebra (Algebra): Supplies the meaning of names, calls and operators.

    Returns:
        The evaluated value.

    Raises:
        ParseError: With the offending position.
    """
    if not text.strip():
        raise ParseError("empty expression", 0, text)
    try:
        tree = EXPRESSION_PARSER.parse(text)
    except UnexpectedCharacters as err:
        raise ParseError(f"unexpected character {err.char!r}", err.pos_in_stream, text) from None
    except UnexpectedEOF:
        raise ParseError("unexpected end of input", len(text), text) from None
    except UnexpectedToken as err:
        if err.token.type == "$END":
            raise ParseError("unexpected end of input", len(text), text) from None
        raise ParseError(f"unexpected {str(err.token)!r}", err.token.start_pos, text) from None
    try:
        return Evaluate(algebra, text).transform(tree)
    except VisitError as err:
        raise err.orig_exc from None


class RationalFunctionAlgebra(Algebra):
    """Evaluates expressions in n and k into canonical elements of Q(n,k)."""

    def integer(self, value: int) -> RFuncNK:
        return RFuncNK.from_fraction(value)

    def name(self, name: str, position: int, text: str) -> RFuncNK:
        if name == "n":
            return RFuncNK.n()
        if name == "k":
            return RFuncNK.k()
        return super().name(name, position, text)


def parse_rational(text: str) -> RFuncNK:
    """Parses a rational function of n and k, e.g. "1/(2*n+3*k)"."""
    return parse(text, RationalFunctionAlgebra())
