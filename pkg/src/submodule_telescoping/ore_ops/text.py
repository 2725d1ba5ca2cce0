"""
Text and JSON forms of recurrence operators.

Text form: "c_d(n)*S^d + ... + c_0(n)", e.g. "(n+1)*S - (4*n+2)".
JSON form: a list of {"exp": i, "num_coeffs": [...], "den_coeffs": [...]} with integer
coefficient lists in ascending powers of n.
"""
import json

from submodule_telescoping.exact_algebra.expression import Algebra
from submodule_telescoping.exact_algebra.expression import parse
from submodule_telescoping.exact_algebra.polynomials import N_RING
from submodule_telescoping.exact_algebra.polynomials import RFuncN
from submodule_telescoping.exact_algebra.polynomials import format_poly
from submodule_telescoping.exact_algebra.polynomials import to_qq
from submodule_telescoping.ore_ops.operator import OreOp
from submodule_telescoping.ore_ops.operator import S
from submodule_telescoping.ore_ops.operator import variable_n
from submodule_telescoping.utils.errors import InvalidInput
from submodule_telescoping.utils.errors import ParseError


class OperatorAlgebra(Algebra):
    def integer(self, value: int) -> OreOp:
        return OreOp.scalar(value)

    def name(self, name: str, position: int, text: str) -> OreOp:
        if name == "n":
            return variable_n()
        if name == "S":
            return S
        return super().name(name, position, text)

    def div(self, a, b, position: int, text: str):
        try:
            return a / b
        except (InvalidInput, ZeroDivisionError) as err:
            raise ParseError(str(err), position, text) from None

    def power(self, a, exponent: int, position: int, text: str):
        try:
            return a**exponent
        except InvalidInput as err:
            raise ParseError(str(err), position, text) from None


def parse_op(text: str) -> OreOp:
    """
    Parses an operator written in n and S.

    Args:
        text (str): e.g. "(n+1)*S - (4*n+2)".

    Returns:
        OreOp: The parsed operator (not normalized).

    Raises:
        ParseError: On malformed input.
    """
    return parse(text, OperatorAlgebra())


def _coefficient_text(c: RFuncN) -> tuple[str, bool]:
    """Returns (text, is_compound) for a coefficient with positive sign."""
    if c.is_polynomial():
        text = format_poly(c.num)
        return text, len(c.num) > 1
    return f"({format_poly(c.num)})/({format_poly(c.den)})", True


def _is_negative(c: RFuncN) -> bool:
    return c.num.LC < 0


def print_op(op: OreOp) -> str:
    """Serializes an operator, highest power of S first."""
    if not op:
        return "0"
    pieces = []
    for exp in sorted(op.coeffs, reverse=True):
        c = op.coeffs[exp]
        negative = _is_negative(c)
        if negative:
            c = -c
        shift = "" if exp == 0 else ("S" if exp == 1 else f"S^{exp}")
        text, compound = _coefficient_text(c)
        if shift and c == 1:
            body = shift
        else:
            wrapped = f"({text})" if compound else text
            body = f"{wrapped}*{shift}" if shift else wrapped
        if not pieces:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f" - {body}" if negative else f" + {body}")
    return "".join(pieces)


def _dense_ints(ints: list[int]) -> RFuncN:
    return RFuncN.from_poly(N_RING.from_dict({(i,): to_qq(c) for i, c in enumerate(ints) if c}))


def op_to_json(op: OreOp) -> list[dict]:
    out = []
    for exp, c in op.coeffs.items():
        num, den = c.integer_parts()
        out.append({"exp": exp, "num_coeffs": num, "den_coeffs": den})
    return out


def op_from_json(data: list[dict]) -> OreOp:
    """
    Inverse of `op_to_json`.

    Raises:
        InvalidInput: On malformed entries.
    """
    coeffs = {}
    try:
        for entry in data:
            num = _dense_ints([int(c) for c in entry["num_coeffs"]])
            den = _dense_ints([int(c) for c in entry.get("den_coeffs", [1])])
            coeffs[int(entry["exp"])] = num / den
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as err:
        raise InvalidInput(f"malformed operator JSON: {err}") from err
    return OreOp(coeffs)


def dumps_op(op: OreOp) -> str:
    return json.dumps(op_to_json(op))


def loads_op(text: str) -> OreOp:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(err.msg, err.pos, text) from err
    return op_from_json(data)
