"""
TOML term documents:

    [term]
    expr = "binomial(n,k)^7/(2*n+3*k)"

    [sum]
    k_range = "0..n"

    [options]
    minimal = true
"""
import tomllib
from dataclasses import dataclass
from dataclasses import field
from pathlib import Path

from submodule_telescoping.hyperterm.grammar import parse_term
from submodule_telescoping.hyperterm.support import KRange
from submodule_telescoping.hyperterm.term import TermSpec
from submodule_telescoping.utils.errors import InputFileError
from submodule_telescoping.utils.errors import ParseError


@dataclass(frozen=True)
class TermDocument:
    """
    Attributes:
        spec (TermSpec): The summand.
        k_range (KRange): The summation range.
        options (dict[str, str]): Option values as lower-case text, e.g. {"minimal": "true"}.
    """

    spec: TermSpec
    k_range: KRange
    options: dict = field(default_factory=dict)


def _option_text(value) -> str:
    return str(value).lower() if isinstance(value, bool) else str(value)


def parse_document(text: str) -> TermDocument:
    """
    Parses a term document.

    Raises:
        ParseError: When the document is malformed or has no [term] expr.
    """
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as err:
        raise ParseError(f"malformed document: {err}", 0, text) from err
    expr = data.get("term", {}).get("expr")
    if not isinstance(expr, str):
        raise ParseError("document needs a [term] section with expr", 0, text)
    spec = parse_term(expr)
    k_range = KRange.parse(str(data.get("sum", {}).get("k_range", "all")))
    options = {key: _option_text(value) for key, value in data.get("options", {}).items()}
    return TermDocument(spec, k_range, options)


def read_document(path: str) -> TermDocument:
    """
    Reads a term document file.

    Raises:
        InputFileError: When the file cannot be read.
        ParseError: When its content is malformed.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise InputFileError(path, err.strerror or type(err).__name__) from err
    return parse_document(text)


def expression_document(text: str) -> TermDocument:
    """A bare term expression, summed over its natural support."""
    return TermDocument(parse_term(text), KRange())
