"""
Summation ranges in k: explicit affine bounds in n, or the natural support of the
binomial and reciprocal factorial factors.
"""
from dataclasses import dataclass

from submodule_telescoping.exact_algebra.expression import parse_rational
from submodule_telescoping.exact_algebra.polynomials import Affine
from submodule_telescoping.exact_algebra.polynomials import is_affine
from submodule_telescoping.hyperterm.term import Binomial
from submodule_telescoping.hyperterm.term import Factorial
from submodule_telescoping.hyperterm.term import TermSpec
from submodule_telescoping.utils.errors import InvalidInput
from submodule_telescoping.utils.errors import ParseError


def _bound(text: str) -> Affine:
    value = parse_rational(text)
    if value.den != 1 or not is_affine(value.num):
        raise ParseError("range bound must be integer-affine in n", 0, text)
    form = Affine.from_poly(value.num)
    if form.k_coeff:
        raise ParseError("range bound must not depend on k", 0, text)
    return form


@dataclass(frozen=True)
class KRange:
    """
    The k-range of the definite sum; both bounds None means the natural support.
    """

    lower: Affine | None = None
    upper: Affine | None = None

    @classmethod
    def parse(cls, text: str | None) -> "KRange":
        """
        Accepts "all", "auto", "<a>..<b>" with a, b integers or affine forms in n.
        """
        if text is None or text.strip() in ("", "all", "auto"):
            return cls()
        lo, sep, hi = text.partition("..")
        if not sep:
            raise ParseError("expected a range of the form a..b", 0, text)
        return cls(_bound(lo.strip()), _bound(hi.strip()))

    @property
    def is_natural(self) -> bool:
        return self.lower is None

    def bounds(self, spec: TermSpec, n0: int) -> tuple[int, int]:
        if self.is_natural:
            return natural_support(spec, n0)
        return self.lower(n0, 0), self.upper(n0, 0)

    def __str__(self) -> str:
        return "all" if self.is_natural else f"{self.lower}..{self.upper}"


def natural_support(spec: TermSpec, n0: int) -> tuple[int, int]:
    """
    The smallest k-interval outside which a binomial factor (positive exponent) or a
    reciprocal factorial vanishes, at n = n0.

    Returns:
        tuple: (lo, hi); lo > hi when the summand vanishes for every k.

    Raises:
        InvalidInput: When the support is unbounded.
    """
    constraints: list[Affine] = []
    for f in spec.factors:
        if isinstance(f, Binomial) and f.exponent > 0:
            constraints.append(f.bottom)
            constraints.append(f.top - f.bottom)
        elif isinstance(f, Factorial) and f.exponent < 0:
            constraints.append(f.arg)
    lo, hi = None, None
    empty = False
    for c in constraints:
        beta = c.k_coeff
        rest = c.n_coeff * n0 + c.const
        # beta * k + rest >= 0
        if beta > 0:
            bound = -(rest // beta)
            lo = bound if lo is None else max(lo, bound)
        elif beta < 0:
            bound = rest // -beta
            hi = bound if hi is None else min(hi, bound)
        elif rest < 0:
            empty = True
    if empty:
        return 0, -1
    if lo is None or hi is None:
        raise InvalidInput(f"the summand {spec} has unbounded support in k; give a k range")
    return lo, hi
