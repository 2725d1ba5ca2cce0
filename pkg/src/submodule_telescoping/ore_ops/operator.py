"""
Linear recurrence operators sum c_i(n) S^i over Q(n), where S is the forward shift
in n, together with the sequence windows they act on.
"""
from dataclasses import dataclass
from dataclasses import field
from fractions import Fraction
from functools import reduce
from math import gcd
from math import lcm

from submodule_telescoping.exact_algebra.linalg import nullspace
from submodule_telescoping.exact_algebra.polynomials import N_RING
from submodule_telescoping.exact_algebra.polynomials import RFuncN
from submodule_telescoping.exact_algebra.polynomials import to_fraction
from submodule_telescoping.exact_algebra.polynomials import to_qq
from submodule_telescoping.utils.errors import DivisionByZero
from submodule_telescoping.utils.errors import InsufficientWindow
from submodule_telescoping.utils.errors import InvalidInput


@dataclass(frozen=True)
class SeqWindow:
    """
    Exact values of a sequence on consecutive indices offset, offset + 1, ...

    Attributes:
        offset (int): Index of the first value.
        values (tuple[Fraction, ...]): The values.
        flagged (tuple[int, ...]): Indices whose value needed a convention (a pole of
            a rational prefactor where the binomial part vanished).
    """

    offset: int
    values: tuple
    flagged: tuple = field(default=())

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, n: int) -> Fraction:
        if not self.offset <= n < self.offset + len(self.values):
            raise InsufficientWindow(f"index {n} outside window starting at {self.offset}")
        return self.values[n - self.offset]

    @property
    def indices(self) -> range:
        return range(self.offset, self.offset + len(self.values))

    def is_zero(self) -> bool:
        return not any(self.values)


class OreOp:
    """
    An element of Q(n)[S, S^-1] with S f(n) = f(n + 1) S.

    Coefficients are stored sparsely by exponent; zero coefficients are never stored.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict | None = None):
        clean = {}
        for exp, c in (coeffs or {}).items():
            c = RFuncN.coerce(c)
            if c:
                clean[int(exp)] = c
        self.coeffs = dict(sorted(clean.items()))

    @classmethod
    def scalar(cls, c) -> "OreOp":
        return cls({0: c})

    @classmethod
    def shift_power(cls, exponent: int = 1) -> "OreOp":
        return cls({exponent: 1})

    @classmethod
    def from_coefficients(cls, coeffs: list) -> "OreOp":
        """Builds sum coeffs[i] * S^i."""
        return cls(dict(enumerate(coeffs)))

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    @property
    def hi(self) -> int:
        return max(self.coeffs) if self.coeffs else -1

    @property
    def lo(self) -> int:
        return min(self.coeffs) if self.coeffs else 0

    @property
    def order(self) -> int:
        """Difference of the largest and smallest exponents; -1 for the zero operator."""
        return self.hi - self.lo if self.coeffs else -1

    def coefficient(self, exp: int) -> RFuncN:
        return self.coeffs.get(exp, RFuncN(0))

    def lc(self) -> RFuncN:
        return self.coeffs[self.hi]

    def __eq__(self, other) -> bool:
        if not isinstance(other, OreOp):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(tuple(self.coeffs.items()))

    def __add__(self, other: "OreOp") -> "OreOp":
        out = dict(self.coeffs)
        for exp, c in other.coeffs.items():
            out[exp] = out[exp] + c if exp in out else c
        return OreOp(out)

    def __neg__(self) -> "OreOp":
        return OreOp({exp: -c for exp, c in self.coeffs.items()})

    def __sub__(self, other: "OreOp") -> "OreOp":
        return self + (-other)

    def __mul__(self, other) -> "OreOp":
        if not isinstance(other, OreOp):
            other = OreOp.scalar(other)
        out: dict[int, RFuncN] = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                term = a * b.shift(i)
                out[i + j] = out[i + j] + term if i + j in out else term
        return OreOp(out)

    def __rmul__(self, other) -> "OreOp":
        return OreOp.scalar(other) * self

    def __pow__(self, exponent: int) -> "OreOp":
        if exponent < 0:
            if len(self.coeffs) != 1:
                raise InvalidInput("only monomial operators have inverses")
            ((exp, c),) = self.coeffs.items()
            # (c S^e)^-1 = S^-e c^-1 = c(n - e)^-1 S^-e
            inverse = OreOp({-exp: c.shift(-exp).inverse()})
            return inverse ** (-exponent)
        result = OreOp.scalar(1)
        for _ in range(exponent):
            result = result * self
        return result

    def __truediv__(self, other) -> "OreOp":
        if isinstance(other, OreOp):
            if set(other.coeffs) != {0}:
                raise InvalidInput("can only divide by a coefficient of Q(n)")
            other = other.coeffs[0]
        other = RFuncN.coerce(other)
        if not other:
            raise DivisionByZero("division of an operator by zero")
        return self * OreOp.scalar(other.inverse())

    def shift_coefficients(self, d: int) -> "OreOp":
        return OreOp({exp: c.shift(d) for exp, c in self.coeffs.items()})

    def apply(self, window: SeqWindow) -> SeqWindow:
        """
        Applies the operator to a window of sequence values.

        The result is defined on the indices n with n + lo and n + hi inside the window.

        Raises:
            InsufficientWindow: If the window is shorter than order + 1.
            PoleAtPoint: If a coefficient has a pole at one of the result indices.
        """
        if len(window) < self.order + 1:
            raise InsufficientWindow(
                f"window of length {len(window)} for an operator of order {self.order}"
            )
        start = window.offset - self.lo
        stop = window.offset + len(window) - self.hi
        values = []
        for n in range(start, stop):
            acc = Fraction(0)
            for exp, c in self.coeffs.items():
                value = window[n + exp]
                if value:
                    acc += c.eval(n) * value
            values.append(acc)
        return SeqWindow(start, tuple(values))

    def normalized(self) -> "OreOp":
        """
        The canonical representative of the left ideal generator: smallest exponent 0,
        integer polynomial coefficients without common factor, positive leading
        coefficient.
        """
        if not self.coeffs:
            return self
        op = OreOp.shift_power(-self.lo) * self if self.lo else self
        common = reduce(lambda a, b: a.lcm(b), (c.den for c in op.coeffs.values()))
        polys = {exp: c.num * common.exquo(c.den) for exp, c in op.coeffs.items()}
        content = reduce(lambda a, b: a.gcd(b), polys.values())
        polys = {exp: p.exquo(content) for exp, p in polys.items()}
        rationals = [to_fraction(c) for p in polys.values() for c in p.values()]
        scale = reduce(lcm, (c.denominator for c in rationals), 1)
        divisor = reduce(gcd, (int(c * scale) for c in rationals), 0)
        factor = Fraction(scale, divisor)
        if polys[max(polys)].LC * to_qq(factor) < 0:
            factor = -factor
        return OreOp({exp: RFuncN.from_poly(p * to_qq(factor)) for exp, p in polys.items()})

    def is_normalized(self) -> bool:
        return self == self.normalized()

    def max_coefficient_degree(self) -> int:
        return max((c.degree() for c in self.coeffs.values()), default=-1)

    def __repr__(self) -> str:
        from submodule_telescoping.ore_ops.text import print_op

        return f"OreOp({print_op(self)})"


S = OreOp.shift_power(1)


def right_divmod(a: OreOp, b: OreOp) -> tuple[OreOp, OreOp]:
    """
    Right division with remainder: a = q * b + r with hi(r) < hi(b).

    Raises:
        DivisionByZero: If b is zero.
    """
    if not b:
        raise DivisionByZero("right division by the zero operator")
    q = OreOp()
    r = a
    top_b = b.hi
    lead_b = b.lc()
    while r and r.hi >= top_b:
        d = r.hi - top_b
        term = OreOp({d: r.lc() / lead_b.shift(d)})
        q = q + term
        r = r - term * b
    return q, r


def lclm_pair(a: OreOp, b: OreOp) -> OreOp:
    """
    Least common left multiple of two operators, normalized.

    Searches orders from max(ord a, ord b) up to ord a + ord b for the smallest
    (u, v) != 0 with u * a = v * b.

    Returns:
        OreOp: The normalized generator of the intersection of the left ideals.
    """
    if not a or not b:
        raise InvalidInput("lclm with the zero operator")
    a, b = a.normalized(), b.normalized()
    if a.order == 0:
        return b
    if b.order == 0:
        return a
    oa, ob = a.order, b.order
    for d in range(max(oa, ob), oa + ob + 1):
        columns = []
        for i in range(d - oa + 1):
            columns.append(S**i * a)
        for j in range(d - ob + 1):
            columns.append(-(S**j * b))
        rows = [[col.coefficient(e) for col in columns] for e in range(d + 1)]
        basis = nullspace(rows, len(columns), RFuncN(0), RFuncN(1))
        if basis:
            vec = basis[0]
            u = OreOp({i: vec[i] for i in range(d - oa + 1)})
            return (u * a).normalized()
    raise InvalidInput("no common left multiple found")


def lclm(ops: list[OreOp]) -> OreOp:
    """
    Least common left multiple of a list of operators, folded pairwise.

    Raises:
        InvalidInput: If the list is empty or holds the zero operator.
    """
    if not ops:
        raise InvalidInput("lclm of an empty list")
    return reduce(lclm_pair, ops[1:], ops[0].normalized())


def constant(value) -> OreOp:
    return OreOp.scalar(RFuncN(to_qq(value)))


def variable_n() -> OreOp:
    return OreOp.scalar(RFuncN.from_poly(N_RING.gens[0]))
