"""
Exact polynomial and rational-function arithmetic in the variables n and k.

Polynomials are sympy sparse ring elements. ``RFuncNK`` lives on ``Z[n,k]`` with
graded-lex order, ``RFuncN`` on ``Q[n]`` with a monic denominator, and ``PolyK``
is a dense polynomial in k whose coefficients are ``RFuncN``.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from math import lcm

from sympy import Poly
from sympy import Symbol
from sympy import gcd_list
from sympy import resultant
from sympy import roots
from sympy.polys.domains import QQ
from sympy.polys.domains import ZZ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement
from sympy.polys.rings import ring

from submodule_telescoping.utils.errors import DivisionByZero
from submodule_telescoping.utils.errors import InvalidInput
from submodule_telescoping.utils.errors import PoleAtPoint
from submodule_telescoping.utils.errors import UnsupportedDenominator

Rational = Fraction

NK_RING, N_NK, K_NK = ring("n,k", ZZ, grlex)
N_RING, N_N = ring("n", QQ)

N_SYMBOL, K_SYMBOL = NK_RING.symbols


def to_fraction(value) -> Fraction:
    """Converts an int, Fraction or sympy ground element of ZZ/QQ to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    try:
        return Fraction(int(QQ.numer(value)), int(QQ.denom(value)))
    except (AttributeError, TypeError):
        return Fraction(int(value))


def to_qq(value):
    value = to_fraction(value)
    return QQ(value.numerator, value.denominator)


def _eval_items(poly: PolyElement, point: tuple) -> Fraction:
    total = Fraction(0)
    for monom, coeff in poly.items():
        term = to_fraction(coeff)
        for base, exp in zip(point, monom):
            if exp:
                term *= base**exp
        total += term
    return total


def format_poly(poly: PolyElement) -> str:
    """
    Formats a polynomial as an expanded expression, terms in the ring's order.

    Args:
        poly (PolyElement): A polynomial in n (and possibly k).

    Returns:
        str: The text form, e.g. "2*n+3*k".
    """
    if not poly:
        return "0"
    names = [str(s) for s in poly.ring.symbols]
    pieces = []
    for monom, coeff in poly.terms():
        coeff = to_fraction(coeff)
        factors = []
        for name, exp in zip(names, monom):
            if exp == 1:
                factors.append(name)
            elif exp > 1:
                factors.append(f"{name}^{exp}")
        magnitude = abs(coeff)
        if not factors:
            body = str(magnitude)
        elif magnitude == 1:
            body = "*".join(factors)
        else:
            body = f"{magnitude}*" + "*".join(factors)
        sign = "-" if coeff < 0 else "+"
        if not pieces:
            pieces.append(body if sign == "+" else "-" + body)
        else:
            pieces.append(sign + body)
    return "".join(pieces)


def _wrap(text: str, poly: PolyElement) -> str:
    if len(poly) > 1 or (len(poly) == 1 and text.startswith("-")):
        return f"({text})"
    return text


def n_poly_to_nk(poly: PolyElement) -> tuple[PolyElement, int]:
    """
    Clears the rational coefficients of a polynomial in Q[n].

    Returns:
        tuple: (integer polynomial in Z[n,k] without k, positive integer scale) with
            poly = result / scale.
    """
    scale = 1
    for coeff in poly.values():
        scale = lcm(scale, to_fraction(coeff).denominator)
    terms = {(m[0], 0): int(to_fraction(c) * scale) for m, c in poly.items()}
    return NK_RING.from_dict(terms), scale


def nk_to_n_poly(poly: PolyElement) -> PolyElement:
    terms = {}
    for (i, j), coeff in poly.items():
        if j:
            raise InvalidInput("polynomial depends on k")
        terms[(i,)] = QQ(int(coeff))
    return N_RING.from_dict(terms)


@dataclass(frozen=True, order=True)
class Affine:
    """
    An integer-affine form n_coeff*n + k_coeff*k + const.
    """

    n_coeff: int
    k_coeff: int
    const: int

    @classmethod
    def from_poly(cls, poly: PolyElement) -> "Affine":
        coeffs = {(1, 0): 0, (0, 1): 0, (0, 0): 0}
        for monom, coeff in poly.items():
            if monom not in coeffs:
                raise InvalidInput(f"{format_poly(poly)} is not affine in n and k")
            coeffs[monom] = int(coeff)
        return cls(coeffs[(1, 0)], coeffs[(0, 1)], coeffs[(0, 0)])

    def poly(self) -> PolyElement:
        return self.n_coeff * N_NK + self.k_coeff * K_NK + self.const

    def __call__(self, n0, k0):
        return self.n_coeff * n0 + self.k_coeff * k0 + self.const

    def __add__(self, other: "Affine") -> "Affine":
        return Affine(
            self.n_coeff + other.n_coeff,
            self.k_coeff + other.k_coeff,
            self.const + other.const,
        )

    def __sub__(self, other: "Affine") -> "Affine":
        return Affine(
            self.n_coeff - other.n_coeff,
            self.k_coeff - other.k_coeff,
            self.const - other.const,
        )

    def plus(self, c: int) -> "Affine":
        return Affine(self.n_coeff, self.k_coeff, self.const + c)

    def shift_class(self) -> tuple[tuple[int, int, int], int]:
        """
        Locates this form inside its k-shift-equivalence class.

        The class is keyed by (n_coeff, k_coeff, base) with k_coeff > 0 and
        0 <= base < k_coeff; the form equals the key's member shifted by k -> k + position
        (up to sign).

        Returns:
            tuple: (class key, position).
        """
        a, b, c = self.n_coeff, self.k_coeff, self.const
        if b == 0:
            raise InvalidInput("form does not depend on k")
        if b < 0:
            a, b, c = -a, -b, -c
        base = c % b
        return (a, b, base), (c - base) // b

    def __str__(self) -> str:
        return format_poly(self.poly())


class RFuncN:
    """
    An element of Q(n): coprime numerator and monic denominator in Q[n].
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, canonical: bool = False):
        if not isinstance(num, PolyElement):
            num = N_RING.ground_new(to_qq(num))
        if den is None:
            den = N_RING.one
        elif not isinstance(den, PolyElement):
            den = N_RING.ground_new(to_qq(den))
        if not den:
            raise DivisionByZero("zero denominator in Q(n)")
        if not canonical:
            if not num:
                den = N_RING.one
            else:
                num, den = num.cancel(den)
                lead = den.LC
                if lead != QQ.one:
                    num = num.quo_ground(lead)
                    den = den.monic()
        self.num = num
        self.den = den

    @classmethod
    def from_poly(cls, poly: PolyElement) -> "RFuncN":
        return cls(poly, N_RING.one, canonical=True)

    @classmethod
    def variable(cls) -> "RFuncN":
        return cls.from_poly(N_N)

    @classmethod
    def coerce(cls, value) -> "RFuncN":
        if isinstance(value, RFuncN):
            return value
        return cls(value)

    def __bool__(self) -> bool:
        return bool(self.num)

    def __eq__(self, other) -> bool:
        try:
            other = RFuncN.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __neg__(self) -> "RFuncN":
        return RFuncN(-self.num, self.den, canonical=True)

    def __add__(self, other) -> "RFuncN":
        other = RFuncN.coerce(other)
        if not self.num:
            return other
        if not other.num:
            return self
        if self.den == other.den:
            return RFuncN(self.num + other.num, self.den)
        return RFuncN(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other) -> "RFuncN":
        return self + (-RFuncN.coerce(other))

    def __rsub__(self, other) -> "RFuncN":
        return RFuncN.coerce(other) - self

    def __mul__(self, other) -> "RFuncN":
        other = RFuncN.coerce(other)
        if not self.num or not other.num:
            return RFuncN(N_RING.zero, canonical=True)
        if self.den == N_RING.one and other.den == N_RING.one:
            return RFuncN(self.num * other.num, N_RING.one, canonical=True)
        return RFuncN(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RFuncN":
        if not self.num:
            raise DivisionByZero("inverse of zero in Q(n)")
        return RFuncN(self.den, self.num)

    def __truediv__(self, other) -> "RFuncN":
        return self * RFuncN.coerce(other).inverse()

    def __rtruediv__(self, other) -> "RFuncN":
        return RFuncN.coerce(other) * self.inverse()

    def __pow__(self, exponent: int) -> "RFuncN":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return RFuncN(self.num**exponent, self.den**exponent, canonical=True)

    def shift(self, d: int = 1) -> "RFuncN":
        """Returns f(n + d)."""
        if d == 0 or (self.num.is_ground and self.den.is_ground):
            return self
        target = N_N + d
        return RFuncN(
            self.num.compose(N_N, target), self.den.compose(N_N, target), canonical=True
        )

    def is_polynomial(self) -> bool:
        return self.den == N_RING.one

    def is_constant(self) -> bool:
        return self.num.is_ground and self.den.is_ground

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise InvalidInput("not a constant")
        return _eval_items(self.num, (0,)) / _eval_items(self.den, (0,))

    def degree(self) -> int:
        return max(_degree(self.num), _degree(self.den))

    def eval(self, n0) -> Fraction:
        den = _eval_items(self.den, (Fraction(n0),))
        if den == 0:
            raise PoleAtPoint((n0,))
        return _eval_items(self.num, (Fraction(n0),)) / den

    def integer_parts(self) -> tuple[list[int], list[int]]:
        """
        Returns integer coefficient lists (ascending degree) of a numerator and a
        denominator with no common integer content and the same value.
        """
        num = _dense(self.num)
        den = _dense(self.den)
        scale = reduce(lcm, (c.denominator for c in num + den), 1)
        num_int = [int(c * scale) for c in num]
        den_int = [int(c * scale) for c in den]
        content = reduce(gcd, num_int + den_int, 0) or 1
        return [c // content for c in num_int], [c // content for c in den_int]

    def to_rfuncnk(self) -> "RFuncNK":
        num, s1 = n_poly_to_nk(self.num)
        den, s2 = n_poly_to_nk(self.den)
        return RFuncNK(num * s2, den * s1)

    def __repr__(self) -> str:
        return f"RFuncN({self})"

    def __str__(self) -> str:
        num = format_poly(self.num)
        if self.den == N_RING.one:
            return num
        return f"{_wrap(num, self.num)}/{_wrap(format_poly(self.den), self.den)}"


def _degree(poly: PolyElement) -> int:
    return -1 if not poly else poly.degree()


def _dense(poly: PolyElement) -> list[Fraction]:
    if not poly:
        return [Fraction(0)]
    out = [Fraction(0)] * (poly.degree() + 1)
    for (i,), coeff in poly.items():
        out[i] = to_fraction(coeff)
    return out


class RFuncNK:
    """
    An element of Q(n,k) in canonical form: coprime integer polynomials with a
    denominator whose graded-lex leading coefficient is positive.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, canonical: bool = False):
        if not isinstance(num, PolyElement):
            num = NK_RING.ground_new(int(num))
        if den is None:
            den = NK_RING.one
        elif not isinstance(den, PolyElement):
            den = NK_RING.ground_new(int(den))
        if not canonical:
            num, den = _normalize_pair(num, den)
        self.num = num
        self.den = den

    @classmethod
    def from_fraction(cls, value) -> "RFuncNK":
        value = to_fraction(value)
        return cls(NK_RING.ground_new(value.numerator), NK_RING.ground_new(value.denominator))

    @classmethod
    def coerce(cls, value) -> "RFuncNK":
        if isinstance(value, RFuncNK):
            return value
        if isinstance(value, RFuncN):
            return value.to_rfuncnk()
        if isinstance(value, PolyElement):
            return cls(value)
        return cls.from_fraction(value)

    @classmethod
    def n(cls) -> "RFuncNK":
        return cls(N_NK, canonical=True)

    @classmethod
    def k(cls) -> "RFuncNK":
        return cls(K_NK, canonical=True)

    def __bool__(self) -> bool:
        return bool(self.num)

    def __eq__(self, other) -> bool:
        try:
            other = RFuncNK.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __neg__(self) -> "RFuncNK":
        return RFuncNK(-self.num, self.den, canonical=True)

    def __add__(self, other) -> "RFuncNK":
        other = RFuncNK.coerce(other)
        if not self.num:
            return other
        if not other.num:
            return self
        if self.den == other.den:
            return RFuncNK(self.num + other.num, self.den)
        return RFuncNK(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other) -> "RFuncNK":
        return self + (-RFuncNK.coerce(other))

    def __rsub__(self, other) -> "RFuncNK":
        return RFuncNK.coerce(other) - self

    def __mul__(self, other) -> "RFuncNK":
        other = RFuncNK.coerce(other)
        return RFuncNK(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RFuncNK":
        if not self.num:
            raise DivisionByZero("inverse of zero in Q(n,k)")
        return RFuncNK(self.den, self.num)

    def __truediv__(self, other) -> "RFuncNK":
        return self * RFuncNK.coerce(other).inverse()

    def __rtruediv__(self, other) -> "RFuncNK":
        return RFuncNK.coerce(other) * self.inverse()

    def __pow__(self, exponent: int) -> "RFuncNK":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return RFuncNK(self.num**exponent, self.den**exponent, canonical=True)

    def shift(self, dn: int = 0, dk=0) -> "RFuncNK":
        """Returns f(n + dn, k + dk); dk may be a non-integer rational."""
        return shift(self, dn, dk)

    def reflect(self) -> "RFuncNK":
        """Returns f(n, n - k)."""
        image = N_NK - K_NK
        return RFuncNK(self.num.compose(K_NK, image), self.den.compose(K_NK, image))

    def k_degree(self) -> int:
        return max(_k_degree(self.num), _k_degree(self.den))

    def is_k_free(self) -> bool:
        return _k_degree(self.num) <= 0 and _k_degree(self.den) <= 0

    def to_rfuncn(self) -> RFuncN:
        if not self.is_k_free():
            raise InvalidInput("rational function depends on k")
        return RFuncN(nk_to_n_poly(self.num), nk_to_n_poly(self.den))

    def subs_k(self, rho: RFuncN) -> RFuncN:
        """Substitutes k = rho(n)."""
        den = PolyK.from_nk_poly(self.den).eval(rho)
        if not den:
            raise DivisionByZero(f"denominator vanishes at k = {rho}")
        return PolyK.from_nk_poly(self.num).eval(rho) / den

    def eval(self, n0, k0) -> Fraction:
        return eval_nk(self, n0, k0)

    def __repr__(self) -> str:
        return f"RFuncNK({self})"

    def __str__(self) -> str:
        return format_rfuncnk(self)


def _k_degree(poly: PolyElement) -> int:
    if not poly:
        return -1
    return max(monom[1] for monom in poly.keys())


def _normalize_pair(num: PolyElement, den: PolyElement) -> tuple[PolyElement, PolyElement]:
    if not den:
        raise DivisionByZero("zero denominator in Q(n,k)")
    if not num:
        return NK_RING.zero, NK_RING.one
    return num.cancel(den)


def normalize(num: PolyElement, den: PolyElement) -> RFuncNK:
    """
    Brings num/den to canonical form.

    Args:
        num (PolyElement): Numerator in Z[n,k].
        den (PolyElement): Denominator in Z[n,k].

    Returns:
        RFuncNK: The canonical representative of num/den.

    Raises:
        DivisionByZero: If den is zero.
    """
    return RFuncNK(*_normalize_pair(num, den), canonical=True)


def _substitute(poly: PolyElement, dn: int, dk: Fraction) -> tuple[PolyElement, int]:
    """Returns (P, scale) with poly(n + dn, k + dk) = P / scale."""
    if dk.denominator == 1:
        replacements = []
        if dn:
            replacements.append((N_NK, N_NK + dn))
        if dk:
            replacements.append((K_NK, K_NK + int(dk)))
        if not replacements:
            return poly, 1
        return poly.compose(replacements), 1
    num, den = dk.numerator, dk.denominator
    top = _k_degree(poly)
    n_image = N_NK + dn
    k_image = den * K_NK + num
    result = NK_RING.zero
    for (i, j), coeff in poly.items():
        result += int(coeff) * n_image**i * k_image**j * den ** (top - j)
    return result, den**top


def shift(f: RFuncNK, dn: int, dk=0) -> RFuncNK:
    """
    Shifts a rational function: f(n, k) -> f(n + dn, k + dk).

    Args:
        f (RFuncNK): The rational function.
        dn (int): Integer shift of n.
        dk (Rational): Rational shift of k (non-integer shifts are used by fractional automorphisms).

    Returns:
        RFuncNK: The shifted function in canonical form.
    """
    dk = to_fraction(dk)
    if not dn and not dk:
        return f
    num, num_scale = _substitute(f.num, dn, dk)
    den, den_scale = _substitute(f.den, dn, dk)
    if num_scale == 1 and den_scale == 1:
        # integer shifts keep coprimality and the graded-lex leading term
        return RFuncNK(num, den, canonical=True)
    return RFuncNK(num * den_scale, den * num_scale)


def eval_nk(f: RFuncNK, n0, k0) -> Fraction:
    """
    Evaluates f exactly at (n0, k0).

    Raises:
        PoleAtPoint: If the denominator vanishes at the point.
    """
    point = (Fraction(n0), Fraction(k0))
    den = _eval_items(f.den, point)
    if den == 0:
        raise PoleAtPoint((n0, k0))
    return _eval_items(f.num, point) / den


def format_rfuncnk(f: RFuncNK) -> str:
    """Serializes as "num/den" with expanded integer polynomials, e.g. "1/(2*n+3*k)"."""
    num = format_poly(f.num)
    if f.den == NK_RING.one:
        return num
    return f"{_wrap(num, f.num)}/{_wrap(format_poly(f.den), f.den)}"


class PolyK:
    """
    A polynomial in k over Q(n), stored densely by ascending degree.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        coeffs = [RFuncN.coerce(c) for c in coeffs]
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        self.coeffs = tuple(coeffs)

    @classmethod
    def monomial(cls, degree: int, coeff=1) -> "PolyK":
        return cls([0] * degree + [coeff])

    @classmethod
    def from_nk_poly(cls, poly: PolyElement, scale: RFuncN | None = None) -> "PolyK":
        by_degree: dict[int, dict] = {}
        for (i, j), coeff in poly.items():
            by_degree.setdefault(j, {})[(i,)] = QQ(int(coeff))
        top = max(by_degree) if by_degree else -1
        coeffs = [RFuncN.from_poly(N_RING.from_dict(by_degree.get(j, {}))) for j in range(top + 1)]
        if scale is not None:
            coeffs = [c * scale for c in coeffs]
        return cls(coeffs)

    @classmethod
    def from_rfuncnk(cls, f: RFuncNK) -> "PolyK":
        """Converts a rational function whose denominator is free of k."""
        if _k_degree(f.den) > 0:
            raise InvalidInput("denominator depends on k")
        return cls.from_nk_poly(f.num, RFuncN(1) / RFuncN(nk_to_n_poly(f.den)))

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyK):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, index: int) -> RFuncN:
        if 0 <= index < len(self.coeffs):
            return self.coeffs[index]
        return RFuncN(0)

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def lc(self) -> RFuncN:
        return self.coeffs[-1]

    def __add__(self, other: "PolyK") -> "PolyK":
        size = max(len(self.coeffs), len(other.coeffs))
        return PolyK([self[i] + other[i] for i in range(size)])

    def __neg__(self) -> "PolyK":
        return PolyK([-c for c in self.coeffs])

    def __sub__(self, other: "PolyK") -> "PolyK":
        size = max(len(self.coeffs), len(other.coeffs))
        return PolyK([self[i] - other[i] for i in range(size)])

    def __mul__(self, other) -> "PolyK":
        if not isinstance(other, PolyK):
            return self.scale(other)
        if not self.coeffs or not other.coeffs:
            return PolyK()
        out = [RFuncN(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return PolyK(out)

    def __rmul__(self, other) -> "PolyK":
        return self.scale(other)

    def scale(self, c) -> "PolyK":
        c = RFuncN.coerce(c)
        if not c:
            return PolyK()
        return PolyK([a * c for a in self.coeffs])

    def mul_k_power(self, d: int) -> "PolyK":
        return PolyK([0] * d + list(self.coeffs))

    def divmod(self, other: "PolyK") -> tuple["PolyK", "PolyK"]:
        if not other:
            raise DivisionByZero("division by the zero polynomial in k")
        rem = list(self.coeffs)
        dq = other.degree()
        inv_lc = other.lc().inverse()
        quo = [RFuncN(0)] * max(len(rem) - dq, 0)
        for top in range(len(rem) - 1, dq - 1, -1):
            c = rem[top]
            if not c:
                continue
            factor = c * inv_lc
            quo[top - dq] = factor
            for i, b in enumerate(other.coeffs):
                rem[top - dq + i] = rem[top - dq + i] - factor * b
        return PolyK(quo), PolyK(rem[:dq])

    def monic(self) -> "PolyK":
        if not self.coeffs:
            return self
        return self.scale(self.lc().inverse())

    def eval(self, point: RFuncN) -> RFuncN:
        acc = RFuncN(0)
        for c in reversed(self.coeffs):
            acc = acc * point + c
        return acc

    def taylor_shift(self, rho) -> "PolyK":
        """Returns p(k + rho) for rho in Q(n)."""
        rho = RFuncN.coerce(rho)
        if not rho:
            return self
        out: list[RFuncN] = []
        for c in reversed(self.coeffs):
            # out <- out * (k + rho) + c
            nxt = [RFuncN(0)] * (len(out) + 1)
            for i, a in enumerate(out):
                nxt[i + 1] = nxt[i + 1] + a
                nxt[i] = nxt[i] + a * rho
            nxt[0] = nxt[0] + c
            out = nxt
        return PolyK(out)

    def shift_n(self, d: int = 1) -> "PolyK":
        return PolyK([c.shift(d) for c in self.coeffs])

    def to_nk_parts(self) -> tuple[PolyElement, PolyElement]:
        """Returns integer polynomials (P, Q) in Z[n,k] with Q free of k and self = P/Q."""
        if not self.coeffs:
            return NK_RING.zero, NK_RING.one
        common = reduce(lambda a, b: a.lcm(b), (c.den for c in self.coeffs))
        terms = {}
        for j, c in enumerate(self.coeffs):
            for (i,), coeff in (c.num * common.exquo(c.den)).items():
                terms[(i, j)] = to_fraction(coeff)
        scale = reduce(lcm, (v.denominator for v in terms.values()), 1)
        common_nk, common_scale = n_poly_to_nk(common)
        num = NK_RING.from_dict({m: int(v * scale) for m, v in terms.items()})
        return num * common_scale, common_nk * scale

    def to_rfuncnk(self) -> RFuncNK:
        return RFuncNK(*self.to_nk_parts())

    def __repr__(self) -> str:
        return f"PolyK({self.to_rfuncnk()})"


def gcd_k(a: PolyK, b: PolyK) -> PolyK:
    """
    Monic greatest common divisor in k over Q(n).

    Raises:
        InvalidInput: If both arguments are zero.
    """
    if not a and not b:
        raise InvalidInput("gcd of two zero polynomials")
    while b:
        a, b = b, a.divmod(b)[1]
    return a.monic()


_J = Symbol("j")


def dispersion_set(a: PolyK, b: PolyK) -> set[int]:
    """
    All j >= 0 for which a(k) and b(k + j) share a factor of positive degree in k.

    The candidates are the nonnegative integer roots j of Res_k(a(k), b(k + j)) that
    vanish identically in n.
    """
    if not a or not b:
        raise InvalidInput("dispersion of a zero polynomial")
    if a.degree() < 1 or b.degree() < 1:
        return set()
    a_expr = a.to_nk_parts()[0].as_expr()
    b_expr = b.to_nk_parts()[0].as_expr().subs(K_SYMBOL, K_SYMBOL + _J)
    res = resultant(a_expr, b_expr, K_SYMBOL)
    if res == 0:
        raise InvalidInput("resultant vanishes identically")
    coeffs = Poly(res, N_SYMBOL).all_coeffs()
    common = gcd_list(coeffs)
    found = roots(Poly(common, _J), filter="Z")
    return {int(r) for r in found if int(r) >= 0}


def factor_k(d: PolyElement) -> list[tuple[PolyElement, int]]:
    """
    Factors a polynomial of Z[n,k] into its k-free content and affine factors.

    Args:
        d (PolyElement): Nonzero polynomial in Z[n,k].

    Returns:
        list: (factor, multiplicity) pairs; a k-free content factor (if not 1) comes first.

    Raises:
        UnsupportedDenominator: If an irreducible k-dependent factor is not of the form
            a*n + b*k + c.
    """
    if not d:
        raise InvalidInput("cannot factor zero")
    coeff, factors = d.factor_list()
    content = NK_RING.ground_new(coeff)
    affine = []
    for factor, mult in factors:
        if _k_degree(factor) <= 0:
            content *= factor**mult
            continue
        if not is_affine(factor):
            raise UnsupportedDenominator(format_poly(factor))
        affine.append((factor, mult))
    affine.sort(key=lambda fm: Affine.from_poly(fm[0]))
    if content == NK_RING.one:
        return affine
    return [(content, 1)] + affine


def is_affine(poly: PolyElement) -> bool:
    return all(sum(monom) <= 1 for monom in poly.keys())
