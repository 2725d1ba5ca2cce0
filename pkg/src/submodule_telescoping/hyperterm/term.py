"""
Bivariate hypergeometric terms built from binomial, factorial and geometric factors
with integer-affine arguments, times a rational prefactor.

Every special factor is rewritten as a product of Gamma functions of affine forms;
shift certificates and automorphism ratios are then quotients of Pochhammer
symbols inside each class of forms that differ by a constant.
"""
from collections import defaultdict
from dataclasses import dataclass
from dataclasses import field
from fractions import Fraction
from math import factorial
from typing import Union

from sympy.polys.rings import PolyElement

from submodule_telescoping.exact_algebra.polynomials import NK_RING
from submodule_telescoping.exact_algebra.polynomials import Affine
from submodule_telescoping.exact_algebra.polynomials import RFuncNK
from submodule_telescoping.exact_algebra.polynomials import factor_k
from submodule_telescoping.exact_algebra.polynomials import format_rfuncnk
from submodule_telescoping.exact_algebra.polynomials import shift
from submodule_telescoping.utils.errors import InvalidInput
from submodule_telescoping.utils.errors import PoleAtPoint


@dataclass(frozen=True, order=True)
class Binomial:
    top: Affine
    bottom: Affine
    exponent: int = 1

    def gamma_args(self) -> list[tuple[Affine, int]]:
        e = self.exponent
        return [
            (self.top.plus(1), e),
            (self.bottom.plus(1), -e),
            ((self.top - self.bottom).plus(1), -e),
        ]

    def forms(self) -> list[Affine]:
        return [self.top, self.bottom]

    def base_value(self, n0: int, k0: int) -> Fraction:
        return Fraction(binomial(self.top(n0, k0), self.bottom(n0, k0)))

    def __str__(self) -> str:
        text = f"binomial({self.top},{self.bottom})"
        return text if self.exponent == 1 else f"{text}^{self.exponent}"


@dataclass(frozen=True, order=True)
class Factorial:
    arg: Affine
    exponent: int = 1

    def gamma_args(self) -> list[tuple[Affine, int]]:
        return [(self.arg.plus(1), self.exponent)]

    def forms(self) -> list[Affine]:
        return [self.arg]

    def base_value(self, n0: int, k0: int) -> Fraction | None:
        """None stands for the pole of a factorial at a negative integer."""
        a = self.arg(n0, k0)
        return None if a < 0 else Fraction(factorial(a))

    def __str__(self) -> str:
        text = f"factorial({self.arg})"
        return text if self.exponent == 1 else f"{text}^{self.exponent}"


@dataclass(frozen=True, order=True)
class GeometricPower:
    """q^A for a nonzero rational q and an affine exponent A."""

    base: Fraction
    power: Affine

    def __str__(self) -> str:
        return f"pow({self.base},{self.power})"


Factor = Union[Binomial, Factorial, GeometricPower]


def binomial(a: int, b: int) -> int:
    """
    Binomial coefficient with the convention binomial(a, b) = 0 for b < 0; for b >= 0
    it is the falling factorial a(a-1)...(a-b+1) / b!, which vanishes for 0 <= a < b.
    """
    if b < 0:
        return 0
    num = 1
    for i in range(b):
        num *= a - i
    return num // factorial(b)


def _factor_key(f: Factor) -> tuple:
    return (type(f).__name__, str(f))


@dataclass(frozen=True)
class TermSpec:
    """
    A hypergeometric term: product of special factors times a rational prefactor.

    Attributes:
        factors (tuple[Factor, ...]): Merged factors in canonical order, nonzero exponents.
        prefactor (RFuncNK): The rational part.
    """

    factors: tuple = ()
    prefactor: RFuncNK = field(default_factory=lambda: RFuncNK(1))

    @classmethod
    def build(cls, factors: list, prefactor: RFuncNK | None = None) -> "TermSpec":
        """Merges equal factors, drops trivial ones and sorts."""
        merged: dict = {}
        powers: dict = {}
        for f in factors:
            if isinstance(f, GeometricPower):
                if f.base == 0:
                    raise InvalidInput("pow base must be nonzero")
                if f.base == 1:
                    continue
                powers[f.base] = powers.get(f.base, Affine(0, 0, 0)) + f.power
                continue
            if f.exponent == 0:
                raise InvalidInput(f"zero exponent in {f}")
            key = (type(f), tuple(f.forms()))
            merged[key] = merged.get(key, 0) + f.exponent
        out = []
        for (kind, forms), e in merged.items():
            if e:
                out.append(kind(*forms, e))
        for base, power in powers.items():
            if power != Affine(0, 0, 0):
                out.append(GeometricPower(base, power))
        out.sort(key=_factor_key)
        return cls(tuple(out), prefactor if prefactor is not None else RFuncNK(1))

    def with_prefactor(self, prefactor: RFuncNK) -> "TermSpec":
        return TermSpec(self.factors, prefactor)

    def gamma_form(self) -> list[tuple[Affine, int]]:
        """Gamma(L)^e pairs of all binomial and factorial factors."""
        pairs = []
        for f in self.factors:
            if not isinstance(f, GeometricPower):
                pairs.extend(f.gamma_args())
        return pairs

    def powers(self) -> list[GeometricPower]:
        return [f for f in self.factors if isinstance(f, GeometricPower)]

    def __str__(self) -> str:
        parts = [str(f) for f in self.factors]
        if self.prefactor != 1 or not parts:
            parts.append(f"({format_rfuncnk(self.prefactor)})")
        return "*".join(parts)


@dataclass(frozen=True)
class HTerm:
    """
    A term with its shift certificates.

    Attributes:
        spec (TermSpec): The term.
        r1 (RFuncNK): H(n+1, k) / H(n, k).
        r2 (RFuncNK): H(n, k+1) / H(n, k).
    """

    spec: TermSpec
    r1: RFuncNK
    r2: RFuncNK

    def is_compatible(self) -> bool:
        return shift(self.r1, 0, 1) * self.r2 == shift(self.r2, 1, 0) * self.r1


@dataclass(frozen=True)
class Substitution:
    """
    The substitution n -> n + dn, k -> kn*n + kk*k + kc acting on affine forms and
    rational functions.
    """

    dn: int = 0
    kn: int = 0
    kk: int = 1
    kc: Fraction = Fraction(0)

    def form(self, a: Affine) -> Affine | None:
        """Image of an affine form, or None when it leaves the integer lattice."""
        const = a.const + a.n_coeff * self.dn + a.k_coeff * self.kc
        if const.denominator != 1:
            return None
        return Affine(a.n_coeff + a.k_coeff * self.kn, a.k_coeff * self.kk, int(const))

    def rational(self, f: RFuncNK) -> RFuncNK:
        if (self.kn, self.kk) == (1, -1) and self.kc == 0:
            return shift(f.reflect(), self.dn, 0)
        if (self.kn, self.kk) != (0, 1):
            raise InvalidInput("unsupported substitution of k")
        return shift(f, self.dn, self.kc)


SHIFT_N = Substitution(dn=1)
SHIFT_K = Substitution(kc=Fraction(1))


def pochhammer(a: Affine, c: int) -> RFuncNK:
    """Gamma(a + c) / Gamma(a) as a rational function, for any integer c."""
    poly = NK_RING.one
    base = a.poly()
    if c >= 0:
        for i in range(c):
            poly *= base + i
        return RFuncNK(poly)
    for i in range(1, -c + 1):
        poly *= base - i
    return RFuncNK(NK_RING.one, poly)


class NotAnAutomorphism:
    """Marks a substitution whose image of the term is not a rational multiple of it."""

    def __bool__(self) -> bool:
        return False

    def __repr__(self) -> str:
        return "NotAnAutomorphism"


NOT_AN_AUTOMORPHISM = NotAnAutomorphism()


def _gamma_ratio(before: list, after: list) -> RFuncNK | NotAnAutomorphism:
    classes: dict = defaultdict(list)
    for form, e in after:
        classes[(form.n_coeff, form.k_coeff)].append((form.const, e))
    for form, e in before:
        classes[(form.n_coeff, form.k_coeff)].append((form.const, -e))
    ratio = RFuncNK(1)
    for (a, b), members in classes.items():
        if sum(e for _, e in members) != 0:
            return NOT_AN_AUTOMORPHISM
        base = min(c for c, _ in members)
        for c, e in members:
            if c != base:
                ratio = ratio * pochhammer(Affine(a, b, base), c - base) ** e
    return ratio


def image_ratio(spec: TermSpec, sub: Substitution) -> RFuncNK | NotAnAutomorphism:
    """
    H(sub(n, k)) / H(n, k) as a rational function.

    Returns:
        RFuncNK | NotAnAutomorphism: The ratio, or the marker when it is not rational.
    """
    before = spec.gamma_form()
    after = []
    for form, e in before:
        image = sub.form(form)
        if image is None:
            return NOT_AN_AUTOMORPHISM
        after.append((image, e))
    ratio = _gamma_ratio(before, after)
    if not ratio:
        return ratio
    for power in spec.powers():
        image = sub.form(power.power)
        if image is None:
            return NOT_AN_AUTOMORPHISM
        diff = image - power.power
        if diff.n_coeff or diff.k_coeff:
            return NOT_AN_AUTOMORPHISM
        ratio = ratio * RFuncNK.from_fraction(power.base**diff.const)
    return ratio * sub.rational(spec.prefactor) / spec.prefactor


def certificates(spec: TermSpec) -> HTerm:
    """
    Computes R1 = H(n+1,k)/H and R2 = H(n,k+1)/H factor by factor.

    Args:
        spec (TermSpec): The term.

    Returns:
        HTerm: The term with its certificates.
    """
    if not spec.prefactor:
        raise InvalidInput("the zero term has no certificates")
    r1 = image_ratio(spec, SHIFT_N)
    r2 = image_ratio(spec, SHIFT_K)
    if not isinstance(r1, RFuncNK) or not isinstance(r2, RFuncNK):
        raise AssertionError("integer shifts always give rational certificates")
    return HTerm(spec, r1, r2)


def eval_term_flagged(spec: TermSpec, n0: int, k0: int) -> tuple[Fraction, bool]:
    """
    Evaluates the term exactly.

    Returns:
        tuple: (value, flagged); flagged is True when the prefactor has a pole but a
            vanishing special factor makes the value 0 by convention.

    Raises:
        PoleAtPoint: When the term is genuinely singular at (n0, k0).
    """
    special = Fraction(1)
    for f in spec.factors:
        if isinstance(f, GeometricPower):
            special *= f.base ** f.power(n0, k0)
            continue
        value = f.base_value(n0, k0)
        if value is None:
            if f.exponent > 0:
                raise PoleAtPoint((n0, k0), f"{f} is singular at {(n0, k0)}")
            special = Fraction(0)
            continue
        if value == 0 and f.exponent < 0:
            raise PoleAtPoint((n0, k0), f"{f} is singular at {(n0, k0)}")
        special *= value**f.exponent
    try:
        pre = spec.prefactor.eval(n0, k0)
    except PoleAtPoint:
        if special == 0:
            return Fraction(0), True
        raise
    return special * pre, False


def eval_term(spec: TermSpec, n0: int, k0: int) -> Fraction:
    return eval_term_flagged(spec, n0, k0)[0]


@dataclass(frozen=True)
class AutomorphismKind:
    """
    phi sends k to n - k; tau(p) sends k to k + 1/p.
    """

    name: str
    p: int = 2

    @property
    def order(self) -> int:
        return 2 if self.name == "phi" else self.p

    @property
    def substitution(self) -> Substitution:
        if self.name == "phi":
            return Substitution(kn=1, kk=-1)
        return Substitution(kc=Fraction(1, self.p))

    def __str__(self) -> str:
        return "phi" if self.name == "phi" else f"tau({self.p})"


PHI = AutomorphismKind("phi", 2)


def tau(p: int) -> AutomorphismKind:
    """tau(1) is the shift in k, which acts as the identity modulo Delta_k."""
    if p < 1:
        raise InvalidInput("tau needs p >= 1")
    return AutomorphismKind("tau", p)


@dataclass(frozen=True)
class Automorphism:
    """
    An automorphism acting on the module Q(n,k) * H0.

    Attributes:
        kind (AutomorphismKind): Which substitution.
        ratio (RFuncNK): image(H0) / H0.
    """

    kind: AutomorphismKind
    ratio: RFuncNK

    @property
    def order(self) -> int:
        return self.kind.order

    def apply(self, f: RFuncNK) -> RFuncNK:
        """Coefficient of the image of f * H0 with respect to H0."""
        return self.kind.substitution.rational(f) * self.ratio


def automorphism_ratio(spec: TermSpec, kind: AutomorphismKind) -> RFuncNK | NotAnAutomorphism:
    """
    image(H) / H for phi or tau(p).

    Returns:
        RFuncNK | NotAnAutomorphism: The ratio, or the marker when the image is not a
            rational multiple of H (e.g. tau(p) on arguments whose k-coefficient p does
            not divide).
    """
    return image_ratio(spec, kind.substitution)


def _k_dependent_part(poly: PolyElement) -> PolyElement:
    part = NK_RING.one
    for factor, mult in factor_k(poly):
        if factor.degree(1) > 0:
            part *= factor**mult
    return part


def _merge_shift_pairs(h: HTerm) -> RFuncNK:
    """
    The rational factor that AP merging removes from a term.

    Each merged pair u_i (numerator) / u_j (denominator) of one shift class contributes
    y with y(k+1)/y(k) = u_i/u_j; the result is the product of these y.
    """
    num_positions: dict = defaultdict(list)
    den_positions: dict = defaultdict(list)
    for poly, positions in ((h.r2.num, num_positions), (h.r2.den, den_positions)):
        for factor, mult in factor_k(poly):
            if factor.degree(1) <= 0:
                continue
            key, pos = Affine.from_poly(factor).shift_class()
            positions[key].extend([pos] * mult)
    r0 = RFuncNK(1)
    for key, num_list in num_positions.items():
        den_list = sorted(den_positions.get(key, []))
        alpha, beta, base = key
        for i, j in zip(sorted(num_list), den_list):
            block = RFuncNK(1)
            for pos in range(min(i, j), max(i, j)):
                block = block * RFuncNK(Affine(alpha, beta, base + beta * pos).poly())
            r0 = r0 * (block.inverse() if j > i else block)
    return r0


def ap_shift_reduce(h: HTerm) -> tuple[RFuncNK, HTerm]:
    """
    Splits H = R0 * H0 so that S_k(H0)/H0 has no numerator and denominator factors
    related by an integer shift in k.

    The k-dependent part of the prefactor goes to R0 whole, so the kernel factors of
    the binomial and factorial part are never paired against it and H0 keeps the
    natural support of that part. Only what is left is merged pairwise.

    Args:
        h (HTerm): The term.

    Returns:
        tuple: (R0, H0).

    Raises:
        UnsupportedDenominator: If the prefactor has a k-dependent factor that is not affine.
    """
    pre = h.spec.prefactor
    moved = RFuncNK(_k_dependent_part(pre.num), _k_dependent_part(pre.den))
    base = certificates(h.spec.with_prefactor(pre / moved)) if moved != 1 else h
    merged = _merge_shift_pairs(base)
    r0 = moved * merged
    if r0 == 1:
        return r0, h
    if merged == 1:
        return r0, base
    return r0, certificates(base.spec.with_prefactor(base.spec.prefactor / merged))
