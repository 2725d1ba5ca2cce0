"""
Automorphisms of N and the rational direct-sum decomposition they induce.

An automorphism of order p acts on the coordinates of N by a matrix Phi with
Phi^p = I. Its rational idempotents e_d(Phi), one per cyclotomic factor of x^p - 1,
split N into Phi-stable parts; the parts of different automorphisms are intersected
by multiplying their projectors.
"""
from dataclasses import dataclass
from dataclasses import field
from fractions import Fraction
from functools import reduce
from itertools import product
from math import gcd

from sympy import Poly
from sympy import Symbol
from sympy import cyclotomic_poly
from sympy import divisors
from sympy.polys.domains import QQ

from submodule_telescoping.exact_algebra.linalg import identity
from submodule_telescoping.exact_algebra.linalg import is_zero_matrix
from submodule_telescoping.exact_algebra.linalg import mat_add
from submodule_telescoping.exact_algebra.linalg import mat_mul
from submodule_telescoping.exact_algebra.linalg import mat_scale
from submodule_telescoping.exact_algebra.linalg import mat_vec
from submodule_telescoping.exact_algebra.linalg import rref
from submodule_telescoping.exact_algebra.polynomials import RFuncN
from submodule_telescoping.exact_algebra.polynomials import RFuncNK
from submodule_telescoping.exact_algebra.polynomials import to_fraction
from submodule_telescoping.hyperterm.term import PHI
from submodule_telescoping.hyperterm.term import Automorphism
from submodule_telescoping.hyperterm.term import Binomial
from submodule_telescoping.hyperterm.term import Factorial
from submodule_telescoping.hyperterm.term import HTerm
from submodule_telescoping.hyperterm.term import automorphism_ratio
from submodule_telescoping.hyperterm.term import tau
from submodule_telescoping.ore_ops.operator import OreOp
from submodule_telescoping.reduction.context import ReductionContext
from submodule_telescoping.utils.errors import UnsupportedDecomposition
from submodule_telescoping.utils.logging import log

ZERO = RFuncN(0)
ONE = RFuncN(1)

_X = Symbol("x")


def detect_automorphisms(h0: HTerm) -> list[Automorphism]:
    """
    Finds phi (k -> n - k) and tau(p) (k -> k + 1/p) among the substitutions that map
    H0 to a rational multiple of itself.

    tau(p) is only tried for p >= 2 dividing every k-coefficient of a binomial or
    factorial argument.
    """
    found = []
    ratio = automorphism_ratio(h0.spec, PHI)
    if ratio:
        found.append(Automorphism(PHI, ratio))
    coeffs = []
    for f in h0.spec.factors:
        if isinstance(f, (Binomial, Factorial)):
            coeffs.extend(form.k_coeff for form in f.forms())
    common = reduce(gcd, coeffs, 0)
    for p in divisors(common) if common > 1 else []:
        if p < 2:
            continue
        ratio = automorphism_ratio(h0.spec, tau(p))
        if ratio:
            found.append(Automorphism(tau(p), ratio))
    return found


def automorphism_matrix(aut: Automorphism, ctx: ReductionContext) -> list[list[RFuncN]]:
    """
    The matrix of an automorphism on N; column d holds the coordinates of the image of
    k^d * H0.

    Raises:
        UnsupportedDecomposition: If an image leaves N or Phi^order != I.
    """
    basis = ctx.basis()
    cols = []
    for d in basis.degrees:
        form = ctx.std_form(aut.apply(RFuncNK.k() ** d))
        if not form.in_submodule():
            raise UnsupportedDecomposition(f"{aut.kind} does not map N into itself")
        cols.append(list(form.coords))
    size = basis.dim
    matrix = [[cols[c][r] for c in range(size)] for r in range(size)]
    if matrix_power(matrix, aut.order) != identity(size, ZERO, ONE):
        raise UnsupportedDecomposition(f"{aut.kind} does not have order {aut.order} on N")
    return matrix


def matrix_power(matrix: list, exponent: int) -> list:
    result = identity(len(matrix), ZERO, ONE)
    for _ in range(exponent):
        result = mat_mul(result, matrix, ZERO)
    return result


def idempotents(p: int) -> list[tuple[int, list[Fraction]]]:
    """
    The primitive idempotents of Q[x]/(x^p - 1).

    Returns:
        list: (d, coefficients of e_d ascending) for each divisor d of p, with
            e_d = 1 mod Phi_d(x) and e_d = 0 mod (x^p - 1)/Phi_d(x).
    """
    whole = Poly(_X**p - 1, _X, domain=QQ)
    out = []
    for d in divisors(p):
        cyc = Poly(cyclotomic_poly(d, _X), _X, domain=QQ)
        rest = whole.exquo(cyc)
        e = (rest * rest.invert(cyc)).rem(whole)
        out.append((d, [to_fraction(c) for c in reversed(e.all_coeffs())]))
    return out


@dataclass(frozen=True)
class Projector:
    """
    Attributes:
        label (str): e.g. "phi:2" for the image of (1 - phi)/2.
        index (int): The cyclotomic index d.
        matrix (list[list[RFuncN]]): e_d(Phi).
    """

    label: str
    index: int
    matrix: list


def projectors(aut: Automorphism, matrix: list) -> list[Projector]:
    size = len(matrix)
    powers = [identity(size, ZERO, ONE)]
    for _ in range(1, aut.order):
        powers.append(mat_mul(powers[-1], matrix, ZERO))
    out = []
    for d, coeffs in idempotents(aut.order):
        total = [[ZERO] * size for _ in range(size)]
        for c, power in zip(coeffs, powers):
            if c:
                total = mat_add(total, mat_scale(power, RFuncN(c)))
        out.append(Projector(f"{aut.kind}:{d}", d, total))
    return out


@dataclass
class Component:
    """
    A summand of N stable under the twisted action of S_n.

    Attributes:
        basis_vectors (list): Coordinate vectors spanning the component.
        target (list[RFuncN]): The projection of R(m).
        projector (list): The projector matrix onto the component.
        labels (tuple[str, ...]): The idempotents multiplied to get the projector.
        zero_sum (bool): True when the component lies in the phi-odd part.
        L (OreOp | None): Annihilator of the target, once computed.
    """

    basis_vectors: list
    target: list
    projector: list
    labels: tuple = ()
    zero_sum: bool = False
    L: OreOp | None = field(default=None)

    @property
    def dim(self) -> int:
        return len(self.basis_vectors)

    @property
    def is_dropped(self) -> bool:
        return not any(self.target)


def _image_basis(matrix: list) -> list:
    if not matrix:
        return []
    rows, _ = rref([list(col) for col in zip(*matrix)])
    return rows


def decompose(ctx: ReductionContext, auts: list, target: list) -> list[Component]:
    """
    Splits N by the rational idempotents of every automorphism.

    Args:
        ctx (ReductionContext): The reduction data; fixes the basis of N.
        auts (list[Automorphism]): The automorphisms to decompose with.
        target (list[RFuncN]): Coordinates of R(m).

    Returns:
        list[Component]: Components with nonzero image, in a deterministic order;
            components whose projected target vanishes are marked dropped.

    Raises:
        UnsupportedDecomposition: If projectors of different automorphisms do not commute.
    """
    size = ctx.basis().dim
    families = []
    for aut in auts:
        family = projectors(aut, automorphism_matrix(aut, ctx))
        families.append((aut, family))
    for (a, fa), (b, fb) in ((x, y) for i, x in enumerate(families) for y in families[i + 1 :]):
        for p, q in product(fa, fb):
            if mat_mul(p.matrix, q.matrix, ZERO) != mat_mul(q.matrix, p.matrix, ZERO):
                raise UnsupportedDecomposition(f"projectors of {a.kind} and {b.kind} do not commute")
    components = []
    choices = product(*(family for _, family in families)) if families else [()]
    for choice in choices:
        matrix = identity(size, ZERO, ONE)
        for proj in choice:
            matrix = mat_mul(matrix, proj.matrix, ZERO)
        if is_zero_matrix(matrix):
            continue
        zero_sum = any(aut.kind == PHI and proj.index == 2 for (aut, _), proj in zip(families, choice))
        components.append(
            Component(
                basis_vectors=_image_basis(matrix),
                target=mat_vec(matrix, target, ZERO),
                projector=matrix,
                labels=tuple(p.label for p in choice),
                zero_sum=zero_sum,
            )
        )
    log(f"decomposition: dims {[c.dim for c in components]}", ctx.verbose)
    return components
