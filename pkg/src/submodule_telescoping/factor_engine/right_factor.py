"""
The right factor R: the monic operator of least order in Q(n)[S_n] mapping
m = R0 * H0 into N, i.e. clearing every fractional part in the standard form.
"""
from dataclasses import dataclass
from dataclasses import field
from fractions import Fraction
from math import gcd

from submodule_telescoping.exact_algebra.linalg import IncrementalEchelon
from submodule_telescoping.exact_algebra.polynomials import Affine
from submodule_telescoping.exact_algebra.polynomials import PolyK
from submodule_telescoping.exact_algebra.polynomials import RFuncN
from submodule_telescoping.exact_algebra.polynomials import RFuncNK
from submodule_telescoping.exact_algebra.polynomials import factor_k
from submodule_telescoping.exact_algebra.polynomials import shift
from submodule_telescoping.hyperterm.term import Substitution
from submodule_telescoping.hyperterm.term import image_ratio
from submodule_telescoping.ore_ops.operator import OreOp
from submodule_telescoping.ore_ops.operator import lclm
from submodule_telescoping.ore_ops.operator import right_divmod
from submodule_telescoping.reduction.context import ReductionContext
from submodule_telescoping.utils.errors import AnsatzCapExceeded
from submodule_telescoping.utils.errors import DivisionByZero
from submodule_telescoping.utils.errors import PoleAtPoint
from submodule_telescoping.utils.errors import UnsupportedKernel
from submodule_telescoping.utils.errors import UnsupportedPoleOrder
from submodule_telescoping.utils.logging import log


@dataclass(frozen=True)
class ClassMatch:
    """
    Residue matching for one denominator factor alpha*n + beta*k + c of R0.

    Attributes:
        factor (Affine): The factor.
        t (int): Shift in n, t > 0.
        s (int): Shift in k with t*alpha + s*beta = 0.
        r (RFuncN | None): H(n+t, k+s)/H(n, k) at the root of the factor, or None
            when the quotient has a pole there.
    """

    factor: Affine
    t: int
    s: int
    r: RFuncN | None

    @property
    def operator(self) -> OreOp | None:
        if self.r is None:
            return None
        return OreOp({self.t: 1, 0: -self.r})


@dataclass
class RightFactorResult:
    """
    Attributes:
        R (OreOp): The normalized right factor.
        residual (PolyK): p with R(m) = p * H0 + Delta_k(Omega), p on the basis degrees.
        target (list[RFuncN]): Coordinates of R(m) in N.
        class_data (list[ClassMatch]): Residue matching per denominator factor of R0.
        fast_path (OreOp | None): The lclm of the class operators when every class matched.
        cert (RFuncNK | None): g with R(m) = p * H0 + Delta_k(g * H0), when tracked.
    """

    R: OreOp
    residual: PolyK
    target: list
    class_data: list = field(default_factory=list)
    fast_path: OreOp | None = None
    cert: RFuncNK | None = None

    @property
    def fast_path_agrees(self) -> bool:
        return self.fast_path is not None and self.fast_path == self.R


def match_classes(r0: RFuncNK, ctx: ReductionContext) -> list[ClassMatch]:
    """
    Pairs every affine denominator factor of R0 with the shift (t, s) that leaves it
    invariant and the value r that cancels its residue in S_n^t(m) - r * m.
    """
    matches = []
    for factor, mult in factor_k(r0.den):
        if factor.degree(1) <= 0:
            continue
        form = Affine.from_poly(factor)
        g = gcd(form.n_coeff, form.k_coeff)
        t, s = form.k_coeff // g, -form.n_coeff // g
        if t < 0:
            t, s = -t, -s
        quotient = shift(r0, t, s) / r0 * image_ratio(ctx.h0.spec, Substitution(dn=t, kc=Fraction(s)))
        rho = -(RFuncN.variable() * form.n_coeff + form.const) / form.k_coeff
        r = None
        if mult == 1:
            try:
                r = quotient.subs_k(rho)
            except (PoleAtPoint, DivisionByZero):
                pass
        matches.append(ClassMatch(form, t, s, r))
    return matches


def right_factor(r0: RFuncNK, ctx: ReductionContext, track_cert: bool = False) -> RightFactorResult:
    """
    Finds R = sum r_i S_n^i of least order with R(m) in N.

    The iterates q_0 = R0, q_{i+1} = sigma_n(q_i) * R1 represent S_n^i(m); the first
    Q(n)-linear dependence among the fractional parts of their standard forms gives R.

    Args:
        r0 (RFuncNK): The rational factor of H = R0 * H0.
        ctx (ReductionContext): Reduction data of H0.
        track_cert (bool): Also combine the reduction certificates.

    Returns:
        RightFactorResult: R with the coordinates of R(m).

    Raises:
        UnsupportedPoleOrder: If no dependence appears below the cap and R0 has a
            repeated denominator factor.
        AnsatzCapExceeded: If no dependence appears below the cap otherwise.
    """
    echelon = IncrementalEchelon(RFuncN(1))
    forms = []
    q = r0
    relation = None
    for _ in range(ctx.degree_cap + 1):
        form = ctx.std_form(q, track_cert)
        forms.append(form)
        relation = echelon.insert(form.frac_vector())
        if relation is not None:
            break
        q = shift(q, 1, 0) * ctx.h0.r1
    if relation is None:
        if any(mult > 1 for factor, mult in factor_k(r0.den) if factor.degree(1) > 0):
            raise UnsupportedPoleOrder("repeated denominator factor of R0 without a right factor below the cap")
        raise AnsatzCapExceeded(ctx.degree_cap, f"no right factor of order <= {ctx.degree_cap}")
    order = len(forms) - 1
    coeffs = {order: RFuncN(1)}
    for index, c in relation.items():
        coeffs[index] = -c
    residual = PolyK()
    cert = RFuncNK(0) if track_cert else None
    for index, c in coeffs.items():
        residual = residual + forms[index].poly.scale(c)
        if track_cert:
            cert = cert + c.to_rfuncnk() * forms[index].cert
    target = [residual[d] for d in ctx.basis().degrees]
    operator = OreOp(coeffs)
    if operator.lo:
        raise UnsupportedKernel("S_n is not invertible on M/N")
    normalized = operator.normalized()
    scale = normalized.lc()
    residual = residual.scale(scale)
    target = [c * scale for c in target]
    if track_cert:
        cert = cert * scale.to_rfuncnk()
    classes = match_classes(r0, ctx)
    fast = None
    if classes and all(m.r is not None for m in classes):
        fast = lclm([m.operator for m in classes])
        _, rem = right_divmod(fast, normalized)
        if rem:
            log("class matching does not contain the right factor", ctx.verbose, level=2)
            fast = None
    log(f"right factor of order {order}", ctx.verbose)
    return RightFactorResult(normalized, residual, target, classes, fast, cert)
