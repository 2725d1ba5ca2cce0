"""
Independent checks of a telescoping run: exact sums, recurrence annihilation,
the symbolic certificate identity and zero-sum probes of components.
"""
from dataclasses import asdict
from dataclasses import dataclass
from dataclasses import field
from fractions import Fraction

from colorama import Fore
from colorama import Style

from submodule_telescoping.exact_algebra.polynomials import RFuncNK
from submodule_telescoping.exact_algebra.polynomials import shift
from submodule_telescoping.factor_engine.automorphisms import Component
from submodule_telescoping.factor_engine.telescope import TelescoperResult
from submodule_telescoping.hyperterm.support import KRange
from submodule_telescoping.hyperterm.support import natural_support
from submodule_telescoping.hyperterm.term import HTerm
from submodule_telescoping.hyperterm.term import TermSpec
from submodule_telescoping.hyperterm.term import eval_term
from submodule_telescoping.hyperterm.term import eval_term_flagged
from submodule_telescoping.ore_ops.operator import OreOp
from submodule_telescoping.ore_ops.operator import SeqWindow
from submodule_telescoping.utils.errors import InsufficientWindow
from submodule_telescoping.utils.errors import InvalidInput
from submodule_telescoping.utils.errors import PoleAtPoint


@dataclass
class CheckResult:
    """
    Attributes:
        name (str): What was checked.
        range (tuple[int, int]): The n-range covered.
        passed (bool): The outcome.
        witness (dict | None): The first failing point and its values, when failing.
        skipped (list[int]): Points that could not be checked.
        note (str): Extra information, e.g. the caps of a guess.
    """

    name: str
    range: tuple
    passed: bool
    witness: dict | None = None
    skipped: list = field(default_factory=list)
    note: str = ""


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, check: CheckResult) -> CheckResult:
        self.checks.append(check)
        return check

    def to_json(self) -> dict:
        return {"passed": self.passed, "checks": [asdict(c) for c in self.checks]}

    def to_table(self, color: bool = True) -> str:
        """A human-readable table, one line per check."""
        lines = []
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            if color:
                status = (Fore.GREEN if c.passed else Fore.RED) + status + Style.RESET_ALL
            line = f"{status}  {c.name:<28} n={c.range[0]}..{c.range[1]}"
            if c.skipped:
                line += f"  skipped {c.skipped}"
            if c.witness:
                line += f"  witness {c.witness}"
            if c.note:
                line += f"  ({c.note})"
            lines.append(line)
        return "\n".join(lines)


def sum_sequence(spec: TermSpec, k_range: KRange, n_from: int, n_to: int) -> SeqWindow:
    """
    Exact values a(n) = sum of H(n, k) over the k-range, for n_from <= n <= n_to.

    Raises:
        PoleAtPoint: When a summand is singular; the point is the witness.
    """
    values = []
    flagged = []
    for n in range(n_from, n_to + 1):
        lo, hi = k_range.bounds(spec, n)
        total = Fraction(0)
        hit = False
        for k in range(lo, hi + 1):
            value, convention = eval_term_flagged(spec, n, k)
            total += value
            hit = hit or convention
        values.append(total)
        if hit:
            flagged.append(n)
    return SeqWindow(n_from, tuple(values), tuple(flagged))


def check_annihilates(op: OreOp, window: SeqWindow, name: str = "annihilates") -> CheckResult:
    """
    Checks op(a)(n) = 0 on every point of the window where all coefficients are
    defined and the leading coefficient does not vanish.

    Raises:
        InsufficientWindow: If the window is shorter than order + 1.
    """
    if len(window) < op.order + 1:
        raise InsufficientWindow(f"window of length {len(window)} for an operator of order {op.order}")
    start = window.offset - op.lo
    stop = window.offset + len(window) - op.hi
    skipped = []
    for n in range(start, stop):
        try:
            coeffs = {exp: c.eval(n) for exp, c in op.coeffs.items()}
        except PoleAtPoint:
            skipped.append(n)
            continue
        if coeffs[op.hi] == 0:
            skipped.append(n)
            continue
        value = sum(c * window[n + exp] for exp, c in coeffs.items())
        if value:
            witness = {"n": n, "value": str(value), "terms": [str(window[n + e]) for e in coeffs]}
            return CheckResult(name, (start, stop - 1), False, witness, skipped)
    return CheckResult(name, (start, stop - 1), True, None, skipped)


def _shifted_products(r1: RFuncNK, count: int) -> list[RFuncNK]:
    """[H(n+i,k)/H(n,k) for i < count]."""
    out = [RFuncNK(1)]
    for i in range(1, count):
        out.append(out[-1] * shift(r1, i - 1, 0))
    return out


def check_certificate(op: OreOp, cert: RFuncNK, h: HTerm) -> CheckResult:
    """
    Checks L(H) = Delta_k(c H) as an identity of rational functions:
    sum of l_i(n) H(n+i,k)/H(n,k) = c(n,k+1) R2 - c(n,k).
    """
    if op.lo < 0:
        raise InvalidInput("certificate check needs nonnegative exponents")
    products = _shifted_products(h.r1, op.hi + 1)
    lhs = RFuncNK(0)
    for exp, c in op.coeffs.items():
        lhs = lhs + c.to_rfuncnk() * products[exp]
    residue = lhs - (shift(cert, 0, 1) * h.r2 - cert)
    witness = None if not residue else {"residue": str(residue)}
    return CheckResult("certificate", (0, 0), not residue, witness)


def telescoper_certificate(result: TelescoperResult) -> tuple[OreOp, RFuncNK]:
    """
    Builds (L_left * R, c) with (L_left * R)(H) = Delta_k(c H).

    Needs a run with track_cert: R(H) = p H0 + Delta_k(g H0) comes from the right
    factor, L_left(p H0) is reduced again with certificates.

    Raises:
        InvalidInput: If the run did not track certificates.
    """
    right = result.right
    if right.cert is None:
        raise InvalidInput("the run did not track certificates")
    ctx = result.context
    left = result.L_left
    products = _shifted_products(ctx.h0.r1, left.hi + 1)
    p = right.residual.to_rfuncnk()
    image = RFuncNK(0)
    lifted = RFuncNK(0)
    for exp, c in left.coeffs.items():
        coeff = c.to_rfuncnk() * products[exp]
        image = image + coeff * shift(p, exp, 0)
        lifted = lifted + coeff * shift(right.cert, exp, 0)
    form = ctx.std_form(image, track_cert=True)
    if not form.in_submodule() or any(form.coords):
        raise InvalidInput("L_left does not annihilate R(m)")
    cert_h0 = form.cert + lifted
    return left * result.R, cert_h0 / result.r0


def zero_sum_probe(result: TelescoperResult, component: Component, spec: TermSpec, n_max: int = 20) -> CheckResult:
    """
    Sums the representative sum_d t_d(n) k^d H0(n,k) of a component's target over
    the natural support for n = 1..n_max and checks that every sum is 0.
    """
    degrees = result.context.basis().degrees
    h0_spec = result.h0.spec
    skipped = []
    for n in range(1, n_max + 1):
        try:
            coeffs = [c.eval(n) for c in component.target]
        except PoleAtPoint:
            skipped.append(n)
            continue
        lo, hi = natural_support(h0_spec, n)
        total = Fraction(0)
        try:
            for k in range(lo, hi + 1):
                poly = sum((c * Fraction(k) ** d for c, d in zip(coeffs, degrees)), Fraction(0))
                if poly:
                    total += poly * eval_term(h0_spec, n, k)
        except PoleAtPoint:
            skipped.append(n)
            continue
        if total:
            name = f"zero-sum {'/'.join(component.labels)}"
            return CheckResult(name, (1, n_max), False, {"n": n, "sum": str(total)}, skipped)
    return CheckResult(f"zero-sum {'/'.join(component.labels)}", (1, n_max), True, None, skipped)
