"""
Recurrence guessing: an ansatz sum_{i<=r} sum_{j<=d} c_ij n^j a(n+i) = 0 solved over Q.
"""
from fractions import Fraction

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from submodule_telescoping.exact_algebra.polynomials import RFuncN
from submodule_telescoping.exact_algebra.polynomials import to_fraction
from submodule_telescoping.ore_ops.operator import OreOp
from submodule_telescoping.ore_ops.operator import SeqWindow
from submodule_telescoping.utils.errors import InsufficientWindow

SAFETY_MARGIN = 10


def required_window(max_order: int, max_degree: int) -> int:
    return (max_order + 1) * (max_degree + 2) + max_order + SAFETY_MARGIN


def _qq(value: Fraction):
    return QQ(value.numerator, value.denominator)


def _solve(window: SeqWindow, order: int, degree: int, points: range) -> list | None:
    rows = []
    for n in points:
        row = []
        for i in range(order + 1):
            value = window[n + i]
            for j in range(degree + 1):
                row.append(_qq(value * n**j))
        rows.append(row)
    cols = (order + 1) * (degree + 1)
    kernel = DomainMatrix(rows, (len(rows), cols), QQ).nullspace()
    if kernel.shape[0] == 0:
        return None
    return [to_fraction(x) for x in kernel.to_list()[0]]


def _operator(vector: list, order: int, degree: int) -> OreOp:
    n = RFuncN.variable()
    coeffs = {}
    for i in range(order + 1):
        c = RFuncN(0)
        for j in range(degree + 1):
            x = vector[i * (degree + 1) + j]
            if x:
                c = c + n**j * RFuncN(x)
        coeffs[i] = c
    return OreOp(coeffs)


def guess_recurrence(window: SeqWindow, max_order: int, max_degree: int) -> OreOp | None:
    """
    Finds the operator of least order, then least coefficient degree, that annihilates
    the window.

    The last SAFETY_MARGIN equations are held out of the solve and only used to
    confirm the candidate.

    Args:
        window (SeqWindow): Exact sequence values.
        max_order (int): Largest order tried.
        max_degree (int): Largest coefficient degree tried.

    Returns:
        OreOp | None: The normalized operator, or None when nothing below the caps fits.

    Raises:
        InsufficientWindow: If the window is shorter than required_window(max_order, max_degree).
    """
    needed = required_window(max_order, max_degree)
    if len(window) < needed:
        raise InsufficientWindow(f"guessing needs {needed} values, got {len(window)}")
    start = window.offset
    for order in range(1, max_order + 1):
        solve_points = range(start, start + len(window) - order - SAFETY_MARGIN)
        if _solve(window, order, max_degree, solve_points) is None:
            continue
        for degree in range(max_degree + 1):
            vector = _solve(window, order, degree, solve_points)
            if vector is None:
                continue
            op = _operator(vector, order, degree)
            if op.order == order and op.apply(window).is_zero():
                return op.normalized()
    return None
