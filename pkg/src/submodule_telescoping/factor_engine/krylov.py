from submodule_telescoping.exact_algebra.linalg import IncrementalEchelon
from submodule_telescoping.exact_algebra.polynomials import RFuncN
from submodule_telescoping.ore_ops.operator import OreOp
from submodule_telescoping.reduction.context import SnMatrix


def krylov_annihilator(target: list, matrix: SnMatrix) -> OreOp:
    """
    The minimal annihilator of an element of N under the twisted action
    v -> A * sigma_n(v).

    Args:
        target (list[RFuncN]): Coordinates of the element.
        matrix (SnMatrix): The action of S_n on N.

    Returns:
        OreOp: The normalized operator L with sum l_i * (A sigma_n)^i (target) = 0;
            the constant 1 for the zero element.
    """
    if not any(target):
        return OreOp.scalar(1)
    echelon = IncrementalEchelon(RFuncN(1))
    v = list(target)
    step = 0
    while True:
        relation = echelon.insert(dict(enumerate(v)))
        if relation is not None:
            break
        v = matrix.twisted_apply(v)
        step += 1
    coeffs = {step: RFuncN(1)}
    for index, c in relation.items():
        coeffs[index] = -c
    return OreOp(coeffs).normalized()


def twisted_apply_op(op: OreOp, target: list, matrix: SnMatrix) -> list:
    """Coordinates of op applied to the element with coordinates target."""
    total = [RFuncN(0)] * len(target)
    v = list(target)
    for exp in range(op.hi + 1):
        c = op.coefficient(exp)
        if c:
            total = [t + c * x for t, x in zip(total, v)]
        v = matrix.twisted_apply(v)
    return total
