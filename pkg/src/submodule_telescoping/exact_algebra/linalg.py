"""
Exact linear algebra over a field whose elements support + - * / and truth testing
(Fraction for Q, RFuncN for Q(n)).
"""
from typing import Any
from typing import Hashable

from submodule_telescoping.utils.errors import InvalidInput

Matrix = list[list[Any]]


def rref(rows: Matrix, ncols: int | None = None) -> tuple[Matrix, list[int]]:
    """
    Gauss-Jordan elimination.

    Args:
        rows (Matrix): The matrix as a list of rows; not modified.
        ncols (int | None): Column count, required when `rows` is empty.

    Returns:
        tuple: (reduced row echelon form without zero rows, pivot columns).
    """
    if ncols is None:
        if not rows:
            raise InvalidInput("column count of an empty matrix is unknown")
        ncols = len(rows[0])
    work = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(work)) if work[i][col]), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        inv = 1 / work[r][col]
        work[r] = [x * inv for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][col]:
                factor = work[i][col]
                work[i] = [x - factor * y for x, y in zip(work[i], work[r])]
        pivots.append(col)
        r += 1
        if r == len(work):
            break
    return work[:r], pivots


def nullspace(rows: Matrix, ncols: int, zero: Any, one: Any) -> Matrix:
    """
    A basis of {x : rows * x = 0}, one vector per free column.
    """
    if not rows:
        return [[one if i == j else zero for i in range(ncols)] for j in range(ncols)]
    reduced, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [zero] * ncols
        vec[f] = one
        for row, p in zip(reduced, pivots):
            vec[p] = -row[f]
        basis.append(vec)
    return basis


def rank(rows: Matrix, ncols: int | None = None) -> int:
    if not rows:
        return 0
    return len(rref(rows, ncols)[1])


def identity(size: int, zero: Any, one: Any) -> Matrix:
    return [[one if i == j else zero for j in range(size)] for i in range(size)]


def mat_vec(a: Matrix, v: list, zero: Any) -> list:
    out = []
    for row in a:
        acc = zero
        for x, y in zip(row, v):
            if x and y:
                acc = acc + x * y
        out.append(acc)
    return out


def mat_mul(a: Matrix, b: Matrix, zero: Any) -> Matrix:
    if not a:
        return []
    cols = list(zip(*b)) if b else []
    return [[_dot(row, col, zero) for col in cols] for row in a]


def _dot(row, col, zero):
    acc = zero
    for x, y in zip(row, col):
        if x and y:
            acc = acc + x * y
    return acc


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a: Matrix, c: Any) -> Matrix:
    return [[x * c for x in row] for row in a]


def is_zero_matrix(a: Matrix) -> bool:
    return not any(x for row in a for x in row)


def columns(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)] if a else []


class IncrementalEchelon:
    """
    Maintains an echelon basis of sparse vectors inserted one by one and reports the
    first linear dependency.

    Vectors are dicts from hashable coordinates to field elements. Every stored row
    remembers the combination of inserted vectors it equals.

    Attributes:
        one: The unit of the field.
        size (int): Number of independent vectors inserted so far.
    """

    def __init__(self, one: Any):
        self.one = one
        self.size = 0
        self._count = 0
        self._rows: list[tuple[Hashable, dict, dict]] = []

    def insert(self, vector: dict) -> dict | None:
        """
        Inserts the next vector v_m.

        Args:
            vector (dict): The vector, keyed by coordinate.

        Returns:
            dict | None: None when v_m is independent of v_0..v_{m-1}; otherwise the
                coefficients {i: c_i} with v_m = sum of c_i * v_i over i < m.
        """
        index = self._count
        self._count += 1
        work = {key: val for key, val in vector.items() if val}
        combo = {index: self.one}
        for pivot, row, row_combo in self._rows:
            factor = work.get(pivot)
            if not factor:
                continue
            for key, val in row.items():
                updated = work.get(key, 0) - factor * val
                if updated:
                    work[key] = updated
                else:
                    work.pop(key, None)
            for key, val in row_combo.items():
                updated = combo.get(key, 0) - factor * val
                if updated:
                    combo[key] = updated
                else:
                    combo.pop(key, None)
        if not work:
            return {i: -c for i, c in combo.items() if i != index}
        pivot = next(iter(work))
        inv = self.one / work[pivot]
        self._rows.append(
            (
                pivot,
                {key: val * inv for key, val in work.items()},
                {key: val * inv for key, val in combo.items()},
            )
        )
        self.size += 1
        return None
