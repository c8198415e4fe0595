"""
Exact linear algebra over QQ and QQ(v)
"""

import logging
from fractions import Fraction
from typing import Any, List, Sequence, Tuple

from sympy import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError

from algebra.errors import SingularMatrix
from algebra.scalars import FIELD, RatFuncQ

logger = logging.getLogger(__name__)

RATFUNC_DOMAIN = FIELD.to_domain()


def _rational_matrix(matrix: Sequence[Sequence[Any]]) -> DomainMatrix:
    rows = [[QQ(Fraction(x).numerator, Fraction(x).denominator) for x in row] for row in matrix]
    return DomainMatrix(rows, (len(rows), len(rows[0]) if rows else 0), QQ)


def rank_ratfunc(matrix: Sequence[Sequence[RatFuncQ]]) -> int:
    """
    Rank of a matrix over QQ(v)

    Args:
        matrix: rows of RatFuncQ entries

    Returns:
        The exact rank
    """
    if not matrix or not matrix[0]:
        return 0
    rows = [[entry.value for entry in row] for row in matrix]
    return DomainMatrix(rows, (len(rows), len(rows[0])), RATFUNC_DOMAIN).rank()


class RowSpace:
    """Incremental row echelon form over an exact field (Fraction or sympy field elements)"""

    def __init__(self, width: int):
        self.width = width
        self._rows: List[Tuple[int, List[Any]]] = []

    @property
    def rank(self) -> int:
        return len(self._rows)

    def reduce(self, row: Sequence[Any]) -> List[Any]:
        reduced = list(row)
        for pivot_col, basis_row in self._rows:
            factor = reduced[pivot_col]
            if factor:
                reduced = [a - factor * b for a, b in zip(reduced, basis_row)]
        return reduced

    def add(self, row: Sequence[Any]) -> bool:
        """
        Insert a row

        Returns:
            True if the row was independent of the rows already present
        """
        if len(row) != self.width:
            raise ValueError(f"Row of length {len(row)} in a space of width {self.width}")
        reduced = self.reduce(row)
        for col, entry in enumerate(reduced):
            if entry:
                scale = entry ** -1
                self._rows.append((col, [value * scale for value in reduced]))
                return True
        return False


def rank_rational(matrix: Sequence[Sequence[Fraction]]) -> int:
    if not matrix or not matrix[0]:
        return 0
    return _rational_matrix(matrix).rank()


def invert_rational(matrix: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    """
    Inverse of a square rational matrix

    Raises:
        SingularMatrix: the determinant vanishes
    """
    try:
        inverse = _rational_matrix(matrix).inv()
    except DMNonInvertibleMatrixError as exc:
        raise SingularMatrix(f"Matrix is singular: {exc}") from None
    return [[Fraction(int(x.p), int(x.q)) for x in row] for row in inverse.to_Matrix().tolist()]
