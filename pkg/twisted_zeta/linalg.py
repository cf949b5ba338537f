"""Exact linear algebra over the integers and the rationals."""

from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction

IntMatrix = tuple[tuple[int, ...], ...]


class SingularMatrixError(ValueError):
    """Raised when an exact solve or adjugate row meets det = 0."""


def _check_square(matrix: Sequence[Sequence[int | Fraction]]) -> int:
    size = len(matrix)
    if size == 0 or any(len(row) != size for row in matrix):
        raise ValueError("matrix must be square and non-empty")
    return size


def determinant(matrix: Sequence[Sequence[int]]) -> int:
    """Determinant of an integer matrix by Bareiss fraction-free elimination."""
    size = _check_square(matrix)
    m = [list(row) for row in matrix]
    sign = 1
    prev = 1
    for k in range(size - 1):
        if m[k][k] == 0:
            for i in range(k + 1, size):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                # exact by Sylvester's identity
                m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[size - 1][size - 1]


def _minor(matrix: Sequence[Sequence[int]], row: int, col: int) -> list[list[int]]:
    return [
        [value for j, value in enumerate(r) if j != col]
        for i, r in enumerate(matrix)
        if i != row
    ]


def adjugate(matrix: Sequence[Sequence[int]]) -> IntMatrix:
    """Return adj(M), so that adj(M) M = M adj(M) = det(M) I."""
    size = _check_square(matrix)
    if size == 1:
        return ((1,),)
    return tuple(
        tuple(
            (-1) ** (i + j) * determinant(_minor(matrix, j, i)) for j in range(size)
        )
        for i in range(size)
    )


def transpose(matrix: Sequence[Sequence[int]]) -> IntMatrix:
    return tuple(zip(*matrix, strict=True))


def vec_mat(vector: Sequence[int], matrix: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Row vector times matrix."""
    return tuple(
        sum(v * row[j] for v, row in zip(vector, matrix, strict=True))
        for j in range(len(matrix[0]))
    )


def mat_vec(matrix: Sequence[Sequence[int]], vector: Sequence[int]) -> tuple[int, ...]:
    """Matrix times column vector."""
    return tuple(sum(a * v for a, v in zip(row, vector, strict=True)) for row in matrix)


def solve(
    matrix: Sequence[Sequence[Fraction | int]], rhs: Sequence[Fraction | int]
) -> list[Fraction]:
    """Solve M x = rhs exactly by Gauss-Jordan elimination over Fraction.

    Raises:
        SingularMatrixError: If no pivot can be found in some column.
    """
    size = _check_square(matrix)
    if len(rhs) != size:
        raise ValueError("right-hand side length does not match the matrix")
    aug = [
        [Fraction(v) for v in row] + [Fraction(b)]
        for row, b in zip(matrix, rhs, strict=True)
    ]
    for col in range(size):
        pivot = next((r for r in range(col, size) if aug[r][col] != 0), None)
        if pivot is None:
            raise SingularMatrixError(f"matrix is singular (column {col})")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        lead = aug[col][col]
        aug[col] = [v / lead for v in aug[col]]
        for r in range(size):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col], strict=True)]
    return [row[-1] for row in aug]
