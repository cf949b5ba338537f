"""Test exact determinant, adjugate and solve."""

from fractions import Fraction

import pytest

from twisted_zeta.linalg import (
    SingularMatrixError,
    adjugate,
    determinant,
    mat_vec,
    solve,
    transpose,
    vec_mat,
)


@pytest.mark.parametrize(
    ("matrix", "expected"),
    [
        (((5,),), 5),
        (((7, 63), (31, 1023)), 5208),
        (((0, 1), (1, 0)), -1),
        (((2, 0, 1), (1, 3, 2), (1, 1, 2)), 6),
        (((1, 2), (2, 4)), 0),
    ],
)
def test_determinant(matrix, expected):
    """Test Bareiss elimination, including a pivot swap and a singular case."""
    assert determinant(matrix) == expected


def test_adjugate_identity():
    """Test adj(M) M = M adj(M) = det(M) I."""
    matrix = ((3, 7, 1), (2, 15, 63), (9, 31, 255))
    det = determinant(matrix)
    adj = adjugate(matrix)
    for k in range(3):
        column = tuple(row[k] for row in adj)
        expected = tuple(det if r == k else 0 for r in range(3))
        assert mat_vec(matrix, column) == expected
        assert vec_mat(adj[k], matrix) == expected


def test_adjugate_one_by_one():
    """Test the 1x1 adjugate is (1)."""
    assert adjugate(((9,),)) == ((1,),)


def test_transpose():
    """Test rows become columns."""
    assert transpose(((1, 2), (3, 4))) == ((1, 3), (2, 4))


def test_solve():
    """Test Gauss-Jordan over the rationals."""
    x = solve([[2, 1], [1, 3]], [3, 5])
    assert x == [Fraction(4, 5), Fraction(7, 5)]


def test_solve_needs_pivot_swap():
    """Test a zero leading entry is handled by row exchange."""
    assert solve([[0, 1], [1, 0]], [2, 3]) == [3, 2]


def test_solve_singular():
    """Test singular systems raise."""
    with pytest.raises(SingularMatrixError):
        solve([[1, 2], [2, 4]], [1, 2])


def test_non_square_rejected():
    """Test shape validation."""
    with pytest.raises(ValueError, match="square"):
        determinant(((1, 2),))
    with pytest.raises(ValueError, match="length"):
        solve([[1]], [1, 2])
