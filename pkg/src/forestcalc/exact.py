"""Exact rational linear algebra via fraction-free Gaussian elimination.

Bareiss one-step elimination keeps every intermediate an integer when the
input is integer, and every division it performs is exact, so determinants
and inverses of matrices like I + tau*L stay exact even for astronomically
large tau.
"""

from __future__ import annotations

from fractions import Fraction


Matrix = list[list[Fraction]]


def _copy(matrix) -> Matrix:
    return [[Fraction(x) for x in row] for row in matrix]


def identity(n: int) -> Matrix:
    return [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]


def determinant(matrix) -> Fraction:
    """Determinant by Bareiss fraction-free elimination."""
    a = _copy(matrix)
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix must be square")
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot_row = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if pivot_row is None:
                return Fraction(0)
            a[k], a[pivot_row] = a[pivot_row], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
            a[i][k] = Fraction(0)
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def solve(matrix, rhs) -> Matrix:
    """Exact solution X of A X = B for a nonsingular A.

    Forward elimination is fraction-free (Bareiss); back substitution divides
    by the final pivots, which is where the rationals appear.
    """
    a = _copy(matrix)
    n = len(a)
    b = _copy(rhs)
    if len(b) != n:
        raise ValueError("right-hand side has wrong height")
    width = len(b[0])
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot_row = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if pivot_row is None:
                raise ZeroDivisionError("matrix is singular")
            a[k], a[pivot_row] = a[pivot_row], a[k]
            b[k], b[pivot_row] = b[pivot_row], b[k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
            for j in range(width):
                b[i][j] = (b[i][j] * a[k][k] - a[i][k] * b[k][j]) / prev
            a[i][k] = Fraction(0)
        prev = a[k][k]
    if a[n - 1][n - 1] == 0:
        raise ZeroDivisionError("matrix is singular")
    x = [[Fraction(0)] * width for _ in range(n)]
    for i in range(n - 1, -1, -1):
        for j in range(width):
            acc = b[i][j]
            for r in range(i + 1, n):
                acc -= a[i][r] * x[r][j]
            x[i][j] = acc / a[i][i]
    return x


def inverse(matrix) -> Matrix:
    return solve(matrix, identity(len(matrix)))


def adjugate(matrix) -> Matrix:
    """adj(A) = det(A) * A^{-1}; requires a nonsingular A."""
    det = determinant(matrix)
    if det == 0:
        raise ZeroDivisionError("adjugate via inverse needs a nonsingular matrix")
    inv = inverse(matrix)
    return [[det * x for x in row] for row in inv]
