"""Small exact linear algebra over :class:`fractions.Fraction`.

Everything combinatorial in this package (vertices, signs, cone
coordinates) is decided in exact arithmetic, so the handful of k x k
solves we need are done here by plain Gaussian elimination.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Vector = tuple[Fraction, ...]


class SingularMatrixError(ValueError):
    pass


def to_fraction(value) -> Fraction:
    """Exact rational from an int, Fraction, float or a ``"p/q"`` string.

    Floats are taken at their exact binary value.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, (int, float)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction("".join(value.split()))
    raise TypeError(f"cannot interpret {value!r} as a rational number")


def sign(x) -> int:
    return (x > 0) - (x < 0)


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def det(rows: Sequence[Sequence]) -> Fraction:
    m = [[Fraction(x) for x in row] for row in rows]
    n = len(m)
    if n == 0:
        return Fraction(1)
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            result = -result
        p = m[col][col]
        result *= p
        for r in range(col + 1, n):
            if m[r][col] != 0:
                factor = m[r][col] / p
                for c in range(col, n):
                    m[r][c] -= factor * m[col][c]
    return result


def solve(rows: Sequence[Sequence], rhs: Sequence) -> Vector:
    """Solve ``rows @ x = rhs`` exactly; raises SingularMatrixError."""
    n = len(rows)
    m = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            raise SingularMatrixError("singular system")
        m[col], m[pivot] = m[pivot], m[col]
        p = m[col][col]
        for r in range(n):
            if r != col and m[r][col] != 0:
                factor = m[r][col] / p
                for c in range(col, n + 1):
                    m[r][c] -= factor * m[col][c]
    return tuple(m[i][n] / m[i][i] for i in range(n))


def kernel_vector(rows: Sequence[Sequence], dim: int) -> Vector:
    """A nonzero vector annihilated by ``dim - 1`` independent rows.

    Generalized cross product: component i is the signed minor with
    column i removed. Zero vector iff the rows are dependent.
    """
    if len(rows) != dim - 1:
        raise ValueError("need exactly dim - 1 rows")
    out = []
    for i in range(dim):
        minor = [[row[c] for c in range(dim) if c != i] for row in rows]
        out.append((-1) ** i * det(minor))
    return tuple(out)
