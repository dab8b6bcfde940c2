"""Dense exact matrices over Fraction, as lists of rows."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


class SingularMatrixError(ArithmeticError):
    def __init__(self, column: int):
        super().__init__(f"matrix is singular (no pivot in column {column})")
        self.column = column


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Matrix:
    if a and len(a[0]) != len(b):
        raise ValueError("shape mismatch")
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [Fraction(0)] * cols
        for k, x in enumerate(row):
            if x:
                for j, y in enumerate(b[k]):
                    if y:
                        acc[j] += x * y
        out.append(acc)
    return out


def matvec(a: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> list[Fraction]:
    return [sum((x * y for x, y in zip(row, v) if x and y), Fraction(0)) for row in a]


def invert(a: Sequence[Sequence[Fraction]]) -> Matrix:
    """Gauss-Jordan inverse. Raises :class:`SingularMatrixError`."""
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix is not square")
    work = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col]), None)
        if pivot is None:
            raise SingularMatrixError(col)
        work[col], work[pivot] = work[pivot], work[col]
        p = work[col][col]
        if p != 1:
            work[col] = [x / p for x in work[col]]
        prow = work[col]
        for r in range(n):
            f = work[r][col]
            if r != col and f:
                row = work[r]
                for j in range(col, 2 * n):
                    if prow[j]:
                        row[j] -= f * prow[j]
    return [row[n:] for row in work]


def rank(a: Sequence[Sequence[Fraction]]) -> int:
    work = [[Fraction(x) for x in row] for row in a]
    if not work:
        return 0
    r = 0
    for col in range(len(work[0])):
        pivot = next((i for i in range(r, len(work)) if work[i][col]), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        for i in range(r + 1, len(work)):
            f = work[i][col] / work[r][col]
            if f:
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        r += 1
    return r
