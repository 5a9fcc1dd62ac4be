"""Dense matrices over Q: fraction-free rank, determinants and linear solves."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import lcm
from typing import Sequence

from gmpy2 import mpz

from .rational import Q, to_q, format_q


@dataclass(frozen=True)
class QMatrix:
    rows: int
    cols: int
    entries: tuple[tuple, ...] = field(repr=False)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "QMatrix":
        rows = [tuple(to_q(v) for v in r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        return cls(len(rows), ncols, tuple(rows))

    @classmethod
    def zeros(cls, r: int, c: int) -> "QMatrix":
        return cls(r, c, tuple(tuple(Q(0) for _ in range(c)) for _ in range(r)))

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple:
        return self.entries[i]

    def transpose(self) -> "QMatrix":
        return QMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else ())

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "QMatrix":
        return QMatrix.from_rows([[self.entries[i][j] for j in cols] for i in rows])

    def rank(self) -> int:
        return qmatrix_rank(self)

    def pivot_columns(self) -> list[int]:
        return echelon_pivots(self.entries, self.cols)

    def pivot_rows(self) -> list[int]:
        return echelon_pivots(self.transpose().entries, self.rows)

    def to_text(self) -> str:
        return "\n".join(" ".join(format_q(v) for v in r) for r in self.entries)


def _integer_rows(rows: Sequence[Sequence]) -> list[list[mpz]]:
    out = []
    for r in rows:
        r = [to_q(v) for v in r]
        m = lcm(*(int(v.denominator) for v in r)) if r else 1
        out.append([mpz(v.numerator) * (m // int(v.denominator)) for v in r])
    return out


def bareiss_echelon(rows: Sequence[Sequence], ncols: int) -> tuple[int, list[int], list[list[mpz]]]:
    """Fraction-free elimination with column-order pivot search.

    Returns (rank, pivot columns, reduced integer rows).  Rows are scaled to
    integers first; rank is invariant under that scaling.
    """
    a = _integer_rows(rows)
    n = len(a)
    prev = mpz(1)
    r = 0
    pivots = []
    for c in range(ncols):
        p = next((i for i in range(r, n) if a[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        for i in range(r + 1, n):
            f = a[i][c]
            row_i = a[i]
            row_r = a[r]
            for j in range(c + 1, ncols):
                row_i[j] = (piv * row_i[j] - f * row_r[j]) // prev
            row_i[c] = mpz(0)
        prev = piv
        pivots.append(c)
        r += 1
        if r == n:
            break
    return r, pivots, a


def qmatrix_rank(M: QMatrix) -> int:
    if M.rows == 0 or M.cols == 0:
        return 0
    return bareiss_echelon(M.entries, M.cols)[0]


def echelon_pivots(rows, ncols) -> list[int]:
    """Lexicographically first maximal set of independent columns."""
    if not rows:
        return []
    return bareiss_echelon(rows, ncols)[1]


def determinant(M: QMatrix):
    if M.rows != M.cols:
        raise ValueError("determinant of a non-square matrix")
    n = M.rows
    if n == 0:
        return Q(1)
    scales = []
    for r in M.entries:
        scales.append(lcm(*(int(to_q(v).denominator) for v in r)))
    a = _integer_rows(M.entries)
    sign = 1
    prev = mpz(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            p = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if p is None:
                return Q(0)
            a[k], a[p] = a[p], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) // prev
            a[i][k] = mpz(0)
        prev = a[k][k]
    denom = 1
    for s in scales:
        denom *= s
    return Q(sign * a[n - 1][n - 1], denom)


def solve(M: QMatrix, rhs: Sequence[Sequence]) -> list[list]:
    """Solve M X = B for square nonsingular M; ``rhs`` is a list of columns."""
    n = M.rows
    if n != M.cols:
        raise ValueError("solve needs a square matrix")
    aug = [list(M.entries[i]) + [to_q(col[i]) for col in rhs] for i in range(n)]
    width = n + len(rhs)
    for c in range(n):
        p = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        aug[c], aug[p] = aug[p], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [v * inv for v in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [vi - f * vc for vi, vc in zip(aug[i], aug[c])]
    return [[aug[i][n + k] for i in range(n)] for k in range(width - n)]


def rref(rows: Sequence[Sequence]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form over Q (field arithmetic, for small systems)."""
    a = [[to_q(v) for v in r] for r in rows]
    if not a:
        return a, []
    ncols = len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [vi - f * vr for vi, vr in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a, pivots
