"""Exact dense linear algebra over a prime field F_p.

Matrices are immutable, entries are stored reduced mod p, and every
operation is a pure function, so values can be shared freely.
"""

from __future__ import annotations

from typing import Iterable, Optional

import numpy as np

from .errors import UsageError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class FpMatrix:
    """Dense matrix over F_p.  Row-major, entries always in [0, p)."""

    __slots__ = ("p", "a")

    def __init__(self, p: int, data):
        if not is_prime(p):
            raise UsageError(f"modulus {p} is not prime")
        a = np.array(data, dtype=np.int64)
        if a.ndim != 2:
            a = a.reshape(a.shape[0], -1) if a.size else a.reshape(0, 0)
        self.p = p
        self.a = a % p
        self.a.setflags(write=False)

    # -- construction helpers ------------------------------------------------

    @staticmethod
    def zeros(p: int, rows: int, cols: int) -> "FpMatrix":
        return FpMatrix(p, np.zeros((rows, cols), dtype=np.int64))

    @staticmethod
    def identity(p: int, n: int) -> "FpMatrix":
        return FpMatrix(p, np.eye(n, dtype=np.int64))

    @staticmethod
    def from_rows(p: int, rows: Iterable[Iterable[int]], cols: Optional[int] = None) -> "FpMatrix":
        rows = [list(r) for r in rows]
        if not rows:
            return FpMatrix.zeros(p, 0, 0 if cols is None else cols)
        return FpMatrix(p, np.array(rows, dtype=np.int64))

    @staticmethod
    def column(p: int, entries: Iterable[int]) -> "FpMatrix":
        v = np.array(list(entries), dtype=np.int64).reshape(-1, 1)
        return FpMatrix(p, v)

    # -- basic queries -------------------------------------------------------

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    def entries(self) -> tuple:
        return tuple(int(x) for x in self.a.reshape(-1))

    def is_zero(self) -> bool:
        return self.a.size == 0 or not self.a.any()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FpMatrix)
            and self.p == other.p
            and self.a.shape == other.a.shape
            and bool((self.a == other.a).all())
        )

    def __hash__(self):
        return hash((self.p, self.a.shape, self.entries()))

    def __repr__(self):
        return f"FpMatrix(p={self.p}, {self.rows}x{self.cols})"

    def _check(self, other: "FpMatrix") -> None:
        if self.p != other.p:
            raise UsageError(f"modulus mismatch: {self.p} vs {other.p}")

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "FpMatrix") -> "FpMatrix":
        self._check(other)
        return FpMatrix(self.p, self.a + other.a)

    def __sub__(self, other: "FpMatrix") -> "FpMatrix":
        self._check(other)
        return FpMatrix(self.p, self.a - other.a)

    def __neg__(self) -> "FpMatrix":
        return FpMatrix(self.p, -self.a)

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        self._check(other)
        if self.cols != other.rows:
            raise UsageError(f"shape mismatch: {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        if self.cols == 0:
            return FpMatrix.zeros(self.p, self.rows, other.cols)
        return FpMatrix(self.p, (self.a @ other.a) % self.p)

    def scale(self, c: int) -> "FpMatrix":
        return FpMatrix(self.p, self.a * (c % self.p))

    def transpose(self) -> "FpMatrix":
        return FpMatrix(self.p, self.a.T)

    def column_at(self, j: int) -> "FpMatrix":
        return FpMatrix(self.p, self.a[:, j : j + 1])


def hstack(mats: list[FpMatrix]) -> FpMatrix:
    p = mats[0].p
    rows = mats[0].rows
    return FpMatrix(p, np.hstack([m.a for m in mats]) if mats else np.zeros((rows, 0), dtype=np.int64))


def vstack(mats: list[FpMatrix]) -> FpMatrix:
    p = mats[0].p
    return FpMatrix(p, np.vstack([m.a for m in mats]))


def block_diag(p: int, mats: list[FpMatrix]) -> FpMatrix:
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for m in mats:
        out[r : r + m.rows, c : c + m.cols] = m.a
        r += m.rows
        c += m.cols
    return FpMatrix(p, out)


def _inv_mod(x: int, p: int) -> int:
    return pow(int(x), p - 2, p)


class EchelonReport:
    """Row reduction of a matrix: rank, RREF, kernel/image bases and a solver.

    The transform matrix E with E @ m == rref is kept so that solving
    m @ x = b costs one matrix-vector product plus back-substitution.
    """

    __slots__ = ("matrix", "rref", "transform", "pivots", "rank", "p")

    def __init__(self, matrix: FpMatrix):
        self.matrix = matrix
        p = matrix.p
        self.p = p
        m = matrix.a.copy()
        e = np.eye(matrix.rows, dtype=np.int64)
        pivots: list[int] = []
        row = 0
        for col in range(matrix.cols):
            if row >= m.shape[0]:
                break
            nz = np.nonzero(m[row:, col])[0]
            if nz.size == 0:
                continue
            piv = row + int(nz[0])
            if piv != row:
                m[[row, piv]] = m[[piv, row]]
                e[[row, piv]] = e[[piv, row]]
            inv = _inv_mod(m[row, col], p)
            m[row] = (m[row] * inv) % p
            e[row] = (e[row] * inv) % p
            others = np.nonzero(m[:, col])[0]
            for r in others:
                if r != row:
                    f = m[r, col]
                    m[r] = (m[r] - f * m[row]) % p
                    e[r] = (e[r] - f * e[row]) % p
            pivots.append(col)
            row += 1
        self.rref = FpMatrix(p, m)
        self.transform = FpMatrix(p, e)
        self.pivots = tuple(pivots)
        self.rank = len(pivots)

    def kernel_basis(self) -> FpMatrix:
        """Matrix whose columns span the null space of the original matrix."""
        n = self.matrix.cols
        free = [j for j in range(n) if j not in self.pivots]
        out = np.zeros((n, len(free)), dtype=np.int64)
        r = self.rref.a
        for k, j in enumerate(free):
            out[j, k] = 1
            for i, pv in enumerate(self.pivots):
                out[pv, k] = (-r[i, j]) % self.p
        return FpMatrix(self.p, out)

    def image_basis(self) -> FpMatrix:
        """Matrix whose columns (pivot columns of the original) span the column space."""
        cols = [self.matrix.a[:, j] for j in self.pivots]
        if not cols:
            return FpMatrix.zeros(self.p, self.matrix.rows, 0)
        return FpMatrix(self.p, np.stack(cols, axis=1))

    def solve(self, b: FpMatrix) -> Optional[FpMatrix]:
        """A particular solution x of m @ x = b, or None if b is not in the image."""
        if b.rows != self.matrix.rows:
            raise UsageError("right-hand side has wrong length")
        if b.p != self.p:
            raise UsageError(f"modulus mismatch: {self.p} vs {b.p}")
        y = (self.transform.a @ b.a) % self.p
        x = np.zeros((self.matrix.cols, b.cols), dtype=np.int64)
        for i, pv in enumerate(self.pivots):
            x[pv] = y[i]
        if ((self.matrix.a @ x - b.a) % self.p).any():
            return None
        return FpMatrix(self.p, x)

    def nullity(self) -> int:
        return self.matrix.cols - self.rank


def reduce(m: FpMatrix) -> EchelonReport:
    return EchelonReport(m)


def rank(m: FpMatrix) -> int:
    return EchelonReport(m).rank


def kernel(m: FpMatrix) -> FpMatrix:
    return EchelonReport(m).kernel_basis()


def solve(m: FpMatrix, b: FpMatrix) -> Optional[FpMatrix]:
    return EchelonReport(m).solve(b)


def invert(m: FpMatrix) -> Optional[FpMatrix]:
    """Inverse of a square matrix, or None if singular."""
    if m.rows != m.cols:
        return None
    rep = EchelonReport(m)
    if rep.rank != m.rows:
        return None
    return rep.transform


def is_invertible(m: FpMatrix) -> bool:
    return m.rows == m.cols and EchelonReport(m).rank == m.rows


def span_basis(vectors: list[FpMatrix]) -> FpMatrix:
    """Column basis for the span of the given column vectors."""
    if not vectors:
        raise UsageError("span_basis needs at least one vector for the ambient size")
    stacked = hstack(vectors)
    return EchelonReport(stacked).image_basis()


def subspace_dim(vectors: list[FpMatrix], ambient_rows: int, p: int) -> int:
    if not vectors:
        return 0
    return EchelonReport(hstack(vectors)).rank
