import itertools
import random

import numpy as np
import pytest

from qcot.errors import UsageError
from qcot.exactla import FpMatrix, invert, rank, reduce as echelon


def brute_rank(mat: FpMatrix) -> int:
    """Independent oracle: largest k with a k x k submatrix of nonzero determinant,
    determinants expanded over permutations.  Only sane for sizes <= 5."""

    def det(rows, cols):
        n = len(rows)
        total = 0
        for perm in itertools.permutations(range(n)):
            sign = 1
            seen = list(perm)
            for i in range(n):
                for j in range(i + 1, n):
                    if seen[i] > seen[j]:
                        sign = -sign
            term = sign
            for i in range(n):
                term *= int(mat.a[rows[i], cols[perm[i]]])
            total += term
        return total % mat.p

    best = 0
    for k in range(1, min(mat.rows, mat.cols) + 1):
        for rows in itertools.combinations(range(mat.rows), k):
            for cols in itertools.combinations(range(mat.cols), k):
                if det(rows, cols) != 0:
                    best = k
                    break
            else:
                continue
            break
    return best


def test_identity_rank():
    m = FpMatrix.identity(2, 2)
    rep = echelon(m)
    assert rep.rank == 2
    assert rep.kernel_basis().cols == 0


def test_zero_matrix():
    m = FpMatrix.zeros(3, 3, 4)
    rep = echelon(m)
    assert rep.rank == 0
    assert rep.kernel_basis().cols == 4


def test_rank_matches_minor_oracle():
    rng = random.Random(7)
    for _ in range(40):
        m = FpMatrix(2, [[rng.randrange(2) for _ in range(5)] for _ in range(5)])
        assert rank(m) == brute_rank(m)
    for _ in range(15):
        m = FpMatrix(3, [[rng.randrange(3) for _ in range(4)] for _ in range(4)])
        assert rank(m) == brute_rank(m)


def test_rref_idempotent():
    rng = random.Random(3)
    for _ in range(25):
        m = FpMatrix(5, [[rng.randrange(5) for _ in range(4)] for _ in range(6)])
        rep = echelon(m)
        again = echelon(rep.rref)
        assert again.rref == rep.rref
        assert again.rank == rep.rank


def test_rank_transpose():
    rng = random.Random(11)
    for _ in range(25):
        m = FpMatrix(3, [[rng.randrange(3) for _ in range(5)] for _ in range(3)])
        assert rank(m) == rank(m.transpose())


def test_solve_round_trip():
    rng = random.Random(5)
    for _ in range(30):
        m = FpMatrix(2, [[rng.randrange(2) for _ in range(4)] for _ in range(5)])
        x = FpMatrix(2, [[rng.randrange(2)] for _ in range(4)])
        b = m @ x
        rep = echelon(m)
        sol = rep.solve(b)
        assert sol is not None
        assert m @ sol == b


def test_solve_signals_no_solution():
    m = FpMatrix(2, [[1, 0], [0, 0]])
    rep = echelon(m)
    assert rep.solve(FpMatrix.column(2, [0, 1])) is None
    assert rep.solve(FpMatrix.column(2, [1, 0])) is not None


def test_kernel_vectors_annihilate():
    rng = random.Random(13)
    for _ in range(20):
        m = FpMatrix(3, [[rng.randrange(3) for _ in range(5)] for _ in range(3)])
        rep = echelon(m)
        ker = rep.kernel_basis()
        assert (m @ ker).is_zero()
        assert rep.rank + ker.cols == m.cols


def test_image_basis_spans_products():
    m = FpMatrix(2, [[1, 1, 0], [0, 0, 0], [1, 1, 1]])
    rep = echelon(m)
    img = rep.image_basis()
    assert img.cols == rep.rank
    for j in range(m.cols):
        col = m.column_at(j)
        assert echelon(img).solve(col) is not None


def test_modulus_mismatch_raises():
    a = FpMatrix.identity(2, 2)
    b = FpMatrix.identity(3, 2)
    with pytest.raises(UsageError):
        _ = a @ b
    with pytest.raises(UsageError):
        _ = a + b


def test_non_prime_modulus_rejected():
    with pytest.raises(UsageError):
        FpMatrix(4, [[1]])


def test_invert():
    m = FpMatrix(2, [[1, 1], [0, 1]])
    inv = invert(m)
    assert inv is not None
    assert inv @ m == FpMatrix.identity(2, 2)
    assert invert(FpMatrix.zeros(2, 2, 2)) is None
