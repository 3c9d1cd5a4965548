import numpy as np
import pytest

from queerkit import linalg as la
from queerkit.gf import Field


def rand_mat(F, rng, n, m):
    return la.from_encoded(F, rng.integers(0, F.q, size=(n, m)))


def test_encoding_roundtrip():
    F = Field(3, 3)
    rng = np.random.default_rng(0)
    enc = rng.integers(0, F.q, size=(4, 5))
    assert np.array_equal(la.to_encoded(F, la.from_encoded(F, enc)), enc)


def test_matmul_against_prime_field_reference():
    # for k = 1 the slice product must agree with plain mod-p numpy
    F = Field(5)
    rng = np.random.default_rng(1)
    a = rng.integers(0, 5, size=(7, 4))
    b = rng.integers(0, 5, size=(4, 6))
    got = la.to_encoded(F, la.matmul(F, la.from_encoded(F, a), la.from_encoded(F, b)))
    assert np.array_equal(got, (a @ b) % 5)


def test_matmul_associative_distributive():
    F = Field(3, 2)
    rng = np.random.default_rng(2)
    for _ in range(20):
        A = rand_mat(F, rng, 5, 4)
        B = rand_mat(F, rng, 4, 6)
        C = rand_mat(F, rng, 6, 3)
        lhs = la.matmul(F, la.matmul(F, A, B), C)
        rhs = la.matmul(F, A, la.matmul(F, B, C))
        assert np.array_equal(lhs, rhs)
        D = rand_mat(F, rng, 4, 6)
        assert np.array_equal(
            la.matmul(F, A, la.add(F, B, D)),
            la.add(F, la.matmul(F, A, B), la.matmul(F, A, D)),
        )


def test_scale_matches_scalar_mat():
    F = Field(3, 3)
    rng = np.random.default_rng(3)
    A = rand_mat(F, rng, 4, 4)
    for s in [0, 1, 2, 5, 11]:
        s %= F.q
        want = la.matmul(F, la.scalar_mat(F, 4, s), A)
        assert np.array_equal(la.scale(F, A, s), want)


def test_rref_solve_inverse():
    F = Field(3, 2)
    rng = np.random.default_rng(4)
    for _ in range(20):
        A = rand_mat(F, rng, 5, 5)
        R, piv = la.rref(F, A.copy())
        # pivots are unit columns
        for i, c in enumerate(piv):
            col = la.to_encoded(F, R[:, :, c])
            want = np.zeros(5, dtype=np.int64)
            want[i] = 1
            assert np.array_equal(col, want)
        if len(piv) == 5:
            Ainv = la.inv(F, A)
            assert np.array_equal(la.matmul(F, Ainv, A), la.eye(F, 5))
            b = rand_mat(F, rng, 5, 1)
            x = la.solve(F, A, b)
            assert np.array_equal(la.matmul(F, A, x), b)


def test_kernel_rank_nullity():
    F = Field(3, 2)
    rng = np.random.default_rng(5)
    for _ in range(20):
        n, m = int(rng.integers(2, 7)), int(rng.integers(2, 7))
        A = rand_mat(F, rng, n, m)
        K = la.kernel(F, A)
        assert la.rank(F, A) + K.shape[2] == m
        if K.shape[2]:
            assert la.is_zero(la.matmul(F, A, K))
        # kernel columns are linearly independent
        assert la.rank(F, K) == K.shape[2]


def test_solve_inconsistent_returns_none():
    F = Field(3)
    A = la.from_encoded(F, np.array([[1, 0], [1, 0]]))
    b = la.from_encoded(F, np.array([[1], [2]]))
    assert la.solve(F, A, b) is None


def test_matpow():
    F = Field(3, 2)
    rng = np.random.default_rng(6)
    A = rand_mat(F, rng, 4, 4)
    P = la.eye(F, 4)
    for e in range(6):
        assert np.array_equal(la.matpow(F, A, e), P)
        P = la.matmul(F, P, A)


def test_charpoly_diagonal_and_companion():
    F = Field(3, 2)
    d = [2, 5, 7]
    A = la.zeros(F, 3, 3)
    for i, v in enumerate(d):
        A[:, i, i] = F._digits[v]
    cp = la.charpoly(F, A)
    want = [1]
    for v in d:
        want = F.poly_mul(want, [F.neg(v), 1])
    assert cp == want

    # companion matrix of x^3 + 2x + 1 over F_3
    F3 = Field(3)
    f = [1, 2, 0, 1]
    C = la.zeros(F3, 3, 3)
    for i in range(2):
        C[0, i + 1, i] = 1
    for i in range(3):
        C[0, i, 2] = (-f[i]) % 3
    assert la.charpoly(F3, C) == f


def test_minpoly_vector():
    F = Field(3)
    A = la.eye(F, 4)
    v = la.from_encoded(F, np.array([[1], [2], [0], [1]]))[:, :, 0]
    assert la.minpoly_vector(F, A, v) == [2, 1]  # x - 1
    # nilpotent Jordan block: minpoly from e_1 is x^n relative to last basis vec
    N = la.zeros(F, 3, 3)
    N[0, 0, 1] = 1
    N[0, 1, 2] = 1
    e3 = la.zeros(F, 3, 1)[:, :, 0]
    e3[0, 2] = 1
    assert la.minpoly_vector(F, N, e3) == [0, 0, 0, 1]


def test_poly_apply():
    F = Field(3, 2)
    rng = np.random.default_rng(8)
    A = rand_mat(F, rng, 4, 4)
    cp = la.charpoly(F, A)
    # Cayley-Hamilton
    assert la.is_zero(la.poly_apply(F, cp, A))


def test_column_space_basis():
    F = Field(3)
    A = la.from_encoded(F, np.array([[1, 2, 0], [2, 1, 0], [0, 0, 0]]))
    B = la.column_space_basis(F, A)
    assert B.shape[2] == la.rank(F, A)
    # every original column solves against the basis
    assert la.solve(F, B, A) is not None


class TestEchelon:
    def test_rank_matches_one_shot(self):
        rng = np.random.default_rng(11)
        for F in (Field(3), Field(3, 2), Field(5)):
            for _ in range(6):
                n, m = int(rng.integers(5, 40)), int(rng.integers(1, 60))
                A = rand_mat(F, rng, n, m)
                ech = la.Echelon(F, n)
                # split the columns into uneven batches
                cut = int(rng.integers(0, m + 1))
                ech.insert(np.ascontiguousarray(A[:, :, :cut]), chunk=7)
                ech.insert(np.ascontiguousarray(A[:, :, cut:]), chunk=7)
                assert ech.rank == la.rank(F, A)
                # the maintained basis spans the same column space
                assert la.solve(F, ech.columns(), A) is not None
                if ech.rank:
                    assert la.solve(F, A, ech.columns()) is not None

    def test_membership(self):
        F = Field(3, 2)
        rng = np.random.default_rng(12)
        A = rand_mat(F, rng, 10, 4)
        ech = la.Echelon(F, 10)
        ech.insert(A)
        combo = la.matmul(F, A, rand_mat(F, rng, 4, 1))
        assert ech.contains(combo)
        if ech.rank < 10:
            # a standard vector outside the span exists; find one
            outside = None
            for t in range(10):
                e = la.zeros(F, 10, 1)
                e[0, t, 0] = 1
                if not ech.contains(e):
                    outside = e
                    break
            assert outside is not None

    def test_reduce_kills_span_exactly(self):
        F = Field(5)
        rng = np.random.default_rng(13)
        A = rand_mat(F, rng, 12, 7)
        ech = la.Echelon(F, 12)
        ech.insert(A)
        assert la.is_zero(ech.reduce(la.matmul(F, A, rand_mat(F, rng, 7, 3))))
