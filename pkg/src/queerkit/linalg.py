"""Exact dense linear algebra over GF(p^k), coefficient-slice layout.

A matrix over GF(p^k) is an int64 ndarray of shape (k, n, m): slice t
holds, for every entry, the coefficient of the t-th power of the field
generator, reduced mod p.  Vectors are (k, n).  This layout lets matrix
products run as k^2 BLAS GEMMs on small nonnegative integers (exact in
float arithmetic), with a final polynomial reduction of the high slices.

Everything here takes the owning :class:`queerkit.gf.Field` as its first
argument and never mutates its inputs unless documented.
"""

from __future__ import annotations

import itertools

import numpy as np

from .gf import Field

_F32_EXACT = 1 << 24  # float32 integers are exact strictly below this


# -- constructors and encoding bridges -----------------------------------


def zeros(F: Field, n: int, m: int):
    return np.zeros((F.k, n, m), dtype=np.int64)


def eye(F: Field, n: int):
    out = zeros(F, n, n)
    out[0] = np.eye(n, dtype=np.int64)
    return out


def from_encoded(F: Field, enc):
    """(n, m) array of element encodings -> slice layout."""
    enc = np.asarray(enc, dtype=np.int64)
    return np.moveaxis(F._digits[enc], -1, 0).copy()

def to_encoded(F: Field, A):
    """Slice layout -> array of element encodings (shape minus slice axis)."""
    return np.tensordot(F._pows, A, axes=(0, 0))


def scalar_mat(F: Field, n: int, s: int):
    out = zeros(F, n, n)
    d = F._digits[s]
    for t in range(F.k):
        out[t] = np.eye(n, dtype=np.int64) * int(d[t])
    return out


def is_zero(A) -> bool:
    return not A.any()


# -- arithmetic -----------------------------------------------------------


def add(F: Field, A, B):
    return (A + B) % F.p


def sub(F: Field, A, B):
    return (A - B) % F.p


def neg(F: Field, A):
    return (-A) % F.p


def _reduce_slices(F: Field, buf):
    """(2k-1, ...) coefficient buffer -> reduced (k, ...) slices."""
    k = F.k
    out = buf[:k] % F.p
    for t in range(k, buf.shape[0]):
        bt = buf[t]
        if bt.any():
            red = F._red_rows[t - k]
            out = (out + red.reshape((k,) + (1,) * bt.ndim) * bt[None, ...]) % F.p
    return out


def scale(F: Field, A, s: int):
    """Multiply every entry by the scalar with encoding s."""
    if s == 0:
        return np.zeros_like(A)
    d = F._digits[s]
    k = F.k
    buf = np.zeros((2 * k - 1,) + A.shape[1:], dtype=np.int64)
    for i in range(k):
        if d[i]:
            buf[i : i + k] += int(d[i]) * A
    return _reduce_slices(F, buf)


def matmul(F: Field, A, B):
    k, p = F.k, F.p
    n, inner = A.shape[1], A.shape[2]
    m = B.shape[2]
    dt = np.float32 if (p - 1) ** 2 * max(inner, 1) < _F32_EXACT else np.float64
    Af = A.astype(dt)
    Bf = B.astype(dt)
    buf = np.zeros((2 * k - 1, n, m), dtype=np.int64)
    for i in range(k):
        for j in range(k):
            prod = Af[i] @ Bf[j]
            buf[i + j] += np.rint(prod).astype(np.int64)
    return _reduce_slices(F, buf)


def matvec(F: Field, A, v):
    return matmul(F, A, v[:, :, None])[:, :, 0]


def matpow(F: Field, A, e: int):
    n = A.shape[1]
    out = eye(F, n)
    base = A
    while e:
        if e & 1:
            out = matmul(F, out, base)
        base = matmul(F, base, base)
        e >>= 1
    return out


def _outer_polymul(F: Field, fd, pr):
    """fd (k, r) x pr (k, m) -> reduced (k, r, m) entrywise field products."""
    k = F.k
    buf = np.zeros((2 * k - 1, fd.shape[1], pr.shape[1]), dtype=np.int64)
    for i in range(k):
        fi = fd[i]
        if not fi.any():
            continue
        for j in range(k):
            pj = pr[j]
            if pj.any():
                buf[i + j] += fi[:, None] * pj[None, :]
    return _reduce_slices(F, buf)


# -- elimination ----------------------------------------------------------


def rref(F: Field, A):
    """Reduced row echelon form; returns (R, pivot_columns)."""
    A = A % F.p
    k, n, m = A.shape
    pows = F._pows
    piv = []
    r = 0
    for c in range(m):
        if r == n:
            break
        colpart = A[:, r:, c]
        nz = np.flatnonzero(colpart.any(axis=0))
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[:, [r, i], :] = A[:, [i, r], :]
        pivot = int(pows @ A[:, r, c])
        if pivot != 1:
            s = F.inv(pivot)
            A[:, r, :] = scale(F, A[:, r, :][:, None, :], s)[:, 0, :]
        colenc = pows @ A[:, :, c]
        rows = np.flatnonzero(colenc)
        rows = rows[rows != r]
        if rows.size:
            fd = A[:, rows, c].copy()
            contrib = _outer_polymul(F, fd, A[:, r, :])
            A[:, rows, :] = (A[:, rows, :] - contrib) % F.p
        piv.append(c)
        r += 1
    return A, piv


def rank(F: Field, A) -> int:
    return len(rref(F, A.copy())[1])


def kernel(F: Field, A):
    """Right kernel basis as columns: (k, m, dim); echelonized, deterministic."""
    R, piv = rref(F, A.copy())
    m = A.shape[2]
    free = [c for c in range(m) if c not in piv]
    out = zeros(F, m, len(free))
    for j, fc in enumerate(free):
        out[0, fc, j] = 1
        for i, pc in enumerate(piv):
            out[:, pc, j] = (-R[:, i, fc]) % F.p
    return out


def solve(F: Field, A, B):
    """X with A X = B, or None.  Free variables are set to zero."""
    single = B.ndim == 2
    if single:
        B = B[:, :, None]
    nA = A.shape[2]
    R, piv = rref(F, np.concatenate([A, B], axis=2))
    if any(c >= nA for c in piv):
        return None
    X = zeros(F, nA, B.shape[2])
    for i, c in enumerate(piv):
        X[:, c, :] = R[:, i, nA:]
    return X[:, :, 0] if single else X


def inv(F: Field, A):
    n = A.shape[1]
    R, piv = rref(F, np.concatenate([A, eye(F, n)], axis=2))
    if len(piv) != n or piv != list(range(n)):
        raise np.linalg.LinAlgError("matrix is singular")
    return R[:, :, n:].copy()


def column_space_basis(F: Field, A):
    """Columns of A reduced to an echelonized spanning set (k, n, r)."""
    R, piv = rref(F, np.swapaxes(A, 1, 2).copy())
    # rows of R are the echelon basis of the column space
    r = len(piv)
    return np.swapaxes(R[:, :r, :], 1, 2).copy()


# -- polynomial invariants -------------------------------------------------


class Echelon:
    """Incrementally maintained reduced column-echelon basis.

    Pivot rows carry a unit entry in their own column and zeros across
    the others, so reducing a batch of columns against the basis is a
    single matrix product instead of per-pivot elimination.
    """

    def __init__(self, F: Field, dim: int):
        self.F = F
        self.dim = dim
        self.W = zeros(F, dim, 0)
        self.piv = []

    @property
    def rank(self) -> int:
        return len(self.piv)

    def reduce(self, C):
        """Columns of C modulo the current span (exact)."""
        if not self.piv or C.shape[2] == 0:
            return C
        coords = np.ascontiguousarray(C[:, self.piv, :])
        return sub(self.F, C, matmul(self.F, self.W, coords))

    def contains(self, v):
        col = v if v.ndim == 3 else v[:, :, None]
        return is_zero(self.reduce(col))

    def insert(self, C, chunk: int = 64) -> int:
        """Adjoin new columns; returns the rank growth."""
        F = self.F
        added = 0
        for c0 in range(0, C.shape[2], chunk):
            Cc = self.reduce(np.ascontiguousarray(C[:, :, c0:c0 + chunk]))
            R, p = rref(F, np.swapaxes(Cc, 1, 2).copy())
            r = len(p)
            if r == 0:
                continue
            Wn = np.ascontiguousarray(np.swapaxes(R[:, :r, :], 1, 2))
            if self.piv:
                coords = np.ascontiguousarray(self.W[:, p, :])
                self.W = sub(F, self.W, matmul(F, Wn, coords))
            self.W = np.concatenate([self.W, Wn], axis=2)
            self.piv.extend(p)
            added += r
        return added

    def columns(self):
        return self.W


def charpoly(F: Field, A):
    """det(xI - A) by Leibniz expansion (intended for n <= 6)."""
    n = A.shape[1]
    if n > 7:
        raise ValueError("charpoly expansion only supported for small matrices")
    enc = to_encoded(F, A)
    entries = {}
    for i in range(n):
        for j in range(n):
            c = F.neg(int(enc[i, j]))
            poly = [c, 1] if i == j else [c]
            entries[(i, j)] = F.poly_trim(poly)
    total = []
    for perm in itertools.permutations(range(n)):
        prod = [1]
        for i in range(n):
            prod = F.poly_mul(prod, entries[(i, perm[i])])
            if not prod:
                break
        if not prod:
            continue
        if _perm_sign(perm) < 0:
            prod = [F.neg(c) for c in prod]
        total = F.poly_add(total, prod)
    return total


def _perm_sign(perm) -> int:
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        ln = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            ln += 1
        if ln % 2 == 0:
            sign = -sign
    return sign


def minpoly_vector(F: Field, A, v):
    """Monic minimal polynomial of A relative to the vector v (Krylov)."""
    n = A.shape[1]
    krylov = [v % F.p]
    cur = v
    while True:
        cur = matvec(F, A, cur)
        M = np.stack(krylov, axis=2)  # (k, n, j)
        x = solve(F, M, cur)
        if x is not None:
            coeffs = [F.neg(int(c)) for c in to_encoded(F, x)]
            return F.poly_trim(coeffs + [1])
        krylov.append(cur)
        if len(krylov) > n:  # pragma: no cover - impossible
            raise RuntimeError("Krylov sequence failed to close")


def poly_apply(F: Field, poly, A):
    """Evaluate a polynomial (encoding coefficients) at a matrix."""
    n = A.shape[1]
    out = zeros(F, n, n)
    for c in reversed(poly):
        out = matmul(F, out, A)
        if c:
            out = add(F, out, scalar_mat(F, n, int(c)))
    return out
