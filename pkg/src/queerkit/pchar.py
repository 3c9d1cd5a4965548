"""p-characters of q(n): construction, normal forms, weights, b-invariants.

A p-character chi is a linear functional on the even part; the odd
invariant form identifies it with an odd element X (an n x n matrix B in
the odd block), and every classification question is answered by matrix
algorithms on B:

* chi(h_i) = B_ii, chi(e-root at (k,l)) = B_lk, chi(f-root at (k,l)) = B_kl;
* the Jordan decomposition of B splits chi into commuting semisimple and
  nilpotent parts; the tag is read off from which parts vanish;
* normalization conjugates B to its canonical Jordan form (eigenvalue 0
  first, then +/- classes by the smaller encoding, sizes descending), so
  the normalized chi kills the positive even root vectors;
* the weight set of chi consists of the p^n coordinate-wise solutions of
  lam_i^p - lam_i = chi(h_i)^p, over a field enlarged until every
  coordinate has its roots.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .gf import Field
from .liesuper import RestrictedSuperalgebra, build_q, matrix_jordan


@dataclass
class PChar:
    g: RestrictedSuperalgebra
    odd_rep: np.ndarray        # (k, n, n) odd-block matrix B
    values: np.ndarray         # (dim,) encodings; odd basis entries are 0
    tag: str                   # zero | semisimple | nilpotent | mixed
    jordan: tuple | None       # (semisimple PChar, nilpotent PChar)

    @property
    def n(self):
        return self.g.n

    def value_of(self, label: str) -> int:
        return int(self.values[self.g.labels.index(label)])

    def h_values(self):
        return [self.value_of(f"h{i}") for i in range(1, self.n + 1)]


def odd_matrix_element(g, B):
    """The 2n x 2n realization of the odd element with odd block B."""
    n = g.n
    X = la.zeros(g.F, 2 * n, 2 * n)
    X[:, :n, n:] = B
    X[:, n:, :n] = B
    return X


def chi_values(g, B):
    """chi(y) = otr(X y) on every basis vector (odd entries vanish)."""
    F = g.F
    X = odd_matrix_element(g, B)
    return np.array(
        [g.odd_trace(la.matmul(F, X, g.mats[i])) for i in range(g.dim)],
        dtype=np.int64,
    )


def pchar_from_odd(g, B, with_jordan: bool = True) -> PChar:
    """PChar of chi = (X, -) for the odd element with block B."""
    B = np.asarray(B, dtype=np.int64)
    values = chi_values(g, B)
    if la.is_zero(B):
        zero = PChar(g, B, values, "zero", None)
        return PChar(g, B, values, "zero", (zero, zero)) if with_jordan else zero
    jd = matrix_jordan(g.F, B)
    E = jd.field
    gE = g if E is g.F else build_q(g.n, E)
    s_is_zero = la.is_zero(jd.semisimple)
    n_is_zero = la.is_zero(jd.nilpotent)
    tag = ("semisimple" if n_is_zero else
           "nilpotent" if s_is_zero else "mixed")
    jordan = None
    if with_jordan:
        jordan = (
            pchar_from_odd(gE, jd.semisimple, with_jordan=False),
            pchar_from_odd(gE, jd.nilpotent, with_jordan=False),
        )
    return PChar(g, B, values, tag, jordan)


def jordan_block_matrix(F, blocks):
    """Square matrix with the given (eigenvalue, size) Jordan blocks."""
    n = sum(sz for _, sz in blocks)
    J = la.zeros(F, n, n)
    pos = 0
    for lam, sz in blocks:
        dig = la.from_encoded(F, np.int64(lam))
        for t in range(sz):
            J[:, pos + t, pos + t] = dig
            if t + 1 < sz:
                J[0, pos + t, pos + t + 1] = 1
        pos += sz
    return J


def normalize(chi: PChar):
    """Conjugate chi to its canonical Jordan form.

    Returns (normalized PChar, conjugator P) with P over the (possibly
    enlarged) field of the normalized character and
    P^-1 . odd_rep . P equal to the canonical block matrix.
    """
    jd = matrix_jordan(chi.g.F, chi.odd_rep)
    E = jd.field
    gE = chi.g if E is chi.g.F else build_q(chi.n, E)
    canon = jordan_block_matrix(E, jd.blocks)
    Pinv = la.inv(E, jd.basis)
    conj = la.matmul(E, Pinv, la.matmul(E, jd.mat, jd.basis))
    if not np.array_equal(conj, canon):
        raise AssertionError("jordan conjugation does not reach the canonical form")
    out = pchar_from_odd(gE, canon)
    return out, jd.basis


def lambda_chi(chi: PChar):
    """All p^n weights lam with lam_i^p - lam_i = chi(h_i)^p.

    Returns (field E, weights) where each weight is a tuple of E-encodings
    and the list is ordered lexicographically by per-coordinate root order.
    E is the smallest field in the tower over chi's field where every
    coordinate equation splits (one degree-p step per failing trace).
    """
    F = chi.g.F
    p = F.p
    # artin_schreier_roots solves t^p - t = c^p, so pass chi(h_i) raw
    cs = [int(v) for v in chi.h_values()]
    E = F
    while True:
        emb = (lambda x: x) if E is F else (lambda x, e=F.embedding_into(E): int(e[x]))
        per_coord = [E.artin_schreier_roots(emb(c)) for c in cs]
        if all(per_coord):
            break
        E = Field(p, E.k * p)
    weights = [tuple(t) for t in itertools.product(*per_coord)]
    assert len(weights) == p ** len(cs)
    return E, weights


def b_invariants(chi: PChar):
    """(b0, b1): graded codimension of the centralizer of the semisimple part.

    Cross-checked: b1 has the parity of the number of nonzero eigenvalues
    of the semisimple part (counted with multiplicity).
    """
    s_char = chi.jordan[0]
    g = s_char.g
    coeffs = g.coordinatize(odd_matrix_element(g, s_char.odd_rep))
    cent = g.centralizer(coeffs)
    b0 = g.dim_even - cent.dim_even
    b1 = g.dim_odd - cent.dim_odd
    if la.is_zero(s_char.odd_rep):
        nonzero = 0
    else:
        jd = matrix_jordan(g.F, s_char.odd_rep)
        nonzero = sum(sz for lam, sz in jd.blocks if lam != 0)
    if (b1 - nonzero) % 2 != 0:
        raise AssertionError("b1 parity disagrees with the nonzero-eigenvalue count")
    return b0, b1


# -- constructors ----------------------------------------------------------


def chi_zero(g) -> PChar:
    return pchar_from_odd(g, la.zeros(g.F, g.n, g.n))


def chi_semisimple(g, diag_values) -> PChar:
    B = la.zeros(g.F, g.n, g.n)
    for i, v in enumerate(diag_values):
        B[:, i, i] = la.from_encoded(g.F, np.int64(int(v)))
    return pchar_from_odd(g, B)


def chi_nilpotent(g, partition) -> PChar:
    blocks = [(0, sz) for sz in sorted(partition, reverse=True)]
    assert sum(sz for _, sz in blocks) == g.n
    return pchar_from_odd(g, jordan_block_matrix(g.F, blocks))


def chi_mixed(g, blocks) -> PChar:
    """blocks: list of (eigenvalue encoding, size) Jordan blocks."""
    assert sum(sz for _, sz in blocks) == g.n
    return pchar_from_odd(g, jordan_block_matrix(g.F, blocks))


# -- JSON interchange -------------------------------------------------------


def chi_to_json(chi: PChar) -> str:
    """{"n","p","k","odd_rep"}: entries as little-endian digit vectors.

    Field elements are written in the canonical-modulus digit basis, so
    only fields built with the default smallest modulus round-trip.
    """
    F = chi.g.F
    enc = la.to_encoded(F, chi.odd_rep)
    rep = [
        [list(F.coeffs(int(enc[i, j]))) for j in range(chi.n)]
        for i in range(chi.n)
    ]
    return json.dumps(
        {"n": chi.n, "p": F.p, "k": F.k, "odd_rep": rep},
        sort_keys=True, separators=(",", ":"),
    )


def chi_from_json(text: str, g=None) -> PChar:
    data = json.loads(text)
    n, p, k = int(data["n"]), int(data["p"]), int(data["k"])
    if g is None:
        g = build_q(n, Field(p, k))
    F = g.F
    if (F.p, F.k, g.n) != (p, k, n):
        raise ValueError("algebra handle does not match the encoded character")
    enc = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            enc[i, j] = F.from_coeffs(data["odd_rep"][i][j])
    return pchar_from_odd(g, la.from_encoded(F, enc))
