"""p-character layer tests: values, tags, normal forms, weights, b-invariants."""

import numpy as np
import pytest

from queerkit.gf import Field
from queerkit import linalg as la
from queerkit.liesuper import build_q
from queerkit.pchar import (
    b_invariants,
    chi_from_json,
    chi_mixed,
    chi_nilpotent,
    chi_semisimple,
    chi_to_json,
    chi_values,
    chi_zero,
    jordan_block_matrix,
    lambda_chi,
    normalize,
    odd_matrix_element,
    pchar_from_odd,
)

F3 = Field(3)
F5 = Field(5)
F9 = Field(3, 2)


def mat(F, rows):
    return la.from_encoded(F, np.array(rows, dtype=np.int64))


class TestValues:
    def test_upper_jordan_hits_f(self):
        g = build_q(2, F3)
        chi = pchar_from_odd(g, mat(F3, [[0, 1], [0, 0]]))
        assert chi.value_of("f(1,2)") == 1
        assert chi.value_of("e(1,2)") == 0
        assert chi.h_values() == [0, 0]
        assert chi.tag == "nilpotent"

    def test_lower_hits_e(self):
        g = build_q(2, F3)
        chi = pchar_from_odd(g, mat(F3, [[0, 0], [1, 0]]))
        assert chi.value_of("e(1,2)") == 1
        assert chi.value_of("f(1,2)") == 0

    def test_diag_hits_h(self):
        g = build_q(2, F5)
        chi = chi_semisimple(g, [2, 3])
        assert chi.h_values() == [2, 3]
        assert chi.value_of("e(1,2)") == 0
        assert chi.tag == "semisimple"

    def test_odd_basis_entries_vanish(self):
        g = build_q(3, F3)
        rng = np.random.default_rng(11)
        for _ in range(5):
            B = la.from_encoded(F3, rng.integers(0, 3, size=(3, 3)))
            vals = chi_values(g, B)
            assert all(vals[i] == 0 for i in range(g.dim) if g.parity[i])

    def test_values_match_gram_pairing(self):
        # chi(y) = (X, y) computed independently through the Gram matrix
        g = build_q(2, F3)
        B = mat(F3, [[1, 2], [0, 1]])
        chi = pchar_from_odd(g, B)
        gram = g.form_gram()
        x_coeffs = g.coordinatize(odd_matrix_element(g, B))
        for i in range(g.dim):
            acc = 0
            for j, c in enumerate(x_coeffs):
                if c:
                    acc = F3.add(acc, F3.mul(int(c), int(gram[j, i])))
            assert acc == int(chi.values[i])


class TestTagsAndJordan:
    def test_zero(self):
        g = build_q(2, F3)
        chi = chi_zero(g)
        assert chi.tag == "zero"
        assert chi.values.sum() == 0

    def test_mixed_splits(self):
        g = build_q(2, F3)
        chi = chi_mixed(g, [(1, 2)])
        assert chi.tag == "mixed"
        s, nn = chi.jordan
        assert s.tag == "semisimple" and nn.tag == "nilpotent"
        F = s.g.F
        total = np.array(
            [F.add(int(a), int(b)) for a, b in zip(s.values, nn.values)],
            dtype=np.int64,
        )
        assert np.array_equal(total, chi.values)
        # parts commute as matrices
        assert np.array_equal(
            la.matmul(F, s.odd_rep, nn.odd_rep),
            la.matmul(F, nn.odd_rep, s.odd_rep),
        )

    def test_nonsplit_semisimple_extends(self):
        g = build_q(2, F3)
        chi = pchar_from_odd(g, mat(F3, [[0, 1], [2, 0]]))  # x^2 - 2 irred
        assert chi.tag == "semisimple"
        assert chi.jordan[0].g.F.q == 9


class TestNormalize:
    def test_already_canonical(self):
        g = build_q(2, F3)
        chi = chi_nilpotent(g, (2,))
        norm, P = normalize(chi)
        assert np.array_equal(norm.odd_rep, chi.odd_rep)
        assert norm.tag == "nilpotent"

    def test_normalized_kills_positive_roots(self):
        rng = np.random.default_rng(23)
        for n, F in ((2, F3), (3, F3), (2, F5)):
            g = build_q(n, F)
            for _ in range(8):
                B = la.from_encoded(F, rng.integers(0, F.q, size=(n, n)))
                chi = pchar_from_odd(g, B)
                norm, P = normalize(chi)
                gg = norm.g
                for lab in gg.labels:
                    if lab.startswith("e("):
                        assert norm.value_of(lab) == 0, (n, lab)
                # conjugator really conjugates
                E = gg.F
                emb = (lambda x: x) if E is F else \
                    (lambda x, e=F.embedding_into(E): e[x])
                BE = la.from_encoded(E, np.vectorize(emb)(la.to_encoded(F, B)))
                lhs = la.matmul(E, BE, P)
                rhs = la.matmul(E, P, norm.odd_rep)
                assert np.array_equal(lhs, rhs)

    def test_semisimple_reaches_diagonal(self):
        g = build_q(2, F5)
        B = mat(F5, [[1, 1], [0, 2]])  # eigenvalues 1, 2
        norm, _ = normalize(pchar_from_odd(g, B))
        assert norm.tag == "semisimple"
        for lab in ("e(1,2)", "f(1,2)"):
            assert norm.value_of(lab) == 0
        assert sorted(norm.h_values()) == [1, 2]

    def test_canonical_block_order(self):
        g = build_q(3, F5)
        B = mat(F5, [[3, 0, 0], [0, 0, 0], [0, 0, 2]])  # 3 = -2 mod 5
        norm, _ = normalize(pchar_from_odd(g, B))
        # zero first, then the class {2,3} with representative 2 leading
        assert norm.h_values() == [0, 2, 3]


class TestLambdaChi:
    def test_zero_char(self):
        g = build_q(2, F3)
        E, weights = lambda_chi(chi_zero(g))
        assert E is F3
        assert len(weights) == 9
        assert weights == [
            (a, b) for a in (0, 1, 2) for b in (0, 1, 2)
        ]

    def test_nonzero_needs_extension(self):
        g = build_q(2, F3)
        chi = chi_semisimple(g, [0, 1])
        E, weights = lambda_chi(chi)
        assert E.q == 27
        assert len(weights) == 9
        c = 1  # chi(h2)^p = 1
        for lam in weights:
            assert E.sub(E.pow(lam[0], 3), lam[0]) == 0
            assert E.sub(E.pow(lam[1], 3), lam[1]) == E.lift(c)
        # lam_1 stays in the prime subfield, lam_2 leaves it
        assert all(lam[0] in (0, 1, 2) for lam in weights)
        assert all(lam[1] not in (0, 1, 2) for lam in weights)

    def test_joint_field_for_split_pair(self):
        g = build_q(2, F9)
        i = F9.sqrt(F9.neg(1))
        chi = chi_semisimple(g, [1, i])
        E, weights = lambda_chi(chi)
        assert E.q == 729
        assert len(weights) == 9
        # every weight must solve lam^p - lam = chi(h)^p coordinatewise,
        # with chi's values carried through the subfield embedding (this
        # is sensitive to applying Frobenius exactly once, not twice)
        emb = F9.embedding_into(E)
        for want_raw, col in zip(chi.h_values(), range(2)):
            want = E.pow(int(emb[int(want_raw)]), 3)
            for lam in weights:
                t = int(lam[col])
                assert E.sub(E.pow(t, 3), t) == want

    def test_weight_count_is_p_to_n(self):
        g = build_q(3, F3)
        chi = chi_semisimple(g, [1, 1, 0])
        E, weights = lambda_chi(chi)
        assert len(weights) == 27


class TestBInvariants:
    def test_zero(self):
        g = build_q(2, F3)
        assert b_invariants(chi_zero(g)) == (0, 0)

    def test_opposite_pair(self):
        g = build_q(2, F3)
        chi = chi_semisimple(g, [1, 2])  # 2 = -1: gl(1|1) centralizer
        assert b_invariants(chi) == (2, 2)

    def test_zero_nonzero(self):
        g = build_q(2, F3)
        chi = chi_semisimple(g, [0, 1])
        assert b_invariants(chi) == (2, 3)

    def test_mixed_scalar_plus_jordan(self):
        g = build_q(2, F3)
        chi = chi_mixed(g, [(1, 2)])
        # semisimple part diag(1,1): no odd matrix anticommutes with it
        assert b_invariants(chi) == (0, 4)

    def test_nilpotent(self):
        g = build_q(2, F3)
        chi = chi_nilpotent(g, (2,))
        assert b_invariants(chi) == (0, 0)


class TestJSON:
    def test_frozen_encoding(self):
        g = build_q(2, F3)
        chi = chi_nilpotent(g, (2,))
        assert chi_to_json(chi) == (
            '{"k":1,"n":2,"odd_rep":[[[0],[1]],[[0],[0]]],"p":3}'
        )

    def test_roundtrip_prime_field(self):
        g = build_q(3, F5)
        chi = chi_mixed(g, [(2, 2), (1, 1)])
        back = chi_from_json(chi_to_json(chi), g)
        assert np.array_equal(back.odd_rep, chi.odd_rep)
        assert np.array_equal(back.values, chi.values)

    def test_roundtrip_extension_field(self):
        g = build_q(2, F9)
        chi = chi_semisimple(g, [F9.generator, 1])
        back = chi_from_json(chi_to_json(chi))
        assert back.g.F == F9
        assert np.array_equal(back.odd_rep, chi.odd_rep)

    def test_mismatched_handle_rejected(self):
        g = build_q(2, F3)
        chi = chi_zero(g)
        with pytest.raises(ValueError):
            chi_from_json(chi_to_json(chi), build_q(3, F3))


def test_jordan_block_matrix_shape():
    J = jordan_block_matrix(F3, [(1, 2), (0, 1)])
    assert np.array_equal(
        la.to_encoded(F3, J),
        np.array([[1, 1, 0], [0, 1, 0], [0, 0, 0]], dtype=np.int64),
    )
