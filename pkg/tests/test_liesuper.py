"""Structure tests for the q(n)/gl(m|n) layer, with hand-frozen oracles."""

import numpy as np
import pytest

from queerkit.gf import Field
from queerkit import linalg as la
from queerkit.liesuper import (
    RestrictedSuperalgebra,
    build_gl,
    build_m_subalgebra,
    build_q,
    centralizer_dims,
    centralizer_intersection_check,
    centralizer_iso_type,
    grading_checks,
    matrix_jordan,
    nilpotent_partition_element,
    positive_roots,
    z_grading,
)

F3 = Field(3)
F5 = Field(5)


def idx_of(g, label):
    return g.labels.index(label)


def elem(g, *terms):
    """Coefficient vector from (label, coeff) pairs."""
    v = np.zeros(g.dim, dtype=np.int64)
    for lab, c in terms:
        v[idx_of(g, lab)] = c % g.F.p if g.F.k == 1 else c
    return v


def coeffs_to_labels(g, v):
    return {g.labels[i]: int(c) for i, c in enumerate(v) if c}


class TestBasisLayout:
    def test_dimensions(self):
        for n in (1, 2, 3, 4):
            g = build_q(n, F3)
            assert g.dim == 2 * n * n
            assert g.dim_even == n * n and g.dim_odd == n * n

    def test_q2_label_order_frozen(self):
        g = build_q(2, F3)
        assert g.labels == [
            "h1", "h2", "H1", "H2", "e(1,2)", "E(1,2)", "f(1,2)", "F(1,2)",
        ]
        assert [g.labels[i] for i in g.pbw_order] == [
            "f(1,2)", "F(1,2)", "h1", "h2", "H1", "H2", "e(1,2)", "E(1,2)",
        ]

    def test_q3_root_order(self):
        assert positive_roots(3) == [(1, 2), (2, 3), (1, 3)]
        g = build_q(3, F3)
        assert [g.labels[i] for i in g.nminus] == [
            "f(1,2)", "F(1,2)", "f(2,3)", "F(2,3)", "f(1,3)", "F(1,3)",
        ]

    def test_root_vectors(self):
        g = build_q(3, F3)
        assert list(g.roots[idx_of(g, "e(1,3)")]) == [1, 0, -1]
        assert list(g.roots[idx_of(g, "F(2,3)")]) == [0, -1, 1]
        assert list(g.roots[idx_of(g, "H2")]) == [0, 0, 0]


class TestBrackets:
    @pytest.mark.parametrize("F", [F3, F5])
    def test_frozen_q2_brackets(self, F):
        g = build_q(2, F)
        e, f = elem(g, ("e(1,2)", 1)), elem(g, ("f(1,2)", 1))
        E, Fo = elem(g, ("E(1,2)", 1)), elem(g, ("F(1,2)", 1))
        H1, H2 = elem(g, ("H1", 1)), elem(g, ("H2", 1))
        assert coeffs_to_labels(g, g.bracket_elements(e, f)) == {
            "h1": 1, "h2": F.p - 1,
        }
        assert coeffs_to_labels(g, g.bracket_elements(H1, H1)) == {"h1": 2}
        assert g.bracket_elements(H1, H2).sum() == 0
        assert coeffs_to_labels(g, g.bracket_elements(e, Fo)) == {
            "H1": 1, "H2": F.p - 1,
        }
        assert coeffs_to_labels(g, g.bracket_elements(E, Fo)) == {
            "h1": 1, "h2": 1,
        }
        # [h1, e] = e, [h2, e] = -e
        h1, h2 = elem(g, ("h1", 1)), elem(g, ("h2", 1))
        assert coeffs_to_labels(g, g.bracket_elements(h1, e)) == {"e(1,2)": 1}
        assert coeffs_to_labels(g, g.bracket_elements(h2, e)) == {
            "e(1,2)": F.p - 1,
        }

    def test_graded_jacobi_sampled(self):
        rng = np.random.default_rng(20260816)
        for g in (build_q(2, F3), build_q(3, F3), build_gl(2, 1, F3)):
            F = g.F
            for _ in range(60):
                i, j, kk = (int(x) for x in rng.integers(0, g.dim, size=3))
                a, b, c = (int(g.parity[t]) for t in (i, j, kk))
                x = np.zeros(g.dim, dtype=np.int64); x[i] = 1
                y = np.zeros(g.dim, dtype=np.int64); y[j] = 1
                z = np.zeros(g.dim, dtype=np.int64); z[kk] = 1

                def sgn(s, v):
                    if s % 2 == 0:
                        return v
                    return np.array([F.neg(int(t)) for t in v], dtype=np.int64)

                total = np.zeros(g.dim, dtype=np.int64)
                for term in (
                    sgn(a * c, g.bracket_elements(x, g.bracket_elements(y, z))),
                    sgn(b * a, g.bracket_elements(y, g.bracket_elements(z, x))),
                    sgn(c * b, g.bracket_elements(z, g.bracket_elements(x, y))),
                ):
                    total = np.array(
                        [F.add(int(u), int(v)) for u, v in zip(total, term)],
                        dtype=np.int64,
                    )
                assert total.sum() == 0, (g.name, i, j, kk)

    def test_restrictedness_and_supertrace(self):
        for g in (build_q(2, F3), build_q(2, F5), build_q(3, F3),
                  build_gl(2, 1, F3)):
            assert g.restrictedness_check()
            assert g.supertrace_ad_check()

    def test_pmap_frozen(self):
        g = build_q(2, F3)
        assert g.pmap_coords[idx_of(g, "h1")] == ((idx_of(g, "h1"), 1),)
        assert g.pmap_coords.get(idx_of(g, "e(1,2)"), ()) == ()
        assert idx_of(g, "E(1,2)") not in g.pmap_coords  # odd: no p-map


class TestForm:
    def test_gram_q2(self):
        g = build_q(2, F3)
        gram = g.form_gram()
        # pairs only opposite parities
        for i in range(g.dim):
            for j in range(g.dim):
                if g.parity[i] == g.parity[j]:
                    assert gram[i, j] == 0
        assert gram[idx_of(g, "h1"), idx_of(g, "H1")] == 1
        assert gram[idx_of(g, "h1"), idx_of(g, "H2")] == 0
        assert gram[idx_of(g, "e(1,2)"), idx_of(g, "F(1,2)")] == 1
        assert gram[idx_of(g, "E(1,2)"), idx_of(g, "f(1,2)")] == 1

    def test_gram_nondegenerate(self):
        for n in (2, 3):
            g = build_q(n, F3)
            gram = la.from_encoded(F3, g.form_gram())
            assert la.rank(F3, gram) == g.dim

    def test_form_invariance_sampled(self):
        # ([x, y], z) = (x, [y, z]) with the sign of swapping x past y
        g = build_q(2, F3)
        F = g.F
        gram = g.form_gram()
        rng = np.random.default_rng(7)
        for _ in range(80):
            i, j, kk = (int(t) for t in rng.integers(0, g.dim, size=3))
            lhs = 0
            for t, c in g.bracket_coords.get((i, j), ()):
                lhs = F.add(lhs, F.mul(c, int(gram[t, kk])))
            rhs = 0
            for t, c in g.bracket_coords.get((j, kk), ()):
                rhs = F.add(rhs, F.mul(c, int(gram[i, t])))
            assert lhs == rhs, (i, j, kk)


def partitions(n, largest=None):
    if n == 0:
        yield ()
        return
    largest = largest or n
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


class TestCentralizers:
    def test_nilpotent_centralizer_dim_table(self):
        # both parities have dimension sum(min(d_i, d_j)) over block pairs
        for n in range(2, 6):
            g = build_q(n, F3)
            for part in partitions(n):
                x = nilpotent_partition_element(g, part)
                expect = sum(min(a, b) for a in part for b in part)
                assert centralizer_dims(g, x) == (expect, expect), part

    def test_semisimple_centralizer_iso_type(self):
        g = build_q(3, F3)
        # odd diag(1, 2, 0): 2 = -1, so the +-1 pair plus a 0-block
        res = centralizer_iso_type(g, [1, 2, 0])
        kinds = [(b["kind"], b["shape"]) for b in res["summands"]]
        assert ("q", (1,)) in kinds
        assert ("gl", (1, 1)) in kinds
        assert res["verified"]
        x = elem(g, ("H1", 1), ("H2", 2))
        assert centralizer_dims(g, x) == (3, 3)

    def test_regular_semisimple_centralizer(self):
        g = build_q(2, F5)
        res = centralizer_iso_type(g, [1, 3])
        # 1 and 3 are not negatives of each other mod 5: two gl(1|0)
        assert [(b["kind"], b["shape"]) for b in res["summands"]] == [
            ("gl", (1, 0)), ("gl", (1, 0)),
        ]
        assert res["verified"]
        x = elem(g, ("H1", 1), ("H2", 3))
        assert centralizer_dims(g, x) == (2, 0)

    def test_mixed_intersection(self):
        g = build_q(2, F3)
        x = elem(g, ("H1", 1), ("H2", 1), ("E(1,2)", 1))
        s = elem(g, ("H1", 1), ("H2", 1))
        nn = elem(g, ("E(1,2)", 1))
        assert centralizer_intersection_check(g, x, s, nn)

    def test_subalgebra_closure_rejects_nonclosed(self):
        g = build_q(2, F3)
        vecs = [elem(g, ("e(1,2)", 1)), elem(g, ("f(1,2)", 1))]
        with pytest.raises(ValueError):
            g.subalgebra(vecs)  # [e, f] = h1 - h2 falls outside


def jordan_form_from_blocks(F, blocks):
    n = sum(sz for _, sz in blocks)
    J = la.zeros(F, n, n)
    pos = 0
    for lam, sz in blocks:
        for t in range(sz):
            J[:, pos + t, pos + t] = la.from_encoded(F, np.int64(lam))
            if t + 1 < sz:
                J[0, pos + t, pos + t + 1] = 1
        pos += sz
    return J


class TestJordan:
    def check(self, F, A, expect_blocks=None):
        jd = matrix_jordan(F, A)
        E = jd.field
        # S + N = A (over the possibly larger field), [S, N] = 0
        assert np.array_equal(la.add(E, jd.semisimple, jd.nilpotent), jd.mat)
        assert np.array_equal(
            la.matmul(E, jd.semisimple, jd.nilpotent),
            la.matmul(E, jd.nilpotent, jd.semisimple),
        )
        nil = jd.nilpotent
        for _ in range(A.shape[1]):
            nil = la.matmul(E, nil, jd.nilpotent)
        assert la.is_zero(nil)
        Pinv = la.inv(E, jd.basis)
        J = la.matmul(E, Pinv, la.matmul(E, jd.mat, jd.basis))
        assert np.array_equal(J, jordan_form_from_blocks(E, jd.blocks))
        if expect_blocks is not None:
            assert jd.blocks == expect_blocks
        return jd

    def test_nilpotent_block(self):
        A = la.zeros(F3, 2, 2)
        A[0, 0, 1] = 1
        self.check(F3, A, [(0, 2)])

    def test_split_semisimple(self):
        A = la.zeros(F3, 2, 2)
        A[0, 0, 1] = 1
        A[0, 1, 0] = 1
        jd = self.check(F3, A, [(1, 1), (2, 1)])
        assert jd.field is F3

    def test_mixed(self):
        A = la.zeros(F3, 2, 2)
        A[0, 0, 0] = A[0, 1, 1] = A[0, 0, 1] = 1
        self.check(F3, A, [(1, 2)])

    def test_needs_extension(self):
        A = la.zeros(F3, 2, 2)
        A[0, 0, 1] = 1
        A[0, 1, 0] = 2
        jd = self.check(F3, A)
        assert jd.field.q == 9
        assert len(jd.blocks) == 2
        mu = jd.blocks[0][0]
        assert jd.blocks[1][0] == jd.field.neg(mu)
        # eigenvalue order: representative with the smaller encoding first
        assert mu == min(mu, jd.field.neg(mu))

    def test_eigenvalue_zero_first(self):
        A = la.zeros(F5, 3, 3)
        A[0, 1, 1] = 2
        A[0, 2, 2] = 3
        jd = self.check(F5, A, [(0, 1), (2, 1), (3, 1)])
        assert jd.field is F5

    def test_bigger_mixed(self):
        # companion matrix of (x - 1)^2 (x - 2) over F_5
        F = F5
        poly = F.poly_mul(F.poly_mul([4, 1], [4, 1]), [3, 1])
        n = 3
        A = la.zeros(F, n, n)
        for i in range(1, n):
            A[0, i, i - 1] = 1
        for i in range(n):
            A[:, i, n - 1] = la.from_encoded(F, np.int64(F.neg(poly[i])))
        self.check(F, A, [(1, 2), (2, 1)])


class TestGrading:
    def test_q4_principal(self):
        g = build_q(4, F3)
        gr = z_grading(g, (4,))
        assert gr.weights == (3, 1, -1, -3)
        res = grading_checks(g, gr)
        for key in ("bracket_additive", "form_orthogonal", "x_in_degree_2",
                    "centralizer_graded", "centralizer_nonnegative",
                    "centralizer_dim_identity"):
            assert res[key], key
        assert res["centralizer_dim"] == 8
        assert centralizer_dims(g, gr.x_coeffs) == (4, 4)

    def test_all_partitions_small(self):
        for n in (2, 3, 4):
            g = build_q(n, F3)
            for part in partitions(n):
                res = grading_checks(g, z_grading(g, part))
                assert all(
                    res[k] for k in ("bracket_additive", "form_orthogonal",
                                     "x_in_degree_2", "centralizer_graded",
                                     "centralizer_nonnegative",
                                     "centralizer_dim_identity")
                ), (n, part)


def chi_from_element(g, x_coeffs):
    """chi(y) = otr(X y) on the basis, as (dim,) encodings."""
    F = g.F
    X = g.element_matrix(x_coeffs)
    return np.array(
        [g.odd_trace(la.matmul(F, X, g.mats[i])) for i in range(g.dim)],
        dtype=np.int64,
    )


class TestMSubalgebra:
    def test_q2_regular(self):
        g = build_q(2, F3)
        gr = z_grading(g, (2,))
        chi = chi_from_element(g, gr.x_coeffs)
        ms = build_m_subalgebra(g, gr, chi)
        assert (ms.sub.dim_even, ms.sub.dim_odd) == (1, 1)
        assert ms.d == 1 and ms.delta == 6
        assert sorted(ms.sub.labels) == ["F(1,2)", "f(1,2)"]
        assert ms.adapted.dim == g.dim

    def test_q3_regular(self):
        g = build_q(3, F3)
        gr = z_grading(g, (3,))
        chi = chi_from_element(g, gr.x_coeffs)
        ms = build_m_subalgebra(g, gr, chi)
        assert (ms.sub.dim_even, ms.sub.dim_odd) == (3, 3)
        assert ms.d == 3 and ms.delta == 216

    def test_q3_subregular(self):
        g = build_q(3, F3)
        gr = z_grading(g, (2, 1))
        chi = chi_from_element(g, gr.x_coeffs)
        ms = build_m_subalgebra(g, gr, chi)
        assert (ms.sub.dim_even, ms.sub.dim_odd) == (2, 2)
        assert ms.d == 2 and ms.delta == 36
        deg = {lab: d for lab, d in zip(g.labels, gr.degrees)}
        for lab in ms.sub.labels:
            assert deg[lab.split("+")[0]] <= -1

    def test_q4_two_two(self):
        g = build_q(4, F3)
        gr = z_grading(g, (2, 2))
        chi = chi_from_element(g, gr.x_coeffs)
        ms = build_m_subalgebra(g, gr, chi)
        cent = g.centralizer(gr.x_coeffs)
        assert ms.sub.dim * 2 == g.dim - cent.dim
        # adapted basis spans g with m occupying the tail positions
        assert ms.adapted.dim == g.dim
        tail = ms.indices_in_adapted
        assert tail == list(range(g.dim - ms.sub.dim, g.dim))


class TestGL:
    def test_dims_and_parity(self):
        g = build_gl(2, 1, F3)
        assert g.dim == 9
        assert g.dim_even == 5 and g.dim_odd == 4

    def test_frozen_brackets(self):
        g = build_gl(2, 1, F3)
        E13 = elem(g, ("E(1,3)", 1))
        E31 = elem(g, ("E(3,1)", 1))
        out = coeffs_to_labels(g, g.bracket_elements(E13, E31))
        assert out == {"E(1,1)": 1, "E(3,3)": 1}  # odd-odd anticommutator
        E12 = elem(g, ("E(1,2)", 1))
        E23 = elem(g, ("E(2,3)", 1))
        assert coeffs_to_labels(g, g.bracket_elements(E12, E23)) == {
            "E(1,3)": 1,
        }
