import math

import numpy as np
import pytest

from queerkit.gf import Field, joint_field, smallest_irreducible


# ---------------------------------------------------------------- oracles


def brute_irreducible(p, coeffs):
    """Independent irreducibility check over F_p by exhaustive divisor scan.

    coeffs: full little-endian list of a monic polynomial.  Only meant for
    degree <= 3, where irreducible == no roots (degree 2, 3) and a root
    scan is decisive.
    """
    deg = len(coeffs) - 1
    assert coeffs[-1] == 1 and 2 <= deg <= 3
    for x in range(p):
        if sum(c * x**i for i, c in enumerate(coeffs)) % p == 0:
            return False
    return True


def test_frozen_smallest_moduli():
    # Derived by the brute oracle: sweep encodings upward, first monic
    # irreducible wins.  GF(9) gets x^2+1, GF(27) gets x^3+2x+1.
    for p, k, expect in [(3, 2, (1, 0)), (3, 3, (1, 2, 0))]:
        for m in range(p**k):
            cs = [(m // p**i) % p for i in range(k)]
            if brute_irreducible(p, cs + [1]):
                assert tuple(cs) == expect
                break
        assert smallest_irreducible(p, k) == expect
    assert Field(3, 2).modulus == (1, 0)
    assert Field(3, 3).modulus == (1, 2, 0)


def test_rejects_char_two_and_composites():
    with pytest.raises(ValueError):
        Field(2)
    with pytest.raises(ValueError):
        Field(9)
    with pytest.raises(ValueError):
        Field(3, 0)


# ----------------------------------------------------------- field axioms


@pytest.mark.parametrize("p,k", [(3, 1), (3, 2), (3, 3), (5, 2), (3, 6), (7, 1)])
def test_field_axioms_sampled(p, k):
    F = Field(p, k)
    rng = np.random.default_rng(20260816)
    for _ in range(200):
        a, b, c = (F.rand(rng) for _ in range(3))
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, b) == F.mul(b, a)
        assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.add(a, F.neg(a)) == 0
        assert F.sub(a, b) == F.add(a, F.neg(b))
        if a:
            assert F.mul(a, F.inv(a)) == 1
            assert F.div(b, a) == F.mul(b, F.inv(a))
    assert F.add(0, 5 % F.q) == 5 % F.q
    assert F.mul(1, 7 % F.q) == 7 % F.q


def test_exhaustive_axioms_gf9():
    F = Field(3, 2)
    for a in F.elements():
        for b in F.elements():
            # digit-wise reference addition
            ca, cb = F.coeffs(a), F.coeffs(b)
            ref = F.from_coeffs([(x + y) % 3 for x, y in zip(ca, cb)])
            assert F.add(a, b) == ref
    # i = encoding of x is a square root of -1 under modulus x^2+1
    i = F.from_coeffs([0, 1])
    assert F.mul(i, i) == F.neg(1)


def test_pow_frobenius_trace():
    F = Field(3, 3)
    for a in F.elements():
        assert F.pow(a, F.q) == a  # x^q = x
        assert F.frobenius(a) == F.pow(a, 3)
    rng = np.random.default_rng(7)
    for _ in range(100):
        a, b = F.rand(rng), F.rand(rng)
        assert F.frobenius(F.add(a, b)) == F.add(F.frobenius(a), F.frobenius(b))
        assert F.frobenius(F.mul(a, b)) == F.mul(F.frobenius(a), F.frobenius(b))
        assert F.pth_root(F.frobenius(a)) == a
    # absolute trace is F_p-valued, additive, and onto
    seen = set()
    for a in F.elements():
        t = F.absolute_trace(a)
        assert t < 3
        seen.add(t)
    assert seen == {0, 1, 2}


def test_sqrt_and_squares():
    for p, k in [(3, 2), (3, 3), (5, 2), (3, 6)]:
        F = Field(p, k)
        squares = {F.mul(a, a) for a in F.elements()}
        assert len(squares) == (F.q - 1) // 2 + 1
        for a in F.elements():
            r = F.sqrt(a)
            if a in squares:
                assert r is not None and F.mul(r, r) == a
            else:
                assert r is None
            assert F.is_square(a) == (a in squares)


# ------------------------------------------------------- artin-schreier


def test_artin_schreier_prime_field():
    F = Field(3)
    assert F.artin_schreier_roots(0) == [0, 1, 2]
    assert F.artin_schreier_roots(1) == []
    assert F.artin_schreier_roots(2) == []


def test_artin_schreier_gf27_nonzero():
    F = Field(3, 3)
    roots = F.artin_schreier_roots(1)
    assert len(roots) == 3
    for t in roots:
        assert F.sub(F.pow(t, 3), t) == F.pow(1, 3)
    # the three roots differ by prime-field shifts
    assert {F.sub(t, roots[0]) for t in roots} == {0, 1, 2}
    # none of them lies in the prime subfield
    assert all(t >= 3 for t in roots)


@pytest.mark.parametrize("p,k", [(3, 2), (3, 3), (5, 2), (3, 4)])
def test_artin_schreier_linear_vs_exhaustive(p, k):
    F = Field(p, k)
    for c in F.elements():
        fast = F.artin_schreier_roots(c)
        slow = F.artin_schreier_roots_exhaustive(c)
        assert fast == sorted(slow)
        # solvability criterion: trace of c^p vanishes
        assert bool(fast) == (F.absolute_trace(F.pow(c, p)) == 0)


def test_artin_schreier_field_growth():
    # over F_3 the equation t^3 - t = 1 needs the cubic extension, and a
    # joint field for several values is the lcm of the individual degrees
    F3 = Field(3)
    assert F3.artin_schreier_roots(1) == []
    F27 = Field(3, 3)
    assert len(F27.artin_schreier_roots(F3.embed(F27, 1))) == 3
    F9 = Field(3, 2)
    i = F9.from_coeffs([0, 1])
    assert len(F9.artin_schreier_roots(i)) == 3
    J = joint_field([F9, F27])
    assert (J.p, J.k) == (3, 6)


# ------------------------------------------------- combinatorial helpers


@pytest.mark.parametrize("p", [3, 5, 7])
def test_falling_factorial_shift_identity(p):
    # [x]_{p-1} + [x-1]_{p-2} == [x-1]_{p-1} for every x in F_p
    F = Field(p)
    for x in F.elements():
        xm1 = F.sub(x, 1)
        lhs = F.add(F.falling_factorial(x, p - 1), F.falling_factorial(xm1, p - 2))
        assert lhs == F.falling_factorial(xm1, p - 1)


def test_falling_factorial_base_cases():
    F = Field(5, 2)
    rng = np.random.default_rng(3)
    for _ in range(50):
        x = F.rand(rng)
        assert F.falling_factorial(x, 0) == 1
        assert F.falling_factorial(x, 1) == x
        assert F.falling_factorial(x, 2) == F.mul(x, F.sub(x, 1))


@pytest.mark.parametrize("p", [3, 5, 7])
def test_t_coeff_values(p):
    F = Field(p)
    # independent integer oracle
    for n in range(0, 2 * p):
        for k in range(0, n + 2):
            if 1 <= k <= n:
                want = (
                    math.factorial(n)
                    // (math.factorial(k) * math.factorial(n - k))
                    * math.factorial(n - 1)
                    // math.factorial(k - 1)
                ) % p
            else:
                want = 0
            assert F.t_coeff(n, k) == want
    # frozen special values
    assert F.t_coeff(2, 1) == 2 % p
    assert F.t_coeff(p - 1, 1) == p - 1  # Wilson: (p-1)! = -1
    for a in range(1, p):
        assert F.t_coeff(a, a) == 1


# ------------------------------------------------------------ embeddings


def test_embedding_ring_hom():
    F3, F9, F27, F729 = Field(3), Field(3, 2), Field(3, 3), Field(3, 6)
    rng = np.random.default_rng(11)
    for src, dst in [(F3, F9), (F3, F27), (F9, F729), (F27, F729), (F9, F9)]:
        mp = src.embedding_into(dst)
        assert mp[0] == 0 and mp[1] == 1
        assert len(set(int(x) for x in mp)) == src.q  # injective
        for _ in range(100):
            a, b = src.rand(rng), src.rand(rng)
            assert dst.add(int(mp[a]), int(mp[b])) == int(mp[src.add(a, b)])
            assert dst.mul(int(mp[a]), int(mp[b])) == int(mp[src.mul(a, b)])
    with pytest.raises(ValueError):
        F27.embedding_into(F9)


def test_embedding_tower_compatible():
    F3, F9, F729 = Field(3), Field(3, 2), Field(3, 6)
    m1 = F3.embedding_into(F9)
    m2 = F9.embedding_into(F729)
    m3 = F3.embedding_into(F729)
    for a in F3.elements():
        assert int(m2[m1[a]]) == int(m3[a])


# ------------------------------------------------------------ polynomials


def test_poly_divmod_roundtrip():
    F = Field(3, 2)
    rng = np.random.default_rng(5)
    for _ in range(100):
        f = [F.rand(rng) for _ in range(int(rng.integers(0, 8)))]
        g = [F.rand(rng) for _ in range(int(rng.integers(1, 5)))]
        g = F.poly_trim(g)
        if not g:
            continue
        q, r = F.poly_divmod(f, g)
        assert F.poly_trim(F.poly_sub(F.poly_add(F.poly_mul(q, g), r), f)) == []
        assert len(r) < len(g)


def test_poly_factor_known():
    F3 = Field(3)
    # x^2 + 1 irreducible over F_3
    assert F3.poly_factor([1, 0, 1]) == [([1, 0, 1], 1)]
    # (x+1)^2 * (x^3+2x+1)
    f = F3.poly_mul(F3.poly_mul([1, 1], [1, 1]), [1, 2, 0, 1])
    assert F3.poly_factor(f) == [([1, 1], 2), ([1, 2, 0, 1], 1)]
    # over GF(9), x^2+1 splits as (x-i)(x+i)
    F9 = Field(3, 2)
    i = F9.from_coeffs([0, 1])
    facs = F9.poly_factor([1, 0, 1])
    assert sorted(r for (fac, m) in facs for r in [F9.neg(fac[0])]) == sorted(
        [i, F9.neg(i)]
    )


def test_poly_factor_pth_powers():
    F = Field(3)
    # x^9 = (x)^9; multiplicities through the p-th power path
    f = [0] * 9 + [1]
    assert F.poly_factor(f) == [([0, 1], 9)]
    # (x^2+1)^3 has zero derivative
    g = F.poly_mul(F.poly_mul([1, 0, 1], [1, 0, 1]), [1, 0, 1])
    assert F.poly_factor(g) == [([1, 0, 1], 3)]


def test_poly_roots_with_multiplicity():
    F = Field(5)
    # (x-2)^2 (x-3) = expand by library mul
    f = F.poly_mul(F.poly_mul([3, 1], [3, 1]), [2, 1])
    assert F.poly_roots(f) == [(2, 2), (3, 1)]


def test_poly_factor_random_roundtrip():
    F = Field(3, 2)
    rng = np.random.default_rng(17)
    for _ in range(40):
        deg = int(rng.integers(1, 7))
        f = [F.rand(rng) for _ in range(deg)] + [1]
        facs = F.poly_factor(f)
        prod = [1]
        for fac, m in facs:
            for _ in range(m):
                prod = F.poly_mul(prod, fac)
        assert prod == F.poly_trim(f)
        for fac, _ in facs:
            assert F.poly_is_irreducible(fac)


def test_poly_gcd_lcm():
    F = Field(3)
    f = F.poly_mul([1, 1], [2, 1])
    g = F.poly_mul([1, 1], [1, 0, 1])
    assert F.poly_gcd(f, g) == [1, 1]
    lcm = F.poly_lcm(f, g)
    assert F.poly_mod(lcm, f) == [] and F.poly_mod(lcm, g) == []
    assert len(lcm) - 1 == 4
