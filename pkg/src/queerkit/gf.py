"""Exact arithmetic in GF(p^k) for odd p, with deterministic construction.

Elements are plain Python ints in ``[0, p**k)``: the base-p digits of the
integer are the coefficients of the residue polynomial, least significant
digit first.  Zero is 0, one is 1, and the prime subfield sits at
``0..p-1``.  There is no element wrapper class; every operation goes
through the owning :class:`Field`, which keeps lookup tables for speed.

Reproducibility rules baked in here:

* the modulus of GF(p^k) is the monic irreducible polynomial of degree k
  whose coefficient vector has the smallest integer encoding, so two runs
  (or machines) always agree on what "the" field is;
* the discrete-log generator is the smallest primitive element;
* polynomial factorization walks a fixed sweep of splitting candidates
  instead of drawing random ones.

Polynomials over a field are plain lists of element encodings, little
endian, with no trailing zeros (the zero polynomial is ``[]``).
"""

from __future__ import annotations

import math

import numpy as np

# add/mul pair tables are kept as flat Python lists up to this field size
# (fast scalar access), as numpy arrays up to the numpy limit, and not at
# all beyond that (digit / discrete-log fallback paths).
_LIST_TABLE_LIMIT = 1024
_NUMPY_TABLE_LIMIT = 4096
# exp/log tables (size q) are mandatory; fields beyond this are refused.
_FIELD_SIZE_LIMIT = 1 << 21
# Brute-force bound for the Artin-Schreier cross-check path.
AS_EXHAUSTIVE_LIMIT = 1 << 12


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m < 4:
        return True
    if m % 2 == 0:
        return False
    d = 3
    while d * d <= m:
        if m % d == 0:
            return False
        d += 2
    return True


def _factorize(m: int) -> dict[int, int]:
    """Prime factorization by trial division (inputs here are tiny)."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= m:
        while m % d == 0:
            out[d] = out.get(d, 0) + 1
            m //= d
        d += 1 if d == 2 else 2
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


class Field:
    """The finite field GF(p^k), p an odd prime.

    Parameters
    ----------
    p : odd prime characteristic.
    k : extension degree over the prime field.
    modulus : optional coefficient tuple (a_0, ..., a_{k-1}) of a monic
        irreducible x^k + a_{k-1} x^{k-1} + ... + a_0 over F_p.  When
        omitted, the deterministic smallest modulus is computed.
    """

    def __init__(self, p: int, k: int = 1, modulus=None):
        if not is_prime(p) or p == 2:
            raise ValueError(f"characteristic must be an odd prime, got {p}")
        if k < 1:
            raise ValueError("extension degree must be >= 1")
        self.p = p
        self.k = k
        self.q = p**k
        if self.q > _FIELD_SIZE_LIMIT:
            raise ValueError(f"field size {self.q} beyond supported limit")
        if k == 1:
            self.modulus = ()
        else:
            if modulus is None:
                modulus = smallest_irreducible(p, k)
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != k:
                raise ValueError("modulus must supply exactly k low coefficients")
            if not Field(p).poly_is_irreducible(list(modulus) + [1]):
                raise ValueError(f"modulus {modulus} is not irreducible over F_{p}")
            self.modulus = modulus

        p_, k_, q_ = self.p, self.k, self.q
        self._pows = p_ ** np.arange(k_, dtype=np.int64)
        # digit table: row a = base-p digits of a, little endian
        a = np.arange(q_, dtype=np.int64)
        dig = np.empty((q_, k_), dtype=np.int64)
        for i in range(k_):
            dig[:, i] = a % p_
            a = a // p_
        self._digits = dig
        # reduction rows: digits of x^t mod modulus for t = k .. 2k-2
        red = np.zeros((max(k_ - 1, 0), k_), dtype=np.int64)
        if k_ > 1:
            xk = [(-c) % p_ for c in self.modulus]  # x^k = xk (mod modulus)
            cur = list(xk)
            red[0] = cur
            for t in range(1, k_ - 1):
                top = cur[-1]
                cur = [0] + cur[:-1]
                cur = [(c + top * xk[i]) % p_ for i, c in enumerate(cur)]
                red[t] = cur
        self._red_rows = red

        self._neg_tab = ((-dig) % p_ @ self._pows).astype(np.int64)
        self._build_exp_log()
        self._bind_fast_ops()
        self._embed_cache: dict[tuple, np.ndarray] = {}

    # -- construction helpers -------------------------------------------

    def _mul_poly(self, a: int, b: int) -> int:
        """Table-free product, used while tables are being built."""
        if a == 0 or b == 0:
            return 0
        conv = np.convolve(self._digits[a], self._digits[b]) % self.p
        return self._reduce_digits(conv)

    def _reduce_digits(self, conv) -> int:
        k_, p_ = self.k, self.p
        if len(conv) <= k_:
            out = np.zeros(k_, dtype=np.int64)
            out[: len(conv)] = conv
        else:
            out = conv[:k_].astype(np.int64).copy()
            for t in range(k_, len(conv)):
                out = (out + conv[t] * self._red_rows[t - k_]) % p_
        return int(out @ self._pows)

    def _build_exp_log(self):
        q_ = self.q
        fac = _factorize(q_ - 1)
        cofactors = [(q_ - 1) // ell for ell in fac]

        def pow_nolog(a, e):
            r, base = 1, a
            while e:
                if e & 1:
                    r = self._mul_poly(r, base)
                base = self._mul_poly(base, base)
                e >>= 1
            return r

        g = None
        for c in range(2, q_):
            if all(pow_nolog(c, co) != 1 for co in cofactors):
                g = c
                break
        if g is None:  # pragma: no cover - impossible for a field
            raise RuntimeError("no primitive element found")
        self.generator = g
        ex = np.empty(q_ - 1, dtype=np.int64)
        lg = np.zeros(q_, dtype=np.int64)
        cur = 1
        for i in range(q_ - 1):
            ex[i] = cur
            lg[cur] = i
            cur = self._mul_poly(cur, g)
        if cur != 1:  # pragma: no cover
            raise RuntimeError("generator order mismatch")
        self._exp = ex
        self._log = lg

    def _bind_fast_ops(self):
        """Rebind add/mul as table closures when the field is small."""
        p_, q_ = self.p, self.q
        if q_ <= _NUMPY_TABLE_LIMIT:
            dig = self._digits
            add_np = np.empty((q_, q_), dtype=np.int32)
            for b in range(q_):
                add_np[:, b] = ((dig + dig[b]) % p_) @ self._pows
            lg, ex = self._log, self._exp
            mul_np = np.zeros((q_, q_), dtype=np.int32)
            nz = np.arange(1, q_)
            mul_np[1:, 1:] = ex[(lg[nz][:, None] + lg[nz][None, :]) % (q_ - 1)]
            self._add_np = add_np
            self._mul_np = mul_np
        else:
            self._add_np = None
            self._mul_np = None
        if q_ <= _LIST_TABLE_LIMIT:
            add_flat = [int(x) for x in self._add_np.reshape(-1)]
            mul_flat = [int(x) for x in self._mul_np.reshape(-1)]

            def add(a, b, _t=add_flat, _q=q_):
                return _t[a * _q + b]

            def mul(a, b, _t=mul_flat, _q=q_):
                return _t[a * _q + b]

            self.add = add  # type: ignore[method-assign]
            self.mul = mul  # type: ignore[method-assign]
        elif self._add_np is not None:
            add_np2, mul_np2 = self._add_np, self._mul_np

            def add(a, b, _t=add_np2):
                return int(_t[a, b])

            def mul(a, b, _t=mul_np2):
                return int(_t[a, b])

            self.add = add  # type: ignore[method-assign]
            self.mul = mul  # type: ignore[method-assign]

    # -- scalar arithmetic ----------------------------------------------

    def add(self, a: int, b: int) -> int:  # overridden by _bind_fast_ops
        return int(((self._digits[a] + self._digits[b]) % self.p) @ self._pows)

    def neg(self, a: int) -> int:
        return int(self._neg_tab[a])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, int(self._neg_tab[b]))

    def mul(self, a: int, b: int) -> int:  # overridden by _bind_fast_ops
        if a == 0 or b == 0:
            return 0
        return int(self._exp[(self._log[a] + self._log[b]) % (self.q - 1)])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        return int(self._exp[(-self._log[a]) % (self.q - 1)])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError
            return 0 if e else 1
        return int(self._exp[(int(self._log[a]) * e) % (self.q - 1)])

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    def pth_root(self, a: int) -> int:
        # Frobenius is bijective; its inverse is p^(k-1) exponentiation.
        return self.pow(a, self.p ** (self.k - 1))

    def lift(self, c: int) -> int:
        """Integer -> prime-subfield element."""
        return int(c) % self.p

    def coeffs(self, a: int) -> tuple:
        return tuple(int(x) for x in self._digits[a])

    def from_coeffs(self, cs) -> int:
        cs = [int(c) % self.p for c in cs]
        if len(cs) > self.k:
            raise ValueError("coefficient vector longer than degree")
        cs += [0] * (self.k - len(cs))
        return int(np.asarray(cs, dtype=np.int64) @ self._pows)

    def absolute_trace(self, a: int) -> int:
        """Trace down to F_p, returned as an int in [0, p)."""
        t, cur = 0, a
        for _ in range(self.k):
            t = self.add(t, cur)
            cur = self.frobenius(cur)
        return t

    def is_square(self, a: int) -> bool:
        return a == 0 or int(self._log[a]) % 2 == 0

    def sqrt(self, a: int):
        """A square root of a, or None when a is a non-square."""
        if a == 0:
            return 0
        l = int(self._log[a])
        if l % 2:
            return None
        r = int(self._exp[l // 2])
        # of the two roots, return the smaller encoding, deterministically
        return min(r, self.neg(r))

    def elements(self):
        return range(self.q)

    def rand(self, rng) -> int:
        return int(rng.integers(0, self.q))

    def rand_nonzero(self, rng) -> int:
        return int(rng.integers(1, self.q))

    # -- special maps ----------------------------------------------------

    def artin_schreier_roots(self, c: int) -> list[int]:
        """All t with t^p - t = c^p, sorted by encoding (empty or p roots).

        Production path: F_p-linear solve on digit vectors (t -> t^p - t is
        additive).  The exhaustive path lives in a separate method so the
        two can be cross-checked.
        """
        p_, k_ = self.p, self.k
        rhs = self._digits[self.pow(c, p_)].copy()
        m = np.zeros((k_, k_), dtype=np.int64)
        for i in range(k_):
            e_i = int(self._pows[i])
            m[:, i] = self._digits[self.sub(self.frobenius(e_i), e_i)]
        sol = _solve_mod_p(m, rhs, p_)
        if sol is None:
            return []
        t0 = self.from_coeffs(sol)
        return sorted(self.add(t0, j) for j in range(p_))

    def artin_schreier_roots_exhaustive(self, c: int) -> list[int]:
        if self.q > AS_EXHAUSTIVE_LIMIT:
            raise ValueError("field too large for exhaustive scan")
        rhs = self.pow(c, self.p)
        return [t for t in range(self.q) if self.sub(self.pow(t, self.p), t) == rhs]

    def falling_factorial(self, x: int, m: int) -> int:
        """[x]_m = x (x-1) ... (x-m+1); [x]_0 = 1."""
        out = 1
        for i in range(m):
            out = self.mul(out, self.sub(x, self.lift(i)))
            if out == 0:
                return 0
        return out

    def t_coeff(self, n: int, kk: int) -> int:
        """Triangle coefficient binom(n, kk) * (n-1)!/(kk-1)!, reduced mod p."""
        if kk < 1 or kk > n:
            return 0
        val = math.comb(n, kk) * math.prod(range(kk, n), start=1)
        return self.lift(val)

    # -- extensions and embeddings ---------------------------------------

    def extension_field(self, m: int) -> "Field":
        return Field(self.p, self.k * m)

    def embedding_into(self, target: "Field") -> np.ndarray:
        """Encoding map GF(p^k) -> GF(p^K), as a length-q int array.

        The chosen root of this field's modulus inside the target is the
        one with the smallest encoding, which makes embeddings reproducible
        and compatible along towers built the same way.
        """
        key = (target.p, target.k, target.modulus)
        hit = self._embed_cache.get(key)
        if hit is not None:
            return hit
        if target.p != self.p or target.k % self.k != 0:
            raise ValueError(f"no embedding of {self!r} into {target!r}")
        if self.k == 1:
            mp = np.arange(self.p, dtype=np.int64)
        else:
            f = [int(c) for c in self.modulus] + [1]  # prime-subfield coeffs
            roots = target.poly_roots(f)
            if not roots:  # pragma: no cover - guaranteed by degree divisibility
                raise RuntimeError("modulus has no root in the target field")
            r = roots[0][0]
            # a = sum digit_i alpha^i  maps to  sum digit_i r^i
            rp = 1
            acc = np.zeros((self.q, target.k), dtype=np.int64)
            for i in range(self.k):
                col = self._digits[:, i]  # values < p: valid in the target
                if target._mul_np is not None:
                    term = target._mul_np[col, rp].astype(np.int64)
                else:
                    term = np.array(
                        [target.mul(int(c), rp) for c in col], dtype=np.int64
                    )
                acc = (acc + target._digits[term]) % target.p
                rp = target.mul(rp, r)
            mp = (acc @ target._pows).astype(np.int64)
        self._embed_cache[key] = mp
        return mp

    def embed(self, target: "Field", a: int) -> int:
        return int(self.embedding_into(target)[a])

    # -- polynomials over this field --------------------------------------
    # representation: list of encodings, little endian, no trailing zeros

    def poly_trim(self, f):
        f = list(f)
        while f and f[-1] == 0:
            f.pop()
        return f

    def poly_add(self, f, g):
        n = max(len(f), len(g))
        out = [0] * n
        for i, c in enumerate(f):
            out[i] = c
        for i, c in enumerate(g):
            out[i] = self.add(out[i], c)
        return self.poly_trim(out)

    def poly_sub(self, f, g):
        return self.poly_add(f, [self.neg(c) for c in g])

    def poly_scale(self, f, s):
        if s == 0:
            return []
        return [self.mul(c, s) for c in f]

    def poly_mul(self, f, g):
        if not f or not g:
            return []
        out = [0] * (len(f) + len(g) - 1)
        for i, a in enumerate(f):
            if a == 0:
                continue
            for j, b in enumerate(g):
                if b:
                    out[i + j] = self.add(out[i + j], self.mul(a, b))
        return self.poly_trim(out)

    def poly_divmod(self, f, g):
        f = self.poly_trim(f)
        g = self.poly_trim(g)
        if not g:
            raise ZeroDivisionError("polynomial division by zero")
        if len(f) < len(g):
            return [], f
        inv_lead = self.inv(g[-1])
        rem = list(f)
        quo = [0] * (len(f) - len(g) + 1)
        for i in range(len(f) - len(g), -1, -1):
            c = self.mul(rem[i + len(g) - 1], inv_lead)
            if c == 0:
                continue
            quo[i] = c
            for j, b in enumerate(g):
                rem[i + j] = self.sub(rem[i + j], self.mul(c, b))
        return self.poly_trim(quo), self.poly_trim(rem)

    def poly_mod(self, f, g):
        return self.poly_divmod(f, g)[1]

    def poly_gcd(self, f, g):
        f, g = self.poly_trim(f), self.poly_trim(g)
        while g:
            f, g = g, self.poly_mod(f, g)
        return self.poly_monic(f)

    def poly_lcm(self, f, g):
        d = self.poly_gcd(f, g)
        if not d:
            return []
        return self.poly_monic(self.poly_divmod(self.poly_mul(f, g), d)[0])

    def poly_monic(self, f):
        f = self.poly_trim(f)
        if not f or f[-1] == 1:
            return f
        return self.poly_scale(f, self.inv(f[-1]))

    def poly_pow_mod(self, f, e: int, mod):
        out = [1]
        base = self.poly_mod(f, mod)
        while e:
            if e & 1:
                out = self.poly_mod(self.poly_mul(out, base), mod)
            base = self.poly_mod(self.poly_mul(base, base), mod)
            e >>= 1
        return out

    def poly_eval(self, f, x: int) -> int:
        out = 0
        for c in reversed(f):
            out = self.add(self.mul(out, x), c)
        return out

    def poly_derivative(self, f):
        return self.poly_trim(
            [self.mul(self.lift(i), c) for i, c in enumerate(f)][1:]
        )

    def poly_is_irreducible(self, f) -> bool:
        f = self.poly_monic(f)
        n = len(f) - 1
        if n < 1:
            return False
        if n == 1:
            return True
        x = [0, 1]
        xq = self.poly_pow_mod(x, self.q**n, f)
        if self.poly_trim(self.poly_sub(xq, x)):
            return False
        for ell in _factorize(n):
            xe = self.poly_pow_mod(x, self.q ** (n // ell), f)
            if len(self.poly_gcd(self.poly_sub(xe, x), f)) > 1:
                return False
        return True

    def poly_squarefree_factor(self, f):
        """(squarefree factor, multiplicity) pairs; unit content dropped."""
        f = self.poly_monic(f)
        out = []
        while len(f) > 1:
            df = self.poly_derivative(f)
            if not df:
                # f is a p-th power: f(x) = g(x)^p with root-coefficient g
                g = [self.pth_root(c) for c in f[:: self.p]]
                out.extend((fac, m * self.p) for fac, m in
                           self.poly_squarefree_factor(g))
                return out
            c = self.poly_gcd(f, df)
            w = self.poly_divmod(f, c)[0]
            i = 1
            while len(w) > 1:
                y = self.poly_gcd(w, c)
                z = self.poly_divmod(w, y)[0]
                if len(z) > 1:
                    out.append((self.poly_monic(z), i))
                w = y
                c = self.poly_divmod(c, y)[0]
                i += 1
            f = c
        return out

    def _edf_candidates(self, d: int):
        """Deterministic sweep of splitting candidates, low degrees first."""
        for deg in range(1, max(2 * d, 2)):
            for m in range(self.q**deg):
                cs = []
                mm = m
                for _ in range(deg):
                    cs.append(mm % self.q)
                    mm //= self.q
                yield cs + [1]

    def _equal_degree_split(self, f, d: int):
        """Split a product of distinct degree-d irreducibles."""
        if len(f) - 1 == d:
            return [f]
        half = (self.q**d - 1) // 2
        for u in self._edf_candidates(d):
            h = self.poly_pow_mod(u, half, f)
            h = self.poly_sub(h, [1])
            g1 = self.poly_gcd(h, f)
            if 1 < len(g1) < len(f):
                g2 = self.poly_monic(self.poly_divmod(f, g1)[0])
                return self._equal_degree_split(g1, d) + self._equal_degree_split(
                    g2, d
                )
        raise RuntimeError("equal-degree sweep exhausted")  # pragma: no cover

    def poly_distinct_degree(self, f):
        """Pairs (product of the degree-d irreducibles, d), for squarefree f."""
        out = []
        x = [0, 1]
        h = x
        d = 0
        while len(f) - 1 >= 2 * (d + 1):
            d += 1
            h = self.poly_pow_mod(h, self.q, f)
            g = self.poly_gcd(self.poly_sub(h, x), f)
            if len(g) > 1:
                out.append((g, d))
                f = self.poly_divmod(f, g)[0]
                h = self.poly_mod(h, f)
        if len(f) > 1:
            out.append((f, len(f) - 1))
        return out

    def poly_factor(self, f):
        """Monic irreducible factors with multiplicities, sorted.

        Sort key: (degree, coefficient encodings), so the output order does
        not depend on the internal sweep.
        """
        f = self.poly_trim(f)
        if len(f) <= 1:
            raise ValueError("cannot factor a constant")
        out = []
        for sqf, mult in self.poly_squarefree_factor(f):
            for prod, d in self.poly_distinct_degree(sqf):
                for irr in self._equal_degree_split(prod, d):
                    out.append((tuple(self.poly_monic(irr)), mult))
        out.sort(key=lambda t: (len(t[0]), t[0], t[1]))
        return [(list(fac), m) for fac, m in out]

    def poly_roots(self, f):
        """Roots in this field with multiplicities, sorted by encoding."""
        out = []
        for fac, m in self.poly_factor(f):
            if len(fac) == 2:  # x + c  ->  root -c
                out.append((self.neg(fac[0]), m))
        out.sort()
        return out

    # -- dunder ------------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, Field)
            and (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus)
        )

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def __repr__(self):
        if self.k == 1:
            return f"GF({self.p})"
        mod = "x^%d" % self.k
        for i in range(self.k - 1, -1, -1):
            c = self.modulus[i]
            if c:
                mod += f" + {c}" if i == 0 else (f" + {c}*x^{i}" if i > 1 else f" + {c}*x")
        return f"GF({self.p}^{self.k}; {mod})"


def _solve_mod_p(m, rhs, p):
    """Solve m x = rhs over F_p (dense, tiny); None when inconsistent."""
    m = np.array(m, dtype=np.int64) % p
    rhs = np.array(rhs, dtype=np.int64) % p
    rows, cols = m.shape
    aug = np.concatenate([m, rhs.reshape(rows, 1)], axis=1)
    piv_cols = []
    r = 0
    for c in range(cols):
        sel = None
        for rr in range(r, rows):
            if aug[rr, c] % p:
                sel = rr
                break
        if sel is None:
            continue
        aug[[r, sel]] = aug[[sel, r]]
        aug[r] = (aug[r] * pow(int(aug[r, c]), p - 2, p)) % p
        for rr in range(rows):
            if rr != r and aug[rr, c]:
                aug[rr] = (aug[rr] - aug[rr, c] * aug[r]) % p
        piv_cols.append(c)
        r += 1
        if r == rows:
            break
    for rr in range(r, rows):
        if aug[rr, -1] % p:
            return None
    x = np.zeros(cols, dtype=np.int64)
    for i, c in enumerate(piv_cols):
        x[c] = aug[i, -1]
    return x


def smallest_irreducible(p: int, k: int) -> tuple:
    """Low coefficients of the smallest monic irreducible of degree k over F_p.

    "Smallest" means minimal integer encoding sum(a_i p^i) of the
    non-leading coefficient vector.
    """
    base = Field(p)
    for m in range(p**k):
        cs = []
        mm = m
        for _ in range(k):
            cs.append(mm % p)
            mm //= p
        if base.poly_is_irreducible(cs + [1]):
            return tuple(cs)
    raise RuntimeError("no irreducible polynomial found")  # pragma: no cover


def joint_field(fields) -> Field:
    """Smallest common extension (by degree lcm) of fields of equal p."""
    fields = list(fields)
    p = fields[0].p
    if any(f.p != p for f in fields):
        raise ValueError("mixed characteristics")
    k = 1
    for f in fields:
        k = k * f.k // math.gcd(k, f.k)
    for f in fields:
        if f.k == k:
            return f
    return Field(p, k)
