"""Binary base fields GF(2^m) and their degree-C extensions GF(q^C).

Elements at both levels are plain Python ints.  A base-field element is its
polynomial bitmask.  An extension element packs its coordinates over GF(q),
in the polynomial basis {1, a, ..., a^(C-1)}, into consecutive m-bit lanes
with coordinate 0 in the low bits.  The base field therefore sits inside the
extension as exactly the ints below q, and that identity is the embedding
used for mixed-field matrix products.
"""

from __future__ import annotations

import functools

import numpy as np

# Log/antilog tables are built only up to this many elements.
TABLE_LIMIT = 1 << 20


class FieldArithmeticError(ArithmeticError):
    """Raised for undefined field operations such as inverting zero."""


# -- binary polynomial helpers (ints as GF(2)[x] bitmasks) -------------------

def clmul(a: int, b: int) -> int:
    """Carry-less product of two GF(2)[x] bitmasks."""
    if a < b:
        a, b = b, a
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def _gf2_mod(a: int, f: int) -> int:
    df = f.bit_length()
    while a.bit_length() >= df:
        a ^= f << (a.bit_length() - df)
    return a


def _gf2_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, _gf2_mod(a, b)
    return a


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible_gf2(poly: int) -> bool:
    """Rabin irreducibility test for a binary polynomial given as a bitmask."""
    d = poly.bit_length() - 1
    if d < 1:
        return False
    if d == 1:
        return True

    def x_pow_2k(k):
        r = 0b10
        for _ in range(k):
            r = _gf2_mod(clmul(r, r), poly)
        return r

    if x_pow_2k(d) != 0b10:
        return False
    for p in _prime_factors(d):
        if _gf2_gcd(poly, x_pow_2k(d // p) ^ 0b10) != 1:
            return False
    return True


@functools.lru_cache(maxsize=None)
def smallest_irreducible_gf2(m: int) -> int:
    """Numerically smallest irreducible binary polynomial of degree ``m``."""
    if m < 1:
        raise ValueError(f"degree must be positive, got {m}")
    for poly in range(1 << m, 1 << (m + 1)):
        if is_irreducible_gf2(poly):
            return poly
    raise AssertionError("unreachable: irreducibles exist in every degree")


class BaseField:
    """GF(2^m) with a fixed irreducible modulus.

    Parameters
    ----------
    m : int
        Extension degree over GF(2); the field has ``q = 2**m`` elements.
    modulus : int, optional
        Degree-``m`` irreducible binary polynomial as a bitmask.  Defaults to
        the numerically smallest one.
    """

    def __init__(self, m: int, modulus: int | None = None):
        if m < 1:
            raise ValueError(f"m must be positive, got {m}")
        if modulus is None:
            modulus = smallest_irreducible_gf2(m)
        if modulus.bit_length() - 1 != m or not is_irreducible_gf2(modulus):
            raise ValueError(f"{modulus:#x} is not an irreducible polynomial of degree {m}")
        self.m = m
        self.q = 1 << m
        self.order = self.q
        self.modulus = modulus
        self._exp = None
        self._log = None
        if self.q <= TABLE_LIMIT:
            self._build_tables()

    def __repr__(self):
        return f"BaseField(q=2^{self.m}, modulus={self.modulus:#x})"

    def __eq__(self, other):
        return isinstance(other, BaseField) and (self.m, self.modulus) == (other.m, other.modulus)

    def __hash__(self):
        return hash(("base", self.m, self.modulus))

    @property
    def base(self):
        return self

    def _slow_mul(self, a, b):
        return _gf2_mod(clmul(a, b), self.modulus)

    def _slow_pow(self, a, e):
        r = 1
        while e:
            if e & 1:
                r = self._slow_mul(r, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return r

    def _build_tables(self):
        n = self.q - 1
        factors = _prime_factors(n)
        g = 1 if n == 1 else next(
            g for g in range(2, self.q)
            if all(self._slow_pow(g, n // p) != 1 for p in factors)
        )
        exp = [0] * (2 * n)
        log = [0] * self.q
        x = 1
        for i in range(n):
            exp[i] = x
            log[x] = i
            x = self._slow_mul(x, g)
        exp[n:] = exp[:n]
        self.generator = g
        self._exp = exp
        self._log = log

    # -- scalar arithmetic -------------------------------------------------

    @staticmethod
    def add(a: int, b: int) -> int:
        return a ^ b

    sub = add

    def mul(self, a: int, b: int) -> int:
        if not a or not b:
            return 0
        if self._exp is not None:
            return self._exp[self._log[a] + self._log[b]]
        return self._slow_mul(a, b)

    def inv(self, a: int) -> int:
        if not a:
            raise FieldArithmeticError("inverse of zero")
        if self._exp is not None:
            return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]
        return self._slow_pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if not a:
            return 0 if e else 1
        if self._exp is not None:
            return self._exp[(self._log[a] * e) % (self.q - 1)]
        return self._slow_pow(a, e)

    # -- row kernels used by linalg ----------------------------------------

    def axpy(self, c: int, x: list[int], y: list[int]) -> list[int]:
        """Return ``y + c*x`` elementwise."""
        if c == 1:
            return [u ^ v for u, v in zip(x, y)]
        if self._exp is not None:
            exp, log = self._exp, self._log
            lc = log[c]
            return [v ^ exp[lc + log[u]] if u else v for u, v in zip(x, y)]
        mul = self._slow_mul
        return [v ^ mul(c, u) if u else v for u, v in zip(x, y)]

    def scale(self, c: int, x: list[int]) -> list[int]:
        if c == 1:
            return list(x)
        if self._exp is not None:
            exp, log = self._exp, self._log
            lc = log[c]
            return [exp[lc + log[u]] if u else 0 for u in x]
        return [self.mul(c, u) for u in x]

    def random(self, rng: np.random.Generator, count: int) -> list[int]:
        return rng.integers(0, self.q, size=count, dtype=np.int64).tolist()

    def elements(self):
        return range(self.q)

    def to_hex(self, a: int) -> str:
        return format(a, "x")


class ExtField:
    """GF(Q), Q = q^C, built as GF(q)[x] modulo a monic degree-C irreducible.

    ``modulus`` lists the coefficients of that polynomial from the constant
    term up, leading 1 included.  The default is the numerically smallest
    candidate when the C lower coefficients are packed into an int the same
    way elements are.
    """

    def __init__(self, base: BaseField, degree: int, modulus: list[int] | None = None):
        if degree < 1:
            raise ValueError(f"degree must be positive, got {degree}")
        self.base = base
        self.degree = degree
        self.m = base.m
        self.q = base.q
        self.order = base.q ** degree
        self.bits = base.m * degree
        if modulus is None:
            modulus = smallest_irreducible_over(base, degree)
        modulus = list(modulus)
        if len(modulus) != degree + 1 or modulus[-1] != 1:
            raise ValueError("extension modulus must be monic of the requested degree")
        if not is_irreducible_over(base, modulus):
            raise ValueError(f"{modulus} is reducible over {base}")
        self.modulus = modulus
        self._mask = base.q - 1
        # nonzero lower coefficients of the modulus, used by reduction
        self._red = [(j, c) for j, c in enumerate(modulus[:-1]) if c]
        self._shifts = [i * base.m for i in range(degree)]
        if base._log is not None:
            self._red_log = [(j, base._log[c]) for j, c in self._red]
        self._exp = None
        self._log = None
        if self.order <= TABLE_LIMIT:
            self._build_tables()

    def __repr__(self):
        return f"ExtField(q=2^{self.m}, C={self.degree})"

    def __eq__(self, other):
        return (isinstance(other, ExtField) and self.base == other.base
                and self.modulus == other.modulus)

    def __hash__(self):
        return hash(("ext", self.base, tuple(self.modulus)))

    # -- coordinates -------------------------------------------------------

    def to_coords(self, a: int) -> list[int]:
        m, mask = self.m, self._mask
        return [(a >> (i * m)) & mask for i in range(self.degree)]

    def from_coords(self, coords) -> int:
        if len(coords) != self.degree:
            raise ValueError(f"expected {self.degree} coordinates, got {len(coords)}")
        m = self.m
        out = 0
        for i, c in enumerate(coords):
            out |= int(c) << (i * m)
        return out

    def basis(self, j: int) -> int:
        """The j-th polynomial-basis element a^j, 0 <= j < C."""
        return 1 << (j * self.m)

    @property
    def alpha(self) -> int:
        return self.basis(1) if self.degree > 1 else self._reduce([0, 1])

    # -- arithmetic ----------------------------------------------------------

    @staticmethod
    def add(a: int, b: int) -> int:
        return a ^ b

    sub = add

    def _reduce(self, prod: list[int]) -> int:
        C = self.degree
        bmul = self.base.mul
        for d in range(len(prod) - 1, C - 1, -1):
            h = prod[d]
            if h:
                for j, c in self._red:
                    prod[d - C + j] ^= bmul(h, c)
        return self.from_coords(prod[:C])

    def _poly_mul(self, a: int, b: int) -> int:
        mask, q, shifts = self._mask, self.q, self._shifts
        if a < q or b < q:
            # one factor lies in the base field: scale coordinates
            if a >= q:
                a, b = b, a
            out = 0
            for s, c in zip(shifts, self.base.scale(a, [(b >> s) & mask for s in shifts])):
                out |= c << s
            return out
        bexp, blog = self.base._exp, self.base._log
        if bexp is None:
            return self._poly_mul_generic(a, b)
        C = self.degree
        la = [(i, blog[x]) for i, x in enumerate([(a >> s) & mask for s in shifts]) if x]
        lb = [(j, blog[y]) for j, y in enumerate([(b >> s) & mask for s in shifts]) if y]
        prod = [0] * (2 * C - 1)
        for i, lx in la:
            for j, ly in lb:
                prod[i + j] ^= bexp[lx + ly]
        for d in range(2 * C - 2, C - 1, -1):
            h = prod[d]
            if h:
                lh = blog[h]
                for k, lc in self._red_log:
                    prod[d - C + k] ^= bexp[lh + lc]
        out = 0
        for s, c in zip(shifts, prod):
            out |= c << s
        return out

    def _poly_mul_generic(self, a, b):
        C = self.degree
        ac = self.to_coords(a)
        bc = self.to_coords(b)
        prod = [0] * (2 * C - 1)
        bmul = self.base.mul
        for i, x in enumerate(ac):
            if x:
                for j, y in enumerate(bc):
                    if y:
                        prod[i + j] ^= bmul(x, y)
        return self._reduce(prod)

    def _build_tables(self):
        n = self.order - 1
        factors = _prime_factors(n)
        pw = self._slow_pow
        g = 1 if n == 1 else next(
            g for g in range(2, self.order)
            if all(pw(g, n // p) != 1 for p in factors)
        )
        exp = [0] * (2 * n)
        log = [0] * self.order
        x = 1
        for i in range(n):
            exp[i] = x
            log[x] = i
            x = self._poly_mul(x, g)
        exp[n:] = exp[:n]
        self.generator = g
        self._exp = exp
        self._log = log

    def _slow_pow(self, a, e):
        r = 1
        while e:
            if e & 1:
                r = self._poly_mul(r, a)
            a = self._poly_mul(a, a)
            e >>= 1
        return r

    def mul(self, a: int, b: int) -> int:
        if not a or not b:
            return 0
        if a == 1:
            return b
        if b == 1:
            return a
        if self._exp is not None:
            return self._exp[self._log[a] + self._log[b]]
        return self._poly_mul(a, b)

    def inv(self, a: int) -> int:
        if not a:
            raise FieldArithmeticError("inverse of zero")
        if self._exp is not None:
            return self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]
        return self._euclid_inv(a)

    def _euclid_inv(self, a: int) -> int:
        # extended Euclid in GF(q)[x]; coefficient lists, constant term first
        F = self.base
        r0, r1 = list(self.modulus), _poly_trim(self.to_coords(a))
        s0, s1 = [], [1]
        while len(r1) > 1:
            quo = [0] * (len(r0) - len(r1) + 1)
            rem = list(r0)
            lead = F.inv(r1[-1])
            for d in range(len(rem) - len(r1), -1, -1):
                c = F.mul(rem[d + len(r1) - 1], lead)
                if c:
                    quo[d] = c
                    for j, y in enumerate(r1):
                        rem[d + j] ^= F.mul(c, y)
            rem = _poly_trim(rem)
            prod = [0] * (len(quo) + len(s1))
            for i, x in enumerate(quo):
                if x:
                    for j, y in enumerate(s1):
                        prod[i + j] ^= F.mul(x, y)
            s_next = [u ^ v for u, v in zip(prod + [0] * len(s0), s0 + [0] * len(prod))]
            r0, r1 = r1, rem
            s0, s1 = s1, _poly_trim(s_next)
        c = F.inv(r1[0])
        coords = [F.mul(c, x) for x in s1] + [0] * (self.degree - len(s1))
        return self.from_coords(coords)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if not a:
            return 0 if e else 1
        if self._exp is not None:
            return self._exp[(self._log[a] * e) % (self.order - 1)]
        return self._slow_pow(a, e)

    def frobenius(self, a: int, times: int = 1) -> int:
        """a^(q^times)."""
        for _ in range(times):
            a = self.pow(a, self.q)
        return a

    def axpy(self, c: int, x: list[int], y: list[int]) -> list[int]:
        if c == 1:
            return [u ^ v for u, v in zip(x, y)]
        if self._exp is not None:
            exp, log = self._exp, self._log
            lc = log[c]
            return [v ^ exp[lc + log[u]] if u else v for u, v in zip(x, y)]
        mul = self.mul
        return [v ^ mul(c, u) if u else v for u, v in zip(x, y)]

    def scale(self, c: int, x: list[int]) -> list[int]:
        if c == 1:
            return list(x)
        mul = self.mul
        return [mul(c, u) for u in x]

    def random(self, rng: np.random.Generator, count: int) -> list[int]:
        if self.bits <= 62:
            return rng.integers(0, self.order, size=count, dtype=np.int64).tolist()
        flat = self.base.random(rng, count * self.degree)
        C = self.degree
        return [self.from_coords(flat[i * C:(i + 1) * C]) for i in range(count)]

    def elements(self):
        return range(self.order)

    def to_hex(self, a: int) -> str:
        """Coordinates as hex digits joined by ':' (coordinate 0 first)."""
        return ":".join(format(c, "x") for c in self.to_coords(a))


# -- polynomials over a base field (lists, constant term first) ------------

def _poly_trim(a):
    while a and not a[-1]:
        a.pop()
    return a


def _poly_mod(a, f, F):
    """Remainder of a modulo the monic polynomial f."""
    a = _poly_trim(list(a))
    df = len(f) - 1
    while len(a) - 1 >= df:
        h = a[-1]
        shift = len(a) - 1 - df
        for j, c in enumerate(f):
            if c:
                a[shift + j] ^= F.mul(h, c)
        _poly_trim(a)
    return a


def _poly_mulmod(a, b, f, F):
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    prod[i + j] ^= F.mul(x, y)
    return _poly_mod(prod, f, F)


def _poly_gcd(a, b, F):
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    while b:
        lead_inv = F.inv(b[-1])
        b = [F.mul(lead_inv, c) for c in b]
        a, b = b, _poly_mod(a, b, F)
    return a


def is_irreducible_over(F: BaseField, f: list[int]) -> bool:
    """Rabin test for a monic polynomial over GF(q)."""
    d = len(f) - 1
    if d < 1:
        return False
    if d == 1:
        return True

    def x_pow_qk(k):
        r = [0, 1]
        for _ in range(k * F.m):
            r = _poly_mulmod(r, r, f, F)
        return r

    def minus_x(r):
        r = list(r) + [0] * max(0, 2 - len(r))
        r[1] ^= 1
        return _poly_trim(r)

    if minus_x(x_pow_qk(d)):
        return False
    for p in _prime_factors(d):
        g = _poly_gcd(f, minus_x(x_pow_qk(d // p)), F)
        if len(g) != 1:
            return False
    return True


def smallest_irreducible_over(F: BaseField, degree: int) -> list[int]:
    mask = F.q - 1
    for v in range(F.q ** degree):
        f = [(v >> (j * F.m)) & mask for j in range(degree)] + [1]
        if is_irreducible_over(F, f):
            return f
    raise AssertionError("unreachable: irreducibles exist in every degree")


@functools.lru_cache(maxsize=None)
def gf2m(m: int, modulus: int | None = None) -> BaseField:
    """Cached BaseField constructor; fields are immutable and shareable."""
    return BaseField(m, modulus)


@functools.lru_cache(maxsize=None)
def extension(base: BaseField, degree: int) -> ExtField:
    """Cached ExtField constructor with the default modulus."""
    return ExtField(base, degree)


def field_for_order(q: int, modulus: int | None = None) -> BaseField:
    """Base field with ``q`` elements; ``q`` must be a power of two."""
    if q < 2 or q & (q - 1):
        raise ValueError(f"field size must be a power of two, got {q}")
    return gf2m(q.bit_length() - 1, modulus)
