"""Arithmetic in F_q for odd q = p**e.

Field elements are plain integers in ``range(q)``.  The polynomial
c_0 + c_1 t + ... + c_{e-1} t^{e-1} in F_p[t]/(m(t)) is stored as the rank
``c_0 + c_1 p + ... + c_{e-1} p^{e-1}``, so two elements are equal exactly
when their coefficient lists are equal.  For e = 1 the rank is the residue.

Every arithmetic method accepts Python ints or integer numpy arrays and
returns the same kind.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .errors import EvenCharacteristic, NotPrime, TooLarge

DEFAULT_MAX_Q = 2**20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# -- scalar polynomial helpers over F_p; coefficient tuples are low degree first

def _poly_divmod_is_zero(num, den, p):
    """True iff den divides num in F_p[t] (den monic)."""
    r = list(num)
    dd = len(den) - 1
    for i in range(len(r) - 1, dd - 1, -1):
        c = r[i] % p
        if c:
            for j in range(dd + 1):
                r[i - dd + j] = (r[i - dd + j] - c * den[j]) % p
    return not any(c % p for c in r[:dd])


def is_irreducible(poly, p: int) -> bool:
    """Trial factorization of a monic polynomial by every monic divisor of degree <= deg/2."""
    deg = len(poly) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if _poly_divmod_is_zero(poly, low + (1,), p):
                return False
    return True


def smallest_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree e, comparing coefficients from t^{e-1} down to t^0."""
    for rank in range(p**e):
        low = tuple((rank // p**i) % p for i in range(e))
        poly = low + (1,)
        if is_irreducible(poly, p):
            return poly
    raise AssertionError("no irreducible polynomial found")  # unreachable for prime p


@dataclass(frozen=True)
class FieldCtx:
    p: int
    e: int
    q: int
    modulus_poly: tuple[int, ...] | None
    eta_minus_one: int

    # -- representation -------------------------------------------------

    def coeffs(self, a: int) -> tuple[int, ...]:
        a = int(a)
        return tuple((a // self.p**i) % self.p for i in range(self.e))

    def from_coeffs(self, coeffs) -> int:
        coeffs = list(coeffs)
        if len(coeffs) != self.e:
            raise ValueError(f"expected {self.e} coefficients, got {len(coeffs)}")
        return sum((int(c) % self.p) * self.p**i for i, c in enumerate(coeffs))

    def element(self, value) -> int:
        """Canonical rank of an int (reduced mod p when e = 1) or coefficient sequence."""
        if isinstance(value, (int, np.integer)):
            if self.e == 1:
                return int(value) % self.p
            if not 0 <= value < self.q:
                raise ValueError(f"rank {value} outside range({self.q})")
            return int(value)
        return self.from_coeffs(value)

    def is_canonical(self, a) -> bool:
        return isinstance(a, (int, np.integer)) and 0 <= a < self.q

    @cached_property
    def _powers(self):
        return np.array([self.p**i for i in range(self.e)], dtype=np.int64)

    def _digits(self, a):
        return (np.asarray(a, dtype=np.int64)[..., None] // self._powers) % self.p

    def _pack(self, d):
        return (d * self._powers).sum(axis=-1)

    def _sd(self, a: int) -> list[int]:
        p, out = self.p, []
        for _ in range(self.e):
            a, r = divmod(a, p)
            out.append(r)
        return out

    def _scalar_pack(self, digits) -> int:
        v = 0
        for c in reversed(digits):
            v = v * self.p + c
        return v

    def _scalar_mul(self, a: int, b: int) -> int:
        e, p, m = self.e, self.p, self.modulus_poly
        da, db = self._sd(a), self._sd(b)
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        for deg in range(2 * e - 2, e - 1, -1):
            lead = prod[deg] % p
            if lead:
                for j in range(e):
                    prod[deg - e + j] -= lead * m[j]
        return self._scalar_pack([c % p for c in prod[:e]])

    @staticmethod
    def _out(res, *args):
        if all(isinstance(a, (int, np.integer)) for a in args):
            return int(res)
        return res

    # -- arithmetic -------------------------------------------------------

    def add(self, a, b):
        if type(a) is int and type(b) is int:
            if self.e == 1:
                return (a + b) % self.p
            return self._scalar_pack([(x + y) % self.p for x, y in zip(self._sd(a), self._sd(b))])
        if self.e == 1:
            return self._out((np.asarray(a, dtype=np.int64) + b) % self.p, a, b)
        return self._out(self._pack((self._digits(a) + self._digits(b)) % self.p), a, b)

    def sub(self, a, b):
        if type(a) is int and type(b) is int:
            if self.e == 1:
                return (a - b) % self.p
            return self._scalar_pack([(x - y) % self.p for x, y in zip(self._sd(a), self._sd(b))])
        if self.e == 1:
            return self._out((np.asarray(a, dtype=np.int64) - b) % self.p, a, b)
        return self._out(self._pack((self._digits(a) - self._digits(b)) % self.p), a, b)

    def neg(self, a):
        return self.sub(0, a) if isinstance(a, (int, np.integer)) else self.sub(np.zeros_like(a), a)

    def mul(self, a, b):
        if type(a) is int and type(b) is int:
            if self.e == 1:
                return a * b % self.p
            return self._scalar_mul(a, b)
        if self.e == 1:
            return self._out((np.asarray(a, dtype=np.int64) * b) % self.p, a, b)
        da, db = self._digits(a), self._digits(b)
        da, db = np.broadcast_arrays(da, db)
        e, p = self.e, self.p
        prod = np.zeros(da.shape[:-1] + (2 * e - 1,), dtype=np.int64)
        for i in range(e):
            prod[..., i:i + e] += da[..., i:i + 1] * db
        prod %= p
        m = self.modulus_poly
        for deg in range(2 * e - 2, e - 1, -1):
            lead = prod[..., deg].copy()
            for j in range(e):
                if m[j]:
                    prod[..., deg - e + j] -= lead * m[j]
            prod[..., deg - e:deg] %= p
        return self._out(self._pack(prod[..., :e] % p), a, b)

    def square(self, a):
        if isinstance(a, (int, np.integer)):
            a = int(a)
            return self.mul(a, a)
        return self.square_table[np.asarray(a, dtype=np.int64)]

    def pow(self, a, n: int):
        if n < 0:
            return self.pow(self.inv(a), -n)
        if self.e == 1 and isinstance(a, (int, np.integer)):
            return pow(int(a), n, self.p)
        if isinstance(a, (int, np.integer)):
            a, result = int(a), 1
        else:
            result = np.ones_like(np.asarray(a, dtype=np.int64))
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base)
            n >>= 1
            if n:
                base = self.mul(base, base)
        return result

    def inv(self, a):
        if isinstance(a, (int, np.integer)):
            if a == 0:
                raise ZeroDivisionError("inverse of zero")
            return self.pow(a, self.q - 2)
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        return self.inverse_table[a]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    @cached_property
    def square_table(self):
        r = np.arange(self.q, dtype=np.int64)
        t = self.mul(r, r)
        t.flags.writeable = False
        return t

    @cached_property
    def inverse_table(self):
        r = np.arange(self.q, dtype=np.int64)
        t = self.pow(r, self.q - 2)
        t.flags.writeable = False
        return t

    @property
    def minus_one(self) -> int:
        return self.p - 1

    def __repr__(self):
        if self.e == 1:
            return f"FieldCtx(F_{self.p})"
        return f"FieldCtx(F_{self.p}^{self.e}, modulus={self.modulus_poly})"


@lru_cache(maxsize=64)
def make_field(p: int, e: int = 1, max_q: int = DEFAULT_MAX_Q) -> FieldCtx:
    """Build the context for F_{p^e}.

    The modulus is the smallest monic irreducible of degree e when the
    coefficient lists are compared from the t^{e-1} term downwards.
    """
    p, e = int(p), int(e)
    if p == 2:
        raise EvenCharacteristic("characteristic 2 is not supported")
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if e < 1:
        raise ValueError("extension degree must be >= 1")
    q = p**e
    if q > max_q:
        raise TooLarge(f"q = {q} exceeds ceiling {max_q}")
    modulus = smallest_irreducible(p, e) if e > 1 else None
    ctx = FieldCtx(p, e, q, modulus, 0)
    eta = _character(ctx, ctx.minus_one)
    return FieldCtx(p, e, q, modulus, eta)


def _character(ctx: FieldCtx, a: int) -> int:
    if a == 0:
        return 0
    r = ctx.pow(a, (ctx.q - 1) // 2)
    return 1 if r == 1 else -1


def quadratic_character(ctx: FieldCtx, a: int) -> int:
    """eta(a) in {-1, 0, +1}, computed as a^((q-1)/2)."""
    return _character(ctx, int(a))


def sqrt_field(ctx: FieldCtx, a: int) -> frozenset[int]:
    """All x with x^2 = a, by Tonelli-Shanks over F_q."""
    a = int(a)
    if a == 0:
        return frozenset({0})
    if _character(ctx, a) != 1:
        return frozenset()
    q = ctx.q
    s, t = 0, q - 1
    while t % 2 == 0:
        s, t = s + 1, t // 2
    z = next(c for c in range(2, q) if _character(ctx, c) == -1)
    m, c = s, ctx.pow(z, t)
    x, b = ctx.pow(a, (t + 1) // 2), ctx.pow(a, t)
    while b != 1:
        i, b2 = 0, b
        while b2 != 1:
            b2 = ctx.mul(b2, b2)
            i += 1
        w = ctx.pow(c, 2 ** (m - i - 1))
        m, c = i, ctx.mul(w, w)
        x, b = ctx.mul(x, w), ctx.mul(b, c)
    return frozenset({x, ctx.neg(x)})
