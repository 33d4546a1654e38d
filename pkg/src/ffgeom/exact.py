"""Exact comparison of quantities such as c * a^(5/4) * b^(2/3).

A :class:`Surd` is a nonnegative rational coefficient times a product of
nonnegative integers raised to rational exponents.  Two surds are compared
by raising both to the least common multiple of the exponent denominators,
which turns the comparison into one between rationals.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import mpmath


@dataclass(frozen=True)
class Surd:
    coef: Fraction
    factors: tuple[tuple[int, Fraction], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coef", Fraction(self.coef))
        if self.coef < 0:
            raise ValueError("Surd coefficients must be nonnegative")
        fs = []
        for base, exp in self.factors:
            if base < 0:
                raise ValueError("Surd bases must be nonnegative")
            fs.append((int(base), Fraction(exp)))
        object.__setattr__(self, "factors", tuple(fs))

    @classmethod
    def of(cls, x) -> "Surd":
        return x if isinstance(x, Surd) else cls(Fraction(x))

    def __mul__(self, other):
        other = Surd.of(other)
        return Surd(self.coef * other.coef, self.factors + other.factors)

    __rmul__ = __mul__

    def _denominator(self):
        return lcm(1, *(e.denominator for _, e in self.factors))

    def _raised(self, L: int) -> Fraction:
        val = self.coef ** L
        for base, exp in self.factors:
            k = exp * L
            assert k.denominator == 1
            k = int(k)
            if base == 0:
                if k > 0:
                    return Fraction(0)
                if k < 0:
                    raise ZeroDivisionError("zero base with negative exponent")
                continue
            val *= Fraction(base) ** k
        return val

    def _cmp(self, other) -> int:
        other = Surd.of(other)
        L = lcm(self._denominator(), other._denominator())
        a, b = self._raised(L), other._raised(L)
        return (a > b) - (a < b)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        if not isinstance(other, (Surd, int, Fraction)):
            return NotImplemented
        return self._cmp(other) == 0

    def __hash__(self):
        return hash((self.coef, self.factors))

    def to_mpf(self, dps: int = 50):
        with mpmath.workdps(dps):
            v = mpmath.mpf(self.coef.numerator) / self.coef.denominator
            for base, exp in self.factors:
                v *= mpmath.power(base, mpmath.mpf(exp.numerator) / exp.denominator)
            return v

    def __str__(self):
        parts = [] if self.coef == 1 and self.factors else [str(self.coef)]
        for base, exp in self.factors:
            parts.append(str(base) if exp == 1 else f"{base}^({exp})")
        return "*".join(parts)


def ge(x, y) -> bool:
    """x >= y for ints, Fractions or Surds."""
    return Surd.of(x) >= Surd.of(y)


def iroot_floor(n: int, k: int) -> int:
    """Largest m with m**k <= n (integer Newton iteration)."""
    if n < 0:
        raise ValueError("negative radicand")
    if n < 2:
        return n
    m = 1 << (n.bit_length() // k + 1)
    while True:
        nxt = ((k - 1) * m + n // m ** (k - 1)) // k
        if nxt >= m:
            break
        m = nxt
    while m**k > n:
        m -= 1
    while (m + 1) ** k <= n:
        m += 1
    return m


def iroot_ceil(n: int, k: int) -> int:
    """Smallest m with m**k >= n."""
    m = iroot_floor(n, k)
    return m if m**k >= n else m + 1
