"""Elementary arithmetic layer: sieves, factorization, exact rationals.

Everything downstream (divisor functions, the segmented sum engine, the
character machinery) consumes the types defined here.  All types are
immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np

from .errors import DomainError, OverflowRangeError, ResourceError

# Exact integer parts are kept inside the signed-128-bit range; anything
# larger is reported as an overflow, never wrapped or rounded.
INT128_MAX = 2**127 - 1

# sieve_spf refuses to materialize tables above this entry count.
DEFAULT_SPF_BUDGET = 2**26


def _check_range(value: int, what: str = "integer") -> int:
    if not (-INT128_MAX <= value <= INT128_MAX):
        raise OverflowRangeError(
            f"{what} {value} exceeds the supported 128-bit range"
        )
    return value


class ExactRational:
    """Reduced fraction num/den with 128-bit-range parts.

    Arithmetic is exact; results outside the supported range raise
    OverflowRangeError.  Instances are immutable and hashable.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: int, den: int = 1):
        if den == 0:
            raise DomainError("zero denominator")
        if den < 0:
            num, den = -num, -den
        g = math.gcd(num, den)
        if g > 1:
            num //= g
            den //= g
        _check_range(num, "numerator")
        _check_range(den, "denominator")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("ExactRational is immutable")

    # --- arithmetic ---
    def _coerce(self, other) -> "ExactRational":
        if isinstance(other, ExactRational):
            return other
        if isinstance(other, int):
            return ExactRational(other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return ExactRational(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return ExactRational(self.num * o.den - o.num * self.den, self.den * o.den)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return ExactRational(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.num == 0:
            raise DomainError("division by zero")
        return ExactRational(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def __neg__(self):
        return ExactRational(-self.num, self.den)

    def __abs__(self):
        return ExactRational(abs(self.num), self.den)

    # --- comparisons ---
    def __eq__(self, other):
        if isinstance(other, int):
            return self.den == 1 and self.num == other
        if isinstance(other, ExactRational):
            return self.num == other.num and self.den == other.den
        return NotImplemented

    def __lt__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.num * o.den < o.num * self.den

    def __le__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.num * o.den <= o.num * self.den

    def __gt__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o < self

    def __ge__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o <= self

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return self.num != 0

    def __float__(self):
        # int/int true division is correctly rounded in CPython.
        return self.num / self.den

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        return f"{self.num}/{self.den}"

    def __repr__(self):
        return f"ExactRational({self.num}, {self.den})"


RATIONAL_ZERO = ExactRational(0)
RATIONAL_ONE = ExactRational(1)


@dataclass(frozen=True)
class SpfTable:
    """Smallest-prime-factor table for 2 <= n <= limit.

    spf[n] is the smallest prime dividing n; spf[0] and spf[1] are 0.
    """

    limit: int
    spf: np.ndarray

    def __post_init__(self):
        self.spf.setflags(write=False)


def sieve_spf(limit: int, max_entries: int = DEFAULT_SPF_BUDGET) -> SpfTable:
    """Build an SpfTable for [2, limit].

    Raises ResourceError when limit exceeds the entry budget (default
    2^26); larger ranges should go through the segmented sum engine
    instead of a monolithic table.
    """
    if limit < 2:
        raise DomainError("sieve_spf requires limit >= 2")
    if limit + 1 > max_entries:
        raise ResourceError(
            f"spf table of {limit + 1} entries exceeds the budget of "
            f"{max_entries} entries"
        )
    spf = np.zeros(limit + 1, dtype=np.uint32)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            sl = spf[p * p :: p]
            sl[sl == 0] = p
    # Anything still unmarked has no prime factor <= sqrt(limit): prime.
    rest = np.nonzero(spf[2:] == 0)[0] + 2
    spf[rest] = rest
    return SpfTable(limit=limit, spf=spf)


@dataclass(frozen=True)
class Factorization:
    """n together with its prime factorization, primes strictly increasing."""

    n: int
    factors: Tuple[Tuple[int, int], ...]

    def __iter__(self) -> Iterator[Tuple[int, int]]:
        return iter(self.factors)


def factorize(n: int, table: Optional[SpfTable] = None) -> Factorization:
    """Factor n >= 1; uses an SpfTable when provided, trial division otherwise."""
    if n < 1:
        raise DomainError(f"factorize requires n >= 1, got {n}")
    if n == 1:
        return Factorization(1, ())
    factors = []
    if table is not None and n <= table.limit:
        spf = table.spf
        m = n
        while m > 1:
            p = int(spf[m])
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
        return Factorization(n, tuple(factors))
    m = n
    for p in (2, 3):
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
    # Trial division by 6k +/- 1 candidates up to sqrt(remainder).
    d = 5
    while d * d <= m:
        for cand in (d, d + 2):
            if m % cand == 0:
                e = 0
                while m % cand == 0:
                    m //= cand
                    e += 1
                factors.append((cand, e))
        d += 6
    if m > 1:
        factors.append((m, 1))
    factors.sort()
    return Factorization(n, tuple(factors))


def omega(f: Factorization) -> int:
    """Number of distinct prime divisors."""
    return len(f.factors)


def mobius(f: Factorization) -> int:
    """Mobius function: 0 if any square divides, else (-1)^omega."""
    for _, e in f.factors:
        if e >= 2:
            return 0
    return -1 if len(f.factors) % 2 else 1


def binomial(a: int, b: int) -> int:
    """Exact binomial coefficient with a 128-bit range check."""
    if a < 0 or b < 0:
        raise DomainError("binomial requires nonnegative arguments")
    if b > a:
        raise DomainError("binomial requires b <= a")
    return _check_range(math.comb(a, b), "binomial coefficient")


def squarefree_divisors(q: int) -> Iterator[Tuple[int, int]]:
    """Yield (d, mobius(d)) for every squarefree divisor d of q."""
    primes = [p for p, _ in factorize(q).factors]
    for r in range(len(primes) + 1):
        sign = -1 if r % 2 else 1
        for combo in combinations(primes, r):
            d = 1
            for p in combo:
                d *= p
            yield d, sign


def legendre_totient(x, q: int) -> int:
    """Count of 1 <= m <= x with gcd(m, q) = 1.

    Inclusion-exclusion over the squarefree divisors of q; exact for
    real x >= 0.
    """
    if q < 1:
        raise DomainError("legendre_totient requires q >= 1")
    if x < 0:
        raise DomainError("legendre_totient requires x >= 0")
    xi = int(math.floor(x))
    return sum(sign * (xi // d) for d, sign in squarefree_divisors(q))


def is_powerful(f: Factorization) -> bool:
    """True iff every prime exponent is >= 2 (vacuously true for n = 1)."""
    return all(e >= 2 for _, e in f.factors)


def _is_squarefree_small(b: int) -> bool:
    return mobius(factorize(b)) != 0


def powerful_numbers_up_to(t: int) -> list[int]:
    """Ascending list of powerful (2-full) integers <= t, including 1.

    Enumerates n = a^2 * b^3 over squarefree b; the representation is
    unique for squarefree b, so deduplication is only a safety net.
    """
    if t < 1:
        raise DomainError("powerful_numbers_up_to requires t >= 1")
    out = set()
    b = 1
    while b * b * b <= t:
        if _is_squarefree_small(b):
            cube = b * b * b
            a_max = math.isqrt(t // cube)
            for a in range(1, a_max + 1):
                out.add(a * a * cube)
        b += 1
    return sorted(out)


@lru_cache(maxsize=64)
def primes_up_to(limit: int) -> np.ndarray:
    """Ascending array of primes <= limit (cached, read-only int64)."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    primes = np.nonzero(sieve)[0].astype(np.int64)
    primes.setflags(write=False)
    return primes


def euler_phi(q: int) -> int:
    """Euler totient via factorization."""
    if q < 1:
        raise DomainError("euler_phi requires q >= 1")
    result = q
    for p, _ in factorize(q).factors:
        result -= result // p
    return result


def radical_primes(q: int) -> Tuple[int, ...]:
    """Distinct primes dividing q, ascending."""
    return tuple(p for p, _ in factorize(q).factors)
