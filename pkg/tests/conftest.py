"""Shared oracles for the test suite.

Everything here recomputes values from first principles (direct
enumeration, stdlib Fraction) so the library under test never certifies
itself.
"""

from fractions import Fraction
from math import comb, gcd

import pytest


def brute_factorize(n: int):
    """Trial-division factorization, independent of dkratio.arith."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def brute_d_k(n: int, k: int) -> int:
    r = 1
    for _, m in brute_factorize(n):
        r *= comb(k + m - 1, m)
    return r


def brute_D_k(n: int, k: int) -> Fraction:
    return Fraction(brute_d_k(n, k), k ** len(brute_factorize(n)))


def brute_divisors(n: int):
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def brute_mobius(n: int) -> int:
    mu = 1
    for _, e in brute_factorize(n):
        if e > 1:
            return 0
        mu = -mu
    return mu


def brute_g_k(n: int, k: int) -> Fraction:
    """Mobius inversion of D_k by direct divisor enumeration."""
    total = Fraction(0)
    for d in brute_divisors(n):
        mu = brute_mobius(n // d)
        if mu:
            total += mu * brute_D_k(d, k)
    return total


def as_fraction(r) -> Fraction:
    return Fraction(r.num, r.den)


@pytest.fixture(scope="session")
def spf_table_1e4():
    from dkratio.arith import sieve_spf

    return sieve_spf(10**4)
