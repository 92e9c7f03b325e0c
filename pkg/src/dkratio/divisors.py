"""Exact evaluation of d_k, d_k* = k^omega, D_k = d_k/d_k*, and the kernel g_k.

All evaluation is factorization-driven.  g_k_by_inversion enumerates
divisors directly and exists as an independent oracle for g_k.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import (
    ExactRational,
    Factorization,
    binomial,
    factorize,
    is_powerful,
    mobius,
    omega,
)
from .errors import DomainError

# Above this order, binom(k+m-1, m) can leave the 128-bit range at
# desk-scale exponents; the cap is configurable per call site via the
# dataclass but defaults to the supported ceiling.
MAX_ORDER = 64


@dataclass(frozen=True)
class DivisorParams:
    """The order k >= 2 of the divisor functions."""

    k: int

    def __post_init__(self):
        if not (2 <= self.k <= MAX_ORDER):
            raise DomainError(f"order k must lie in [2, {MAX_ORDER}], got {self.k}")


def d_k(f: Factorization, params: DivisorParams) -> int:
    """Number of ordered k-factorizations: prod binom(k+m-1, m)."""
    k = params.k
    result = 1
    for _, m in f.factors:
        result *= binomial(k + m - 1, m)
    return result


def d_star(f: Factorization, params: DivisorParams) -> int:
    """k^omega(n), the count of ordered k-factorizations into coprime parts."""
    return params.k ** omega(f)


def D_k(f: Factorization, params: DivisorParams) -> ExactRational:
    """The ratio d_k(n)/k^omega(n), multiplicative with D_k(p^m) = binom(k+m-1,m)/k."""
    return ExactRational(d_k(f, params), d_star(f, params))


def _D_order(f: Factorization, k: int) -> ExactRational:
    """D with arbitrary order >= 1; D_1 is identically 1."""
    if k == 1:
        return ExactRational(1)
    num = 1
    for _, m in f.factors:
        num *= binomial(k + m - 1, m)
    return ExactRational(num, k ** omega(f))


def g_k(f: Factorization, params: DivisorParams) -> ExactRational:
    """Convolution kernel with D_k = g_k * 1 (Dirichlet convolution).

    g_k(1) = 1; g_k vanishes off the powerful numbers.  On powerful n the
    value is multiplicative with g_k(p^m) = binom(k+m-2, m)/k, i.e.
    ((k-1)/k)^omega(n) * D_{k-1}(n) = d_{k-1}(n)/k^omega(n); the exponent
    on (k-1)/k is forced by multiplicativity (g_k is a Dirichlet
    convolution of multiplicative functions) and by the convolution
    identity sum_{d|n} g_k(d) = D_k(n), which pins g_k(36) for k=2 at
    1/4, not 1/2.
    """
    if f.n == 1:
        return ExactRational(1)
    if not is_powerful(f):
        return ExactRational(0)
    k = params.k
    num = 1
    for _, m in f.factors:
        num *= binomial(k + m - 2, m)
    return ExactRational(num, k ** omega(f))


def _divisor_factorizations(f: Factorization):
    """Yield factorizations of every divisor of f.n."""
    divisors = [Factorization(1, ())]
    for p, m in f.factors:
        nxt = []
        for g in divisors:
            pe = 1
            for e in range(m + 1):
                if e == 0:
                    nxt.append(g)
                else:
                    pe *= p
                    nxt.append(
                        Factorization(g.n * pe, g.factors + ((p, e),))
                    )
        divisors = nxt
    return divisors


def g_k_by_inversion(n: int, params: DivisorParams) -> ExactRational:
    """Mobius inversion oracle: sum over d | n of D_k(d) * mu(n/d).

    Enumerates divisors directly, so it is only meant for oracle-scale n.
    """
    f = factorize(n)
    total = ExactRational(0)
    for g in _divisor_factorizations(f):
        cof = factorize(n // g.n)
        mu = mobius(cof)
        if mu:
            total = total + D_k(g, params) * mu
    return total
