"""Euler-product constants: A_k, G_k(q), G_{k,q}(1), and G_k(q)/phi(q).

A_k = prod over primes of (1 - 1/p)(1 - 1/k + (1/k)(1 - 1/p)^{-k}); the
coprime and progression densities are A_k times finite corrections over
the primes dividing q.  Products are truncated at a configurable prime
limit with an explicit tail bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .arith import euler_phi, primes_up_to, radical_primes
from .errors import DomainError

# Switch the local factor to its power series once the closed form's
# leading correction drops below this size (configurable per call).
SERIES_THRESHOLD = 1e-8


@dataclass(frozen=True)
class EulerProductValue:
    """A truncated Euler product.

    tail_bound bounds |log of the omitted factors|, so the relative
    error of value is at most exp(tail_bound) - 1.
    """

    value: float
    prime_limit: int
    tail_bound: float
    k: int
    q: int


def local_factor_A(p: int, k: int, series_threshold: float = SERIES_THRESHOLD) -> float:
    """Local factor (1 - 1/p)(1 - 1/k + (1/k)(1 - 1/p)^{-k}).

    Evaluated as (1 - u)(1 + d/k) with d = (1-u)^{-k} - 1 computed via
    expm1/log1p; for d below the threshold the power series
    1 + ((k-1)/2)u^2 + ((k^2-1)/6)u^3 + ((k+1)(k+2)(k-1)/24)u^4 is used
    instead, which is exact to double precision in that regime.
    """
    if k < 2:
        raise DomainError("local_factor_A requires k >= 2")
    u = 1.0 / p
    d = math.expm1(-k * math.log1p(-u))
    if d < series_threshold:
        c2 = (k - 1) / 2.0
        c3 = (k * k - 1) / 6.0
        c4 = (k + 1) * (k + 2) * (k - 1) / 24.0
        return 1.0 + u * u * (c2 + u * (c3 + u * c4))
    return (1.0 - u) * (1.0 + d / k)


def _tail_bound(k: int, prime_limit: int) -> float:
    # ((k-1)/2) * sum_{p > P} p^{-2} ~ (k-1)/(2 P log P); doubled for safety.
    return (k - 1) / (prime_limit * math.log(prime_limit))


@lru_cache(maxsize=256)
def compute_A_k(k: int, prime_limit: int = 10**6) -> EulerProductValue:
    """Truncated product for A_k over primes <= prime_limit.

    The product is accumulated in log space with an exactly-rounded
    fsum, so the value is reproducible bit-for-bit.
    """
    if k < 2:
        raise DomainError("compute_A_k requires k >= 2")
    if prime_limit < 2:
        raise DomainError("prime_limit must be >= 2")
    primes = primes_up_to(prime_limit)
    u = 1.0 / primes.astype(np.float64)
    log1m = np.log1p(-u)
    d = np.expm1(-k * log1m)
    logf = log1m + np.log1p(d / k)
    value = math.exp(math.fsum(logf.tolist()))
    return EulerProductValue(
        value=value,
        prime_limit=prime_limit,
        tail_bound=_tail_bound(k, prime_limit),
        k=k,
        q=1,
    )


def _coprime_correction(p: int, k: int) -> float:
    # k / (k - 1 + (1 - 1/p)^{-k})
    return k / (k - 1 + (1 - 1 / p) ** -k)


def compute_G_k(q: int, k: int, prime_limit: int = 10**6) -> EulerProductValue:
    """G_k(q) = A_k * prod over p | q of k/(k - 1 + (1 - 1/p)^{-k})."""
    if q < 1:
        raise DomainError("compute_G_k requires q >= 1")
    base = compute_A_k(k, prime_limit)
    value = base.value
    for p in radical_primes(q):
        value *= _coprime_correction(p, k)
    return EulerProductValue(
        value=value,
        prime_limit=prime_limit,
        tail_bound=base.tail_bound,
        k=k,
        q=q,
    )


def compute_G_kq1(q: int, k: int, prime_limit: int = 10**6) -> EulerProductValue:
    """Dirichlet-series value at 1: A_k * prod over p | q of
    k/((1 - 1/p)(k - 1 + (1 - 1/p)^{-k})); satisfies
    G_k(q) = (phi(q)/q) * G_{k,q}(1)."""
    if q < 1:
        raise DomainError("compute_G_kq1 requires q >= 1")
    base = compute_A_k(k, prime_limit)
    value = base.value
    for p in radical_primes(q):
        value *= _coprime_correction(p, k) / (1 - 1 / p)
    return EulerProductValue(
        value=value,
        prime_limit=prime_limit,
        tail_bound=base.tail_bound,
        k=k,
        q=q,
    )


def ap_leading_coefficient(q: int, k: int, prime_limit: int = 10**6) -> float:
    """Leading density G_k(q)/phi(q) of the progression sums."""
    return compute_G_k(q, k, prime_limit).value / euler_phi(q)


__all__ = [
    "EulerProductValue",
    "local_factor_A",
    "compute_A_k",
    "compute_G_k",
    "compute_G_kq1",
    "ap_leading_coefficient",
    "euler_phi",
]
