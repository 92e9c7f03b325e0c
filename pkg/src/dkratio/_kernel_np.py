"""Pure-numpy segment kernel: d_k(n) and omega(n) over a contiguous range.

This is the fallback used when the compiled extension is unavailable.
Both kernels share one contract: given [lo, hi) and the base primes up
to sqrt(x), fill dk (u64), om (u8) and rem (u64, the unfactored part)
in place.  After the prime pass, any rem > 1 is a single prime > sqrt(x).
"""

from __future__ import annotations

import numpy as np


def eval_segment(lo, hi, primes, binom, dk, om, rem):
    """Fill dk/om/rem for n in [lo, hi).

    dk[i] = prod over p^e || n of binom[e]; om[i] = omega(n).
    binom[e] must hold the multiplicative weight for exponent e
    (binom(k+e-1, e) for order k), with binom[1] applied to the
    residual large prime.
    """
    m = int(hi - lo)
    dk[:m] = 1
    om[:m] = 0
    rem[:m] = np.arange(lo, hi, dtype=np.uint64)
    for p in primes:
        p = int(p)
        start = ((lo + p - 1) // p) * p
        if start >= hi:
            continue
        idx = np.arange(start - lo, m, p)
        sub = rem[idx] // p
        e = np.ones(len(idx), dtype=np.int64)
        div = sub % p == 0
        while div.any():
            sub[div] //= p
            e[div] += 1
            div[div] = sub[div] % p == 0
        rem[idx] = sub
        dk[idx] *= binom[e]
        om[idx] += 1
    big = rem[:m] > 1
    dk[big] *= binom[1]
    om[big] += 1


def eval_segment_float(lo, hi, primes, binom_f, dkf, om, rem):
    """Float64 variant for ranges whose exact values overflow u64."""
    m = int(hi - lo)
    dkf[:m] = 1.0
    om[:m] = 0
    rem[:m] = np.arange(lo, hi, dtype=np.uint64)
    for p in primes:
        p = int(p)
        start = ((lo + p - 1) // p) * p
        if start >= hi:
            continue
        idx = np.arange(start - lo, m, p)
        sub = rem[idx] // p
        e = np.ones(len(idx), dtype=np.int64)
        div = sub % p == 0
        while div.any():
            sub[div] //= p
            e[div] += 1
            div[div] = sub[div] % p == 0
        rem[idx] = sub
        dkf[idx] *= binom_f[e]
        om[idx] += 1
    big = rem[:m] > 1
    dkf[big] *= binom_f[1]
    om[big] += 1
