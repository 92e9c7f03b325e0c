"""Segmented bulk evaluation of D_k and its partial-sum families.

The engine computes, for n in [1, x], the pair (d_k(n), omega(n)) per
segment and accumulates sums exactly as scaled integers: every D_k(n)
with n <= x has denominator dividing k^Omega, where Omega is the largest
r with p_1*...*p_r <= x, so d_k(n) * k^(Omega - omega(n)) is an integer
that fits in a u64 at desk scale (proved per run by max_scaled_bound).
When the proof fails the engine degrades to compensated floats and marks
the exact field absent.

Exact results are bit-identical for any segment size or worker count:
partial sums are integers merged in segment order.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

import numpy as np

from . import backend, euler
from .arith import ExactRational, Factorization, factorize, primes_up_to
from .divisors import DivisorParams, g_k
from .errors import DomainError, ResourceError

_U64_MAX = 2**64 - 1


@dataclass(frozen=True)
class EngineConfig:
    """Engine-wide knobs shared by the CLI and the library entry points."""

    segment_size: int = 2**22
    workers: Optional[int] = None  # None -> available parallelism
    prime_limit: int = 10**6
    epsilon: float = 0.05

    def effective_workers(self) -> int:
        if self.workers is not None:
            return max(1, int(self.workers))
        return max(1, os.cpu_count() or 1)


DEFAULT_CONFIG = EngineConfig()


@dataclass(frozen=True)
class SumRequest:
    """A partial-sum request; mode is one of full/coprime/progression."""

    x: int
    k: int
    mode: str = "full"
    q: Optional[int] = None
    a: Optional[int] = None

    def __post_init__(self):
        if self.x < 1:
            raise DomainError("summation limit x must be >= 1")
        if self.mode not in ("full", "coprime", "progression"):
            raise DomainError(f"unknown sum mode: {self.mode!r}")
        if self.mode == "coprime":
            if self.q is None or self.q < 1:
                raise DomainError("coprime mode requires a modulus q >= 1")
        if self.mode == "progression":
            if self.q is None or self.q < 1 or self.a is None:
                raise DomainError("progression mode requires q >= 1 and a")
            if not (1 <= self.a <= self.q):
                raise DomainError("residue a must satisfy 1 <= a <= q")
            if math.gcd(self.a, self.q) != 1:
                raise DomainError(
                    f"gcd(a, q) must be 1, got gcd({self.a}, {self.q}) = "
                    f"{math.gcd(self.a, self.q)}"
                )


@dataclass(frozen=True)
class SumResult:
    """A partial sum with its asymptotic main term.

    exact is None when the engine had to fall back to float
    accumulation; approx_error bounds |approx - true sum| in either case.
    residual = approx - main_term.
    """

    request: SumRequest
    exact: Optional[ExactRational]
    approx: float
    approx_error: float
    main_term: float
    residual: float


def max_omega(x: int) -> int:
    """Largest r such that the product of the first r primes is <= x."""
    r = 0
    prod = 1
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53):
        prod *= p
        if prod > x:
            return r
        r += 1
    # Desk-scale x never gets here (primorial(16) ~ 3.2e19).
    raise ResourceError(f"x = {x} exceeds the supported summation range")


_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53)


@lru_cache(maxsize=256)
def max_scaled_bound(x: int, k: int) -> int:
    """Max over n <= x of d_k(n) * k^(Omega - omega(n)), proved by search.

    Any n <= x has a non-increasing exponent pattern on the smallest
    primes with the same d_k value and a product <= n, so searching
    those patterns bounds every scaled per-element value the engine
    can produce.
    """
    omega_cap = max_omega(x)
    kpow = [k**j for j in range(omega_cap + 1)]
    best = 0

    def rec(i: int, cap: int, emax: int, dkval: int, used: int):
        nonlocal best
        val = dkval * kpow[omega_cap - used]
        if val > best:
            best = val
        if i >= len(_SMALL_PRIMES):
            return
        p = _SMALL_PRIMES[i]
        if p > cap:
            return
        pe = p
        e = 1
        while pe <= cap and e <= emax:
            rec(i + 1, cap // pe, e, dkval * math.comb(k + e - 1, e), used + 1)
            pe *= p
            e += 1

    rec(0, x, x.bit_length(), 1, 0)
    return best


def _binom_table(x: int, k: int) -> Optional[np.ndarray]:
    """u64 weights binom(k+e-1, e) for e = 0..log2(x); None if they overflow."""
    max_e = max(x.bit_length(), 2)
    values = [math.comb(k + e - 1, e) for e in range(max_e + 1)]
    if max(values) > _U64_MAX:
        return None
    return np.array(values, dtype=np.uint64)


def _segments(x: int, size: int):
    lo = 1
    while lo <= x:
        hi = min(x + 1, lo + size)
        yield lo, hi
        lo = hi


def _exact_masked_sum(scaled: np.ndarray, mask=None) -> int:
    """Exact Python-int sum of u64 values via a 32-bit limb split."""
    vals = scaled if mask is None else scaled[mask]
    if vals.size == 0:
        return 0
    hi = int((vals >> np.uint64(32)).sum(dtype=np.uint64))
    lo = int((vals & np.uint64(0xFFFFFFFF)).sum(dtype=np.uint64))
    return (hi << 32) + lo


class _SegmentEvaluator:
    """Shared per-run state for segment tasks (read-only across threads)."""

    def __init__(self, x: int, k: int, config: EngineConfig, kernel=None):
        self.x = x
        self.k = k
        self.config = config
        self.kernel = kernel if kernel is not None else backend.eval_segment
        self.primes = primes_up_to(math.isqrt(x))
        self.binom = _binom_table(x, k)
        self.omega_cap = max_omega(x)
        exact_ok = (
            self.binom is not None and max_scaled_bound(x, k) <= _U64_MAX
        )
        self.exact_mode = exact_ok
        if exact_ok:
            self.kpow = np.array(
                [k**j for j in range(self.omega_cap + 1)], dtype=np.uint64
            )
        # float table is needed by float_values in either mode (~30 entries)
        max_e = max(x.bit_length(), 2)
        self.binom_f = np.array(
            [float(math.comb(k + e - 1, e)) for e in range(max_e + 1)],
            dtype=np.float64,
        )

    def arrays(self, lo: int, hi: int):
        """dk (u64) and om (u8) for n in [lo, hi); exact mode only."""
        m = hi - lo
        dk = np.empty(m, dtype=np.uint64)
        om = np.empty(m, dtype=np.uint8)
        rem = np.empty(m, dtype=np.uint64)
        self.kernel(lo, hi, self.primes, self.binom, dk, om, rem)
        return dk, om

    def scaled(self, lo: int, hi: int) -> np.ndarray:
        """d_k(n) * k^(Omega - omega(n)) as u64 for n in [lo, hi)."""
        dk, om = self.arrays(lo, hi)
        return dk * self.kpow[self.omega_cap - om.astype(np.int64)]

    def float_values(self, lo: int, hi: int) -> np.ndarray:
        """D_k(n) as float64 for n in [lo, hi); degradation path."""
        m = hi - lo
        dkf = np.empty(m, dtype=np.float64)
        om = np.empty(m, dtype=np.uint8)
        rem = np.empty(m, dtype=np.uint64)
        backend.eval_segment_float(
            lo, hi, self.primes, self.binom_f, dkf, om, rem
        )
        return dkf * np.power(float(self.k), -om.astype(np.float64))


def _mode_mask(lo: int, hi: int, mode: str, q: Optional[int], a: Optional[int]):
    if mode == "full" or (mode == "coprime" and q == 1) or q is None:
        return None
    res = (np.arange(lo, hi, dtype=np.int64)) % q
    if mode == "coprime":
        lut = np.array([math.gcd(r, q) == 1 for r in range(q)], dtype=bool)
        return lut[res]
    return res == (a % q)


def _run_exact(ev: _SegmentEvaluator, request: SumRequest) -> int:
    config = ev.config
    segs = list(_segments(request.x, config.segment_size))

    def task(seg):
        lo, hi = seg
        scaled = ev.scaled(lo, hi)
        mask = _mode_mask(lo, hi, request.mode, request.q, request.a)
        return _exact_masked_sum(scaled, mask)

    workers = min(config.effective_workers(), len(segs))
    if workers <= 1:
        return sum(map(task, segs))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        # pool.map preserves segment order, so the integer merge is
        # identical for every worker count.
        return sum(pool.map(task, segs))


def _run_float(ev: _SegmentEvaluator, request: SumRequest):
    """Neumaier-compensated float accumulation over ordered segments."""
    total = 0.0
    comp = 0.0
    abs_total = 0.0
    for lo, hi in _segments(request.x, ev.config.segment_size):
        vals = ev.float_values(lo, hi)
        mask = _mode_mask(lo, hi, request.mode, request.q, request.a)
        if mask is not None:
            vals = vals[mask]
        part = float(np.sum(vals))
        abs_total += float(np.sum(np.abs(vals)))
        t = total + part
        if abs(total) >= abs(part):
            comp += (total - t) + part
        else:
            comp += (part - t) + total
        total = t
    approx = total + comp
    # Pairwise numpy sums keep per-segment error near eps*log2(m); the
    # factor below is a generous envelope for the whole pipeline.
    err = abs_total * np.finfo(float).eps * 64
    return approx, err


def _main_term(request: SumRequest, config: EngineConfig) -> float:
    if request.mode == "full":
        return euler.compute_A_k(request.k, config.prime_limit).value * request.x
    if request.mode == "coprime":
        return (
            euler.compute_G_k(request.q, request.k, config.prime_limit).value
            * request.x
        )
    coef = euler.ap_leading_coefficient(request.q, request.k, config.prime_limit)
    return coef * request.x


def _evaluate(request: SumRequest, config: EngineConfig, kernel=None) -> SumResult:
    ev = _SegmentEvaluator(request.x, request.k, config, kernel=kernel)
    if ev.exact_mode:
        scaled_total = _run_exact(ev, request)
        exact = ExactRational(scaled_total, request.k**ev.omega_cap)
        approx = float(exact)
        approx_error = abs(approx) * 2.0**-52
    else:
        exact = None
        approx, approx_error = _run_float(ev, request)
    main = _main_term(request, config)
    return SumResult(
        request=request,
        exact=exact,
        approx=approx,
        approx_error=approx_error,
        main_term=main,
        residual=approx - main,
    )


def sum_full(x: int, k: int, config: EngineConfig = DEFAULT_CONFIG, *,
             _kernel=None) -> SumResult:
    """Exact sum of D_k(n) over n <= x, with main term A_k * x."""
    DivisorParams(k)
    return _evaluate(SumRequest(x=x, k=k, mode="full"), config, kernel=_kernel)


def sum_coprime(x: int, k: int, q: int,
                config: EngineConfig = DEFAULT_CONFIG) -> SumResult:
    """Exact sum of D_k(n) over n <= x with gcd(n, q) = 1; main term G_k(q) * x."""
    DivisorParams(k)
    return _evaluate(SumRequest(x=x, k=k, mode="coprime", q=q), config)


def sum_progression(x: int, k: int, q: int, a: int,
                    config: EngineConfig = DEFAULT_CONFIG) -> SumResult:
    """Exact sum of D_k(n) over n <= x, n = a (mod q); main (G_k(q)/phi(q)) * x."""
    DivisorParams(k)
    return _evaluate(
        SumRequest(x=x, k=k, mode="progression", q=q, a=a), config
    )


def bulk_D_k(x: int, k: int,
             config: EngineConfig = DEFAULT_CONFIG) -> Iterator[ExactRational]:
    """Yield D_k(n) for n = 1..x in order, computed segmentwise."""
    DivisorParams(k)
    if x < 1:
        raise DomainError("bulk_D_k requires x >= 1")
    ev = _SegmentEvaluator(x, k, config)
    if not ev.exact_mode:
        raise ResourceError(
            f"exact bulk evaluation infeasible for x={x}, k={k} "
            "(per-element values exceed u64)"
        )
    kp = [k**j for j in range(ev.omega_cap + 1)]
    for lo, hi in _segments(x, config.segment_size):
        dk, om = ev.arrays(lo, hi)
        for i in range(hi - lo):
            yield ExactRational(int(dk[i]), kp[om[i]])


def dk_omega_range(x: int, k: int,
                   config: EngineConfig = DEFAULT_CONFIG):
    """(dk, omega) u64/u8 arrays for n = 1..x; bulk helper for reports/tests."""
    DivisorParams(k)
    bytes_needed = (x + 1) * 9
    if bytes_needed > 2**31:
        raise ResourceError(
            f"dk_omega_range of {x} entries exceeds the 2 GiB array budget"
        )
    ev = _SegmentEvaluator(x, k, config)
    if not ev.exact_mode:
        raise ResourceError(f"exact evaluation infeasible for x={x}, k={k}")
    dk_all = np.empty(x + 1, dtype=np.uint64)
    om_all = np.empty(x + 1, dtype=np.uint8)
    dk_all[0] = 0
    om_all[0] = 0
    for lo, hi in _segments(x, config.segment_size):
        dk, om = ev.arrays(lo, hi)
        dk_all[lo:hi] = dk
        om_all[lo:hi] = om
    return dk_all, om_all


def residue_class_sums(x: int, k: int, q: int,
                       config: EngineConfig = DEFAULT_CONFIG) -> list[ExactRational]:
    """Exact S(x; q, r) = sum of D_k(n) over n <= x, n = r (mod q), r = 0..q-1.

    One bulk pass; per-class accumulation uses exact 16-bit limb
    bincounts so the result is a true rational for every class.
    """
    DivisorParams(k)
    if q < 1:
        raise DomainError("residue_class_sums requires q >= 1")
    ev = _SegmentEvaluator(x, k, config)
    if not ev.exact_mode:
        raise ResourceError(f"exact evaluation infeasible for x={x}, k={k}")
    totals = [0] * q
    for lo, hi in _segments(x, config.segment_size):
        scaled = ev.scaled(lo, hi)
        res = np.arange(lo, hi, dtype=np.int64) % q
        for shift in (0, 16, 32, 48):
            limb = ((scaled >> np.uint64(shift)) & np.uint64(0xFFFF)).astype(
                np.float64
            )
            per_class = np.bincount(res, weights=limb, minlength=q)
            for r in range(q):
                # counts are exact integers below 2^53
                totals[r] += int(per_class[r]) << shift
    den = k**ev.omega_cap
    return [ExactRational(t, den) for t in totals]


def _powerful_factorizations(t: int):
    """Yield factorize(n) for every powerful n <= t (including n = 1)."""
    if t < 1:
        raise DomainError("powerful enumeration requires t >= 1")
    items = []
    b = 1
    while b * b * b <= t:
        fb = factorize(b)
        if all(e == 1 for _, e in fb.factors):  # squarefree b only
            cube = b * b * b
            a_max = math.isqrt(t // cube)
            for a in range(1, a_max + 1):
                fa = factorize(a)
                merged = {p: 3 * e for p, e in fb.factors}
                for p, e in fa.factors:
                    merged[p] = merged.get(p, 0) + 2 * e
                n = a * a * cube
                items.append((n, tuple(sorted(merged.items()))))
        b += 1
    items.sort()
    for n, factors in items:
        yield Factorization(n, factors)


def sum_abs_g_k(x: int, k: int) -> ExactRational:
    """Exact sum of |g_k(n)| over n <= x (support: 1 and powerful numbers)."""
    params = DivisorParams(k)
    total = ExactRational(0)
    for f in _powerful_factorizations(x):
        total = total + abs(g_k(f, params))
    return total


def _g_over_d_fraction(x: int, k: int, q: int) -> Fraction:
    if q < 1:
        raise DomainError("sum_g_over_d requires q >= 1")
    params = DivisorParams(k)
    total = Fraction(0)
    for f in _powerful_factorizations(x):
        if q > 1 and math.gcd(f.n, q) != 1:
            continue
        g = g_k(f, params)
        total += Fraction(g.num, g.den * f.n)
    return total


def sum_g_over_d(x: int, k: int, q: int = 1) -> ExactRational:
    """Exact sum of g_k(n)/n over n <= x with gcd(n, q) = 1.

    The reduced denominator grows with the lcm of the powerful support,
    so large x can leave the 128-bit range even though every term is
    tiny; accumulation is unbounded internally and only the final value
    is range-checked (overflow is reported, never rounded).  For large-x
    convergence studies use sum_g_over_d_float.
    """
    total = _g_over_d_fraction(x, k, q)
    return ExactRational(total.numerator, total.denominator)


def sum_g_over_d_float(x: int, k: int, q: int = 1) -> float:
    """float(sum of g_k(n)/n), exactly rounded; never overflows."""
    return float(_g_over_d_fraction(x, k, q))
