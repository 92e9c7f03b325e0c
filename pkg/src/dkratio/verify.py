"""The acceptance matrix behind `dkratio verify`.

Each criterion is a self-contained check with its stated tolerance; the
CLI prints one pass/fail line per criterion and exits nonzero when any
fail.  Tolerances and reference values are stated literally here on
purpose — this module is the contract, not a place for indirection.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np

from . import characters, euler, experiments, sieve
from .arith import powerful_numbers_up_to
from .divisors import DivisorParams, g_k
from .sieve import DEFAULT_CONFIG, EngineConfig


@dataclass(frozen=True)
class CriterionResult:
    index: int
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"[{self.index:2d}/10] {status}  {self.name}: {self.detail} "
            f"({self.seconds:.2f}s)"
        )


def _criterion_1_a_table(config: EngineConfig) -> tuple[bool, str]:
    report = experiments.reproduce_A_table(prime_limit=10**6)
    bad = [(k, c, ref, d) for k, c, ref, d in report.rows if d > 2e-4]
    if bad:
        worst = max(bad, key=lambda r: r[3])
        return False, (
            f"{len(bad)}/7 rows off by > 2e-4 "
            f"(worst k={worst[0]}: computed {worst[1]:.6f} vs reference "
            f"{worst[2]:.4f}, diff {worst[3]:.2e})"
        )
    return True, f"7/7 rows within 2e-4 (max diff {report.max_abs_diff:.2e})"


def _criterion_2_g_table(config: EngineConfig) -> tuple[bool, str]:
    report = experiments.reproduce_G_table(prime_limit=10**6)
    bad = [(k, q, c, ref, d) for k, q, c, ref, d in report.rows if d > 2e-4]
    anchors = {(2, 2): 0.5711, (5, 5): 1.2600, (8, 9): 3.0111}
    anchor_ok = all(
        abs(euler.ap_leading_coefficient(q, k, 10**6) - v) <= 2e-4
        for (k, q), v in anchors.items()
    )
    if bad or not anchor_ok:
        worst = max(bad, key=lambda r: r[4])
        ids = ", ".join(f"(k={k},q={q})" for k, q, *_ in bad)
        return False, (
            f"{len(bad)}/56 entries off by > 2e-4 [{ids}]; worst diff "
            f"{worst[4]:.2e}; anchors "
            + ("pass" if anchor_ok else "FAIL")
        )
    return True, f"56/56 entries within 2e-4 (max diff {report.max_abs_diff:.2e})"


def _criterion_3_convolution(config: EngineConfig) -> tuple[bool, str]:
    n_max = 10**5
    failures = 0
    for k in range(2, 9):
        params = DivisorParams(k)
        dk, om = sieve.dk_omega_range(n_max, k, config)
        powerful = list(sieve._powerful_factorizations(n_max))
        w_max = max(len(f.factors) for f in powerful)
        # every g_k(d) in range has denominator dividing k^w_max
        den = k**w_max
        acc = np.zeros(n_max + 1, dtype=np.int64)
        for f in powerful:
            g = g_k(f, params)
            assert den % g.den == 0
            acc[f.n :: f.n] += g.num * (den // g.den)
        kpow = np.power(k, om[1:].astype(np.int64))
        lhs = acc[1:] * kpow
        rhs = dk[1:].astype(np.int64) * den
        failures += int(np.count_nonzero(lhs != rhs))
    if failures:
        return False, f"{failures} exact-equality failures over n <= 1e5, k = 2..8"
    return True, "sum over d | n of g_k(d) = D_k(n) exactly, n <= 1e5, k = 2..8"


def _criterion_4_orthogonality(config: EngineConfig) -> tuple[bool, str]:
    worst = 0.0
    for q in range(1, 51):
        for a in range(1, q + 1):
            if math.gcd(a, q) != 1:
                continue
            for n in range(1, q + 1):
                ind = characters.orthogonality_indicator(q, a, n)
                expected = 1.0 if n % q == a % q else 0.0
                worst = max(worst, abs(ind - expected))
    ok = worst <= 1e-10
    return ok, f"max |indicator - {{0,1}}| = {worst:.2e} over q <= 50"


def _criterion_5_filtration(config: EngineConfig) -> tuple[bool, str]:
    worst = 0.0
    for q in range(1, 21):
        for k in (2, 3):
            for x in (100, 1000, 10_000):
                for a in range(1, q + 1):
                    if math.gcd(a, q) != 1:
                        continue
                    via = characters.ap_sum_via_characters(x, k, q, a, config)
                    direct = sieve.sum_progression(x, k, q, a, config).approx
                    rel = abs(via - direct) / abs(direct)
                    worst = max(worst, rel)
    ok = worst <= 1e-6
    return ok, f"max relative gap {worst:.2e} over q <= 20, k in {{2,3}}"


def _trend_ok(normalized: Sequence[float]) -> bool:
    # Halves share the middle point when the count is odd.
    n = len(normalized)
    lower = normalized[: (n + 1) // 2]
    upper = normalized[n // 2 :]
    return max(upper) <= max(lower)


def _criterion_6_exponent(config: EngineConfig) -> tuple[bool, str]:
    grid = experiments.DEFAULT_X_GRID
    worst_slope = -math.inf
    bad = []
    for k in (2, 3):
        for q in (3, 4, 5):
            for a in range(1, q + 1):
                if math.gcd(a, q) != 1:
                    continue
                curve = experiments.error_curve(k, q, a, grid, "progression", config)
                fit = experiments.fit_error_exponent(curve)
                worst_slope = max(worst_slope, fit.slope)
                normalized = [row[4] for row in curve.rows]
                if fit.slope > 0.6 or not _trend_ok(normalized):
                    bad.append((k, q, a, fit.slope))
    if bad:
        return False, f"failing curves: {bad}"
    return True, (
        f"all 16 progression curves: slope <= 0.6 (max {worst_slope:.3f}), "
        "normalized residual trend non-increasing"
    )


def _criterion_7_growth(config: EngineConfig) -> tuple[bool, str]:
    grid = (100, 10_000, 1_000_000)
    ratios = {}
    for k in (2, 3, 4):
        ratios[k] = experiments.growth_check_abs_g(k, grid).max_min_ratio
    ok = all(r <= 3 for r in ratios.values())
    detail = ", ".join(f"k={k}: {r:.3f}" for k, r in ratios.items())
    return ok, f"max/min ratios over x in {{1e2,1e4,1e6}}: {detail}"


def _criterion_8_pv(config: EngineConfig) -> tuple[bool, str]:
    worst_q, worst = 0, 0.0
    for q in range(3, 501):
        r = characters.pv_ratio(q)
        if r > worst:
            worst_q, worst = q, r
    ok = worst <= 1.0
    return ok, f"max pv_ratio = {worst:.4f} at q = {worst_q} (3 <= q <= 500)"


def _criterion_9_powerful(config: EngineConfig) -> tuple[bool, str]:
    report = experiments.powerful_density_check((10**4, 10**5, 10**6))
    bad = [(t, c, r) for t, c, r in report.rows if not (2.0 <= r <= 2.3)]
    summary = ", ".join(f"t=1e{int(math.log10(t))}: {r:.4f}" for t, _, r in report.rows)
    if bad:
        outside = ", ".join(f"t=1e{int(math.log10(t))}: {r:.4f}" for t, _, r in bad)
        return False, f"ratios outside [2.0, 2.3]: {outside} (all: {summary})"
    return True, f"ratios within [2.0, 2.3]: {summary}"


def _criterion_10_performance(config: EngineConfig) -> tuple[bool, str]:
    t0 = time.perf_counter()
    r1 = sieve.sum_full(10**7, 3, config)
    t1 = time.perf_counter() - t0
    t0 = time.perf_counter()
    r2 = sieve.sum_full(10**8, 2, config)
    t2 = time.perf_counter() - t0
    exact_ok = r1.exact is not None and r2.exact is not None
    results = set()
    for workers in (1, 2, 4):
        cfg = EngineConfig(
            segment_size=config.segment_size,
            workers=workers,
            prime_limit=config.prime_limit,
            epsilon=config.epsilon,
        )
        res = sieve.sum_full(10**6, 2, cfg)
        results.add((res.exact.num, res.exact.den))
    deterministic = len(results) == 1
    ok = t1 < 10 and t2 < 120 and exact_ok and deterministic
    return ok, (
        f"sum_full(1e7,3) {t1:.2f}s (<10), sum_full(1e8,2) {t2:.2f}s (<120), "
        f"exact={'yes' if exact_ok else 'NO'}, "
        f"worker-deterministic={'yes' if deterministic else 'NO'}"
    )


_CRITERIA: List[tuple[str, Callable]] = [
    ("A_k table reproduction", _criterion_1_a_table),
    ("G_k(q)/phi(q) table reproduction", _criterion_2_g_table),
    ("convolution identity", _criterion_3_convolution),
    ("character orthogonality", _criterion_4_orthogonality),
    ("filtration cross-route", _criterion_5_filtration),
    ("progression error exponent", _criterion_6_exponent),
    ("kernel growth rate", _criterion_7_growth),
    ("Polya-Vinogradov surrogate", _criterion_8_pv),
    ("powerful-number density", _criterion_9_powerful),
    ("performance and determinism", _criterion_10_performance),
]


def run_verification(only: Optional[Sequence[int]] = None,
                     config: EngineConfig = DEFAULT_CONFIG) -> List[CriterionResult]:
    """Run the acceptance matrix (optionally a subset of 1-based indices)."""
    results = []
    for idx, (name, fn) in enumerate(_CRITERIA, start=1):
        if only and idx not in only:
            continue
        start = time.perf_counter()
        passed, detail = fn(config)
        results.append(
            CriterionResult(
                index=idx,
                name=name,
                passed=passed,
                detail=detail,
                seconds=time.perf_counter() - start,
            )
        )
    return results
