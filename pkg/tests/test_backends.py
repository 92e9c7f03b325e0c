"""Kernel backends must be interchangeable bit for bit."""

import numpy as np
import pytest

from dkratio import backend
from dkratio.arith import primes_up_to
from dkratio.sieve import EngineConfig, _SegmentEvaluator, sum_full


def _run_kernel(kernel, lo, hi, k):
    primes = primes_up_to(int(np.sqrt(hi)) + 1)
    max_e = int(hi).bit_length()
    binom = np.array(
        [1] + [int_binom(k + e - 1, e) for e in range(1, max_e + 1)],
        dtype=np.uint64,
    )
    n = hi - lo
    dk = np.zeros(n, dtype=np.uint64)
    om = np.zeros(n, dtype=np.uint8)
    rem = np.zeros(n, dtype=np.uint64)
    kernel(lo, hi, primes, binom, dk, om, rem)
    return dk, om


def int_binom(a, b):
    import math

    return math.comb(a, b)


def test_at_least_numpy_available():
    kernels = backend.available_kernels()
    assert "numpy" in kernels
    assert backend.BACKEND_NAME in kernels


@pytest.mark.parametrize("lo,hi", [(1, 1000), (999_000, 1_000_000), (1, 2)])
@pytest.mark.parametrize("k", [2, 3, 8])
def test_kernels_agree_exactly(lo, hi, k):
    kernels = backend.available_kernels()
    if len(kernels) < 2:
        pytest.skip("only one kernel built")
    results = {name: _run_kernel(fn, lo, hi, k) for name, fn in kernels.items()}
    names = list(results)
    base_dk, base_om = results[names[0]]
    for other in names[1:]:
        dk, om = results[other]
        assert np.array_equal(base_dk, dk)
        assert np.array_equal(base_om, om)


def test_kernel_values_match_factorization():
    from dkratio.arith import factorize
    from dkratio.divisors import DivisorParams, d_k

    k = 3
    params = DivisorParams(k)
    dk, om = _run_kernel(backend.eval_segment, 500, 1500, k)
    for i, n in enumerate(range(500, 1500)):
        f = factorize(n)
        assert int(dk[i]) == d_k(f, params)
        assert int(om[i]) == len(f.factors)


def test_sum_full_identical_across_kernels():
    kernels = backend.available_kernels()
    if len(kernels) < 2:
        pytest.skip("only one kernel built")
    results = [
        sum_full(10**5, 3, _kernel=fn).exact for fn in kernels.values()
    ]
    assert all(
        (r.num, r.den) == (results[0].num, results[0].den) for r in results
    )


def test_float_kernel_tracks_exact():
    ev = _SegmentEvaluator(10**4, 2, EngineConfig())
    lo, hi = 1, 10**4 + 1
    dk, om = ev.arrays(lo, hi)
    vals = ev.float_values(lo, hi)
    exact = dk.astype(np.float64) / np.power(
        np.float64(2.0), om.astype(np.float64)
    )
    assert np.allclose(vals, exact, rtol=1e-12, atol=0)
