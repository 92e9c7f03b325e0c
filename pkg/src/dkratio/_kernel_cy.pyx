# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled segment kernel: d_k(n) and omega(n) over a contiguous range.

Same contract as the numpy fallback: fill dk (u64), om (u8) and rem
(u64) in place for n in [lo, hi), dividing out the base primes and
treating any remaining rem > 1 as a single prime > sqrt(x).
"""


def eval_segment(unsigned long long lo,
                 unsigned long long hi,
                 const long long[::1] primes,
                 const unsigned long long[::1] binom,
                 unsigned long long[::1] dk,
                 unsigned char[::1] om,
                 unsigned long long[::1] rem):
    cdef Py_ssize_t m = <Py_ssize_t> (hi - lo)
    cdef Py_ssize_t nprimes = primes.shape[0]
    cdef Py_ssize_t i, j, idx
    cdef unsigned long long p, n, start, r
    cdef int e
    with nogil:
        for i in range(m):
            dk[i] = 1
            om[i] = 0
            rem[i] = lo + <unsigned long long> i
        for j in range(nprimes):
            p = <unsigned long long> primes[j]
            start = ((lo + p - 1) // p) * p
            n = start
            while n < hi:
                idx = <Py_ssize_t> (n - lo)
                r = rem[idx]
                e = 0
                while r % p == 0:
                    r //= p
                    e += 1
                rem[idx] = r
                dk[idx] *= binom[e]
                om[idx] += 1
                n += p
        for i in range(m):
            if rem[i] > 1:
                dk[i] *= binom[1]
                om[i] += 1
