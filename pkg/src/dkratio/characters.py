"""Dirichlet characters mod q with exact root-of-unity arithmetic.

The unit group (Z/qZ)* is decomposed via CRT into cyclic components:
a primitive root for each odd prime power, and the {-1, 5} generator
pair for 2^a with a >= 3.  A character is an exponent vector over those
generators; its value at n is the root of unity exp(2*pi*i*t/L) with an
exactly computed integer exponent t (L = lcm of the generator orders).
Floats appear only at the final rendering step, which keeps the
orthogonality and partial-sum identities accurate to ~1e-12.

Characters are enumerated in lexicographic exponent-vector order; the
principal character always has index 0.  This order is part of the
stable output contract.
"""

from __future__ import annotations

import math
from functools import lru_cache
from itertools import product
from typing import Optional, Tuple

import numpy as np

from .arith import factorize
from .errors import DomainError, NumericalError
from .sieve import DEFAULT_CONFIG, EngineConfig, residue_class_sums

ComplexValue = complex  # values live in the unit circle union {0}


def _primitive_root_odd(p: int, e: int) -> int:
    """A generator of (Z/p^eZ)* for odd prime p."""
    phi_p = p - 1
    prime_factors = [f for f, _ in factorize(phi_p).factors]
    g = 2
    while any(pow(g, phi_p // ell, p) == 1 for ell in prime_factors):
        g += 1
    if e > 1 and pow(g, p - 1, p * p) == 1:
        g += p  # g was not primitive mod p^2; g + p always is
    return g


def _component_generators(p: int, e: int, q: int):
    """Generators (residue mod q, order) of the p^e component of (Z/qZ)*."""
    pe = p**e
    rest = q // pe

    def lift(r: int) -> int:
        # CRT: congruent to r mod p^e and to 1 mod the complement.
        if rest == 1:
            return r % q
        inv = pow(pe, -1, rest)
        return (r + pe * (((1 - r) * inv) % rest)) % q

    if p == 2:
        if e == 1:
            return []
        if e == 2:
            return [(lift(3), 2)]
        return [(lift(pe - 1), 2), (lift(5), 2 ** (e - 2))]
    g = _primitive_root_odd(p, e)
    return [(lift(g % pe), (p - 1) * p ** (e - 1))]


class Character:
    """One Dirichlet character: an exponent vector over the group generators."""

    __slots__ = ("group", "exponents", "index", "is_principal")

    def __init__(self, group: "CharacterGroup", exponents: Tuple[int, ...],
                 index: int):
        self.group = group
        self.exponents = exponents
        self.index = index
        self.is_principal = all(e == 0 for e in exponents)

    def value_exponent(self, n: int) -> Optional[Tuple[int, int]]:
        """Exact value as (t, L) with chi(n) = exp(2*pi*i*t/L); None when
        gcd(n, q) > 1."""
        g = self.group
        r = n % g.q
        if not g._unit[r]:
            return None
        t = 0
        for e_j, w_j, d_j in zip(self.exponents, g._weights, g._dlog[r]):
            t += e_j * w_j * int(d_j)
        return t % g._order_lcm, g._order_lcm

    def __call__(self, n: int) -> complex:
        te = self.value_exponent(n)
        if te is None:
            return 0j
        return complex(self.group._roots[te[0]])

    def __repr__(self):
        return (
            f"Character(q={self.group.q}, index={self.index}, "
            f"exponents={self.exponents})"
        )


class CharacterGroup:
    """All phi(q) Dirichlet characters mod q.

    Immutable after construction; instances are cached and freely
    shareable across threads.
    """

    def __init__(self, q: int):
        if q < 1:
            raise DomainError("character_group requires q >= 1")
        self.q = q
        gens = []
        for p, e in factorize(q).factors:
            gens.extend(_component_generators(p, e, q))
        self.generators: Tuple[Tuple[int, int], ...] = tuple(gens)
        orders = tuple(o for _, o in self.generators)
        self._orders = orders
        self._order_lcm = math.lcm(*orders) if orders else 1
        self._weights = tuple(self._order_lcm // o for o in orders)

        # Discrete logs: enumerate all exponent tuples once, O(phi(q)).
        r_gens = len(self.generators)
        self._dlog = np.full((q, r_gens), -1, dtype=np.int64)
        self._unit = np.zeros(q, dtype=bool)
        pow_tables = []
        for g, o in self.generators:
            row = [1] * o
            for j in range(1, o):
                row[j] = row[j - 1] * g % q
            pow_tables.append(row)
        for tup in product(*(range(o) for o in orders)):
            res = 1 % q
            for row, t in zip(pow_tables, tup):
                res = res * row[t] % q
            self._unit[res] = True
            self._dlog[res] = tup
        self.characters: Tuple[Character, ...] = tuple(
            Character(self, tup, idx)
            for idx, tup in enumerate(product(*(range(o) for o in orders)))
        )
        L = self._order_lcm
        self._roots = np.exp(2j * np.pi * np.arange(L) / L)
        self._table: Optional[np.ndarray] = None
        self._twisted_cache: dict = {}

    def __len__(self):
        return len(self.characters)

    def __repr__(self):
        return f"CharacterGroup(q={self.q}, size={len(self.characters)})"

    @property
    def principal(self) -> Character:
        return self.characters[0]

    @property
    def value_table(self) -> np.ndarray:
        """Complex matrix [n_characters, q] of chi(r) by residue column."""
        if self._table is None:
            n_chars = len(self.characters)
            tbl = np.zeros((n_chars, self.q), dtype=np.complex128)
            unit_idx = np.nonzero(self._unit)[0]
            E = np.array(
                [
                    [e * w for e, w in zip(ch.exponents, self._weights)]
                    for ch in self.characters
                ],
                dtype=np.int64,
            ).reshape(n_chars, len(self.generators))
            D = self._dlog[unit_idx]
            T = (E @ D.T) % self._order_lcm
            tbl[:, unit_idx] = self._roots[T]
            tbl.setflags(write=False)
            self._table = tbl
        return self._table


@lru_cache(maxsize=32)
def character_group(q: int) -> CharacterGroup:
    """The cached character group mod q."""
    return CharacterGroup(q)


def char_value(chi: Character, n: int) -> complex:
    """chi(n): 0 off the units, an exact root of unity on them."""
    return chi(n)


def orthogonality_indicator(q: int, a: int, n: int) -> float:
    """(1/phi(q)) * sum over chi of conj(chi(a)) * chi(n).

    Equals 1 when n = a (mod q), 0 otherwise, up to float rendering.
    """
    if math.gcd(a, q) != 1:
        raise DomainError(f"gcd(a, q) must be 1, got gcd({a}, {q})")
    group = character_group(q)
    tbl = group.value_table
    val = np.vdot(tbl[:, a % q], tbl[:, n % q]) / len(group)
    return float(val.real)


def char_partial_sum(chi: Character, y: int) -> complex:
    """Sum of chi(m) for m <= y, accumulated as exact exponent counts."""
    if y < 1:
        raise DomainError("char_partial_sum requires y >= 1")
    g = chi.group
    q = g.q
    L = g._order_lcm
    counts = [0] * L
    for r in range(q):
        if not g._unit[r]:
            continue
        if r == 0:
            c = y // q  # only q = 1 has residue 0 as a unit
        elif r <= y:
            c = (y - r) // q + 1
        else:
            c = 0
        if c:
            t, _ = chi.value_exponent(r)
            counts[t] += c
    return complex(np.dot(counts, g._roots))


def _twisted_vector(group: CharacterGroup, x: int, k: int,
                    config: EngineConfig) -> np.ndarray:
    """S_chi(x) for every character, from one shared bulk pass."""
    key = (x, k)
    if key not in group._twisted_cache:
        class_sums = residue_class_sums(x, k, group.q, config)
        tf = np.array([float(c) for c in class_sums])
        group._twisted_cache[key] = group.value_table @ tf
    return group._twisted_cache[key]


def twisted_sum(chi: Character, x: int, k: int,
                config: EngineConfig = DEFAULT_CONFIG) -> complex:
    """S_chi(x) = sum over n <= x of chi(n) * D_k(n).

    For the principal character this equals the coprime-restricted sum.
    """
    return complex(_twisted_vector(chi.group, x, k, config)[chi.index])


def ap_sum_via_characters(x: int, k: int, q: int, a: int,
                          config: EngineConfig = DEFAULT_CONFIG) -> float:
    """Progression sum reconstructed through the character decomposition:
    (1/phi(q)) * sum over chi of conj(chi(a)) * S_chi(x)."""
    if math.gcd(a, q) != 1:
        raise DomainError(f"gcd(a, q) must be 1, got gcd({a}, {q})")
    group = character_group(q)
    vec = _twisted_vector(group, x, k, config)
    val = np.vdot(group.value_table[:, a % q], vec) / len(group)
    if abs(val.imag) > 1e-8 * max(abs(val), 1e-30):
        raise NumericalError(
            f"imaginary residue {val.imag:.3e} exceeds tolerance for "
            f"x={x}, k={k}, q={q}, a={a}"
        )
    return float(val.real)


def pv_ratio(q: int) -> float:
    """max over non-principal chi and y <= q of
    |sum_{m<=y} chi(m)| / (sqrt(q) * log(q))."""
    if q < 3:
        raise DomainError("pv_ratio requires q >= 3")
    group = character_group(q)
    tbl = group.value_table
    cols = np.arange(1, q + 1) % q
    cums = np.cumsum(tbl[:, cols], axis=1)
    rows = [ch.index for ch in group.characters if not ch.is_principal]
    mx = float(np.abs(cums[rows]).max())
    return mx / (math.sqrt(q) * math.log(q))
