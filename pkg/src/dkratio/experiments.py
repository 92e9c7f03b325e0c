"""Reproduction harness: reference-table reports, error curves, growth checks.

Reports are plain dataclasses with a stable to_csv rendering.  Reference
4-decimal values live in a versioned fixture (data/reference_tables.json)
so tolerance policy and fixtures evolve independently of the logic.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import euler, sieve
from .arith import powerful_numbers_up_to
from .errors import DomainError, InsufficientDataError
from .sieve import DEFAULT_CONFIG, EngineConfig

DEFAULT_X_GRID = (10_000, 30_000, 100_000, 300_000, 1_000_000)


@lru_cache(maxsize=1)
def reference_tables() -> dict:
    """The versioned fixture of published 4-decimal reference values."""
    path = resources.files("dkratio").joinpath("data/reference_tables.json")
    return json.loads(path.read_text())


def _fmt(v: float) -> str:
    return format(v, ".17g")


# ---------------------------------------------------------------------------
# error curves and exponent fits


@dataclass(frozen=True)
class ErrorCurve:
    """Residual sum_value - main_term along an ascending x grid.

    normalized_residual = |residual| / x^(1/2 + epsilon).
    """

    k: int
    q: int
    a: Optional[int]
    mode: str
    epsilon: float
    rows: Tuple[Tuple[int, float, float, float, float], ...]
    # row = (x, sum_value, main_term, residual, normalized_residual)

    def to_csv(self, out) -> None:
        out.write("x,sum_value,main_term,residual,normalized_residual\n")
        for x, s, m, r, nr in self.rows:
            out.write(f"{x},{_fmt(s)},{_fmt(m)},{_fmt(r)},{_fmt(nr)}\n")

    def csv_name(self) -> str:
        a = self.a if self.a is not None else 0
        return f"error_curve_{self.k}_{self.q}_{a}.csv"


@dataclass(frozen=True)
class ExponentFit:
    slope: float
    intercept: float
    r_squared: float
    points_used: int


def error_curve(k: int, q: int, a: Optional[int],
                x_grid: Sequence[int] = DEFAULT_X_GRID,
                mode: str = "progression",
                config: EngineConfig = DEFAULT_CONFIG) -> ErrorCurve:
    """One residual row per grid point for the requested sum family."""
    if not x_grid:
        raise DomainError("error_curve requires a nonempty grid")
    if list(x_grid) != sorted(set(int(x) for x in x_grid)):
        raise DomainError("x grid must be strictly ascending")
    rows = []
    for x in x_grid:
        if mode == "full":
            res = sieve.sum_full(int(x), k, config)
        elif mode == "coprime":
            res = sieve.sum_coprime(int(x), k, q, config)
        elif mode == "progression":
            if a is None:
                raise DomainError("progression curves require a residue a")
            res = sieve.sum_progression(int(x), k, q, a, config)
        else:
            raise DomainError(f"unknown mode {mode!r}")
        normalized = abs(res.residual) / float(x) ** (0.5 + config.epsilon)
        rows.append((int(x), res.approx, res.main_term, res.residual, normalized))
    return ErrorCurve(
        k=k, q=q, a=a, mode=mode, epsilon=config.epsilon, rows=tuple(rows)
    )


def fit_error_exponent(curve: ErrorCurve) -> ExponentFit:
    """Least-squares slope of log|residual| against log x.

    Rows with |residual| < 1e-9 carry no exponent information and are
    dropped; fewer than 3 usable rows is an error.
    """
    xs = []
    ys = []
    for x, _, _, residual, _ in curve.rows:
        if abs(residual) < 1e-9:
            continue
        xs.append(math.log(x))
        ys.append(math.log(abs(residual)))
    if len(xs) < 3:
        raise InsufficientDataError(
            f"exponent fit needs >= 3 usable rows, got {len(xs)}"
        )
    xa = np.array(xs)
    ya = np.array(ys)
    slope, intercept = np.polyfit(xa, ya, 1)
    pred = slope * xa + intercept
    ss_res = float(np.sum((ya - pred) ** 2))
    ss_tot = float(np.sum((ya - ya.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else max(0.0, 1.0 - ss_res / ss_tot)
    return ExponentFit(
        slope=float(slope),
        intercept=float(intercept),
        r_squared=min(1.0, r2),
        points_used=len(xs),
    )


# ---------------------------------------------------------------------------
# table reproduction reports


@dataclass(frozen=True)
class ATableReport:
    prime_limit: int
    tolerance: float
    rows: Tuple[Tuple[int, float, float, float], ...]  # (k, computed, reference, diff)

    @property
    def max_abs_diff(self) -> float:
        return max(r[3] for r in self.rows)

    @property
    def all_within(self) -> bool:
        return all(r[3] <= self.tolerance for r in self.rows)

    def to_csv(self, out) -> None:
        out.write("k,computed,reference,abs_diff\n")
        for k, c, ref, d in self.rows:
            out.write(f"{k},{_fmt(c)},{_fmt(ref)},{_fmt(d)}\n")

    csv_name = staticmethod(lambda: "a_table.csv")


@dataclass(frozen=True)
class GTableReport:
    prime_limit: int
    tolerance: float
    rows: Tuple[Tuple[int, int, float, float, float], ...]
    # (k, q, computed, reference, diff)

    @property
    def max_abs_diff(self) -> float:
        return max(r[4] for r in self.rows)

    @property
    def all_within(self) -> bool:
        return all(r[4] <= self.tolerance for r in self.rows)

    def to_csv(self, out) -> None:
        out.write("k,q,computed,reference,abs_diff\n")
        for k, q, c, ref, d in self.rows:
            out.write(f"{k},{q},{_fmt(c)},{_fmt(ref)},{_fmt(d)}\n")

    csv_name = staticmethod(lambda: "g_table.csv")


def reproduce_A_table(prime_limit: int = 10**6) -> ATableReport:
    """Computed vs reference A_k for k = 2..8."""
    fixture = reference_tables()
    tol = float(fixture["tolerance"])
    rows = []
    for k_str, ref in sorted(fixture["a_table"].items(), key=lambda kv: int(kv[0])):
        k = int(k_str)
        computed = euler.compute_A_k(k, prime_limit).value
        rows.append((k, computed, float(ref), abs(computed - float(ref))))
    return ATableReport(prime_limit=prime_limit, tolerance=tol, rows=tuple(rows))


def reproduce_G_table(prime_limit: int = 10**6) -> GTableReport:
    """Computed vs reference G_k(q)/phi(q) over k = 2..8, q = 2..9."""
    fixture = reference_tables()
    tol = float(fixture["tolerance"])
    rows = []
    table = fixture["ap_coefficient_table"]
    for k_str in sorted(table, key=int):
        k = int(k_str)
        for q_str in sorted(table[k_str], key=int):
            q = int(q_str)
            ref = float(table[k_str][q_str])
            computed = euler.ap_leading_coefficient(q, k, prime_limit)
            rows.append((k, q, computed, ref, abs(computed - ref)))
    return GTableReport(prime_limit=prime_limit, tolerance=tol, rows=tuple(rows))


# ---------------------------------------------------------------------------
# growth checks


@dataclass(frozen=True)
class GrowthReport:
    k: int
    rows: Tuple[Tuple[int, float, float, float], ...]
    # (x, sum_abs_g, normalizer, ratio)

    @property
    def max_min_ratio(self) -> float:
        ratios = [r[3] for r in self.rows]
        return max(ratios) / min(ratios)

    def to_csv(self, out) -> None:
        out.write("k,x,sum_abs_g,normalizer,ratio\n")
        for x, s, norm, ratio in self.rows:
            out.write(f"{self.k},{x},{_fmt(s)},{_fmt(norm)},{_fmt(ratio)}\n")

    csv_name = staticmethod(lambda: "growth_gk.csv")


def growth_check_abs_g(k: int, x_grid: Sequence[int]) -> GrowthReport:
    """sum_abs_g_k(x, k) / (sqrt(x) * (log x)^(k-2)) along the grid."""
    if len(x_grid) < 3:
        raise DomainError("growth check requires >= 3 grid points")
    if list(x_grid) != sorted(set(int(x) for x in x_grid)):
        raise DomainError("x grid must be strictly ascending")
    rows = []
    for x in x_grid:
        x = int(x)
        value = float(sieve.sum_abs_g_k(x, k))
        normalizer = math.sqrt(x) * math.log(x) ** (k - 2)
        rows.append((x, value, normalizer, value / normalizer))
    return GrowthReport(k=k, rows=tuple(rows))


@dataclass(frozen=True)
class PowerfulDensityReport:
    rows: Tuple[Tuple[int, int, float], ...]  # (t, count, count/sqrt(t))

    def to_csv(self, out) -> None:
        out.write("t,count,ratio\n")
        for t, c, ratio in self.rows:
            out.write(f"{t},{c},{_fmt(ratio)}\n")

    csv_name = staticmethod(lambda: "powerful_density.csv")


def powerful_density_check(t_grid: Sequence[int]) -> PowerfulDensityReport:
    """count of powerful n <= t over sqrt(t); approaches ~2.17 from below."""
    if list(t_grid) != sorted(set(int(t) for t in t_grid)):
        raise DomainError("t grid must be strictly ascending")
    rows = []
    for t in t_grid:
        t = int(t)
        count = len(powerful_numbers_up_to(t))
        rows.append((t, count, count / math.sqrt(t)))
    return PowerfulDensityReport(rows=tuple(rows))


def report_to_string(report) -> str:
    buf = io.StringIO()
    report.to_csv(buf)
    return buf.getvalue()
