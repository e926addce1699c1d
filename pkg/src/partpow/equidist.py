"""Fractional parts of f(n)^(1/k) and uniformity diagnostics.

Roots are extracted with MPFR directed rounding at adaptive precision so
every fractional part carries a certified absolute error bound (target
2^-64).  The Kolmogorov-Smirnov statistic is computed exactly from the
sorted samples.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import gmpy2
from gmpy2 import mpfr

from ._util import pmap
from .powers import iroot
from .series import CoeffTable

FRAC_ERR_TARGET = 2.0**-64
GUARD_BITS = 96


@dataclass(frozen=True)
class FracSample:
    """Fractional part of value^(1/k) with a certified error bound.

    frac is an MPFR value at the working precision; err_bound is the
    width of the certifying interval (always <= FRAC_ERR_TARGET; may
    underflow to 0.0 as a float when the interval is far narrower).
    """

    n: Optional[int]
    k: int
    frac: mpfr
    err_bound: float
    exact: bool


def frac_root(x: int, k: int, n: Optional[int] = None) -> FracSample:
    """Fractional part of x^(1/k), certified to within FRAC_ERR_TARGET.

    Exact k-th powers return frac = 0 with exact=True.  Otherwise the
    root is enclosed by a directed-rounding interval at precision
    bits(x)/k + 96, doubling until the interval is narrower than the
    target and provably inside (0, 1).
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if x < 1:
        raise ValueError("x must be >= 1")
    r = iroot(x, k)
    if r**k == x:
        return FracSample(n, k, mpfr(0), 0.0, True)
    prec = x.bit_length() // k + GUARD_BITS
    while True:
        with gmpy2.context(precision=prec, round=gmpy2.RoundDown):
            lo = gmpy2.rootn(mpfr(x), k) - r
        with gmpy2.context(precision=prec, round=gmpy2.RoundUp):
            hi = gmpy2.rootn(mpfr(x), k) - r
        width = hi - lo
        if width <= FRAC_ERR_TARGET and lo > 0 and hi < 1:
            with gmpy2.context(precision=prec):
                frac = lo + (hi - lo) / 2
            return FracSample(n, k, frac, float(width), False)
        prec *= 2
        if prec > 10**6:
            raise ArithmeticError(f"precision escalation ran away for x^(1/{k})")


def collect_fracs(table: CoeffTable, k: int, n_max: int) -> list[FracSample]:
    """Fractional parts of f(n)^(1/k) for 1 <= n <= n_max."""
    if n_max > table.n_max:
        raise ValueError(f"n_max {n_max} exceeds table length {table.n_max}")
    values = table.values
    return pmap(lambda n: frac_root(values[n], k, n), range(1, n_max + 1))


def ks_statistic(fracs: Sequence[float]) -> float:
    """Exact KS distance of a sample from the uniform law on [0, 1).

    With sorted samples u_(1..N) the supremum of |F_N(x) - x| over the
    step EDF is max_i max(i/N - u_i, u_i - (i-1)/N).
    """
    if not fracs:
        raise ValueError("KS statistic needs at least one sample")
    n = len(fracs)
    xs = sorted(fracs)
    d = 0.0
    for i, u in enumerate(xs, start=1):
        d = max(d, i / n - u, u - (i - 1) / n)
    return d


@dataclass(frozen=True)
class KSReport:
    """KS statistic plus an equal-width histogram of the samples."""

    n_samples: int
    k: int
    d_stat: float
    bins: int
    histogram: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 0.0 <= self.d_stat <= 1.0:
            raise ValueError("KS statistic out of [0, 1]")
        if sum(self.histogram) != self.n_samples:
            raise ValueError("histogram does not sum to the sample count")


def ks_report(table: CoeffTable, k: int, n_max: int, bins: int = 50) -> KSReport:
    """Collect fractional parts for n <= n_max and summarize uniformity."""
    if bins < 1:
        raise ValueError("bins must be >= 1")
    samples = collect_fracs(table, k, n_max)
    fracs = [float(s.frac) for s in samples]
    counts = [0] * bins
    for u in fracs:
        idx = int(u * bins)
        if idx == bins:  # u is certified < 1, guard the float edge anyway
            idx = bins - 1
        counts[idx] += 1
    return KSReport(len(fracs), k, ks_statistic(fracs), bins, tuple(counts))
