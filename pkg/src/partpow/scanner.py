"""Bounded-search scans for M(d)-style maxima and closed-form bounds.

Given an exact coefficient table, computes for each threshold d the
largest index n <= B whose value sits within d of a k-th power (or of a
power of a fixed base), plus the L(d) stabilization level, stabilization
exponent estimates, and the analytic bound formulas.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Sequence

from .asymptotics import AsymptoticParams
from .powers import delta_k, delta_tilde, iroot_ceil
from .series import CoeffTable


@dataclass(frozen=True)
class ScanRow:
    """One scan result: M = max{n <= bound : qualifying}, or None.

    Values are conjectural in the sense that only n <= bound was
    examined; `bound` is carried so consumers see the caveat.
    """

    k_or_base: int
    d: int
    m: Optional[int]
    bound: int
    witness_delta: Optional[int]


def delta_series(table: CoeffTable, k: int, bound: int) -> list[int]:
    """Delta values for n = 1..bound (index 0 unused)."""
    if bound > table.n_max:
        raise ValueError(f"bound {bound} exceeds table length {table.n_max}")
    if bound < 1:
        raise ValueError("bound must be >= 1")
    out = [0] * (bound + 1)
    values = table.values
    for n in range(1, bound + 1):
        out[n] = delta_k(values[n], k).delta
    return out


def delta_tilde_series(table: CoeffTable, base: int, bound: int) -> list[int]:
    """Fixed-base delta values for n = 1..bound (index 0 unused).

    Walks the powers of the base alongside the table, which is O(bound)
    when values are nondecreasing; falls back to bracketing per entry
    otherwise.  Table entries equal to 0 are at distance 1 (from
    base**0 = 1).
    """
    if bound > table.n_max:
        raise ValueError(f"bound {bound} exceeds table length {table.n_max}")
    if base < 2:
        raise ValueError(f"base must be >= 2, got {base}")
    out = [0] * (bound + 1)
    values = table.values
    power, nxt = 1, base
    monotone_so_far = True
    prev = values[1] if bound >= 1 else 0
    for n in range(1, bound + 1):
        v = values[n]
        if v < prev:
            monotone_so_far = False
        prev = v
        if v == 0:
            out[n] = 1
            continue
        if monotone_so_far:
            while v >= nxt:
                power, nxt = nxt, nxt * base
            out[n] = min(v - power, nxt - v)
        else:
            out[n] = delta_tilde(v, base).delta
    return out


def _rows_from_deltas(
    deltas: Sequence[int],
    key: int,
    d_grid: Sequence[int],
    bound: int,
    qualifies: Callable[[int, int], bool],
) -> list[ScanRow]:
    """Resolve a sorted d grid against a delta series in one reverse pass.

    M(d) is monotone in d, so walking d downward moves the pointer only
    downward; total work is O(bound + len(grid)).
    """
    rows: dict[int, ScanRow] = {}
    ptr = bound
    for d in sorted(set(d_grid), reverse=True):
        while ptr >= 1 and not qualifies(deltas[ptr], d):
            ptr -= 1
        if ptr >= 1:
            rows[d] = ScanRow(key, d, ptr, bound, deltas[ptr])
        else:
            rows[d] = ScanRow(key, d, None, bound, None)
    return [rows[d] for d in sorted(set(d_grid))]


def scan_m(table: CoeffTable, k: int, d_grid: Sequence[int], bound: int) -> list[ScanRow]:
    """M(d) = max{n <= bound : delta_k(f(n)) <= d} for each d in the grid."""
    if not d_grid:
        raise ValueError("d grid must be nonempty")
    deltas = delta_series(table, k, bound)
    return _rows_from_deltas(deltas, k, d_grid, bound, lambda dd, d: dd <= d)


def scan_m_tilde(
    table: CoeffTable,
    base: int,
    d_grid: Sequence[int],
    bound: int,
    include_exact: bool = False,
) -> list[ScanRow]:
    """Fixed-base analogue of scan_m.

    By default n qualifies only when 0 < delta <= d: exact powers of the
    base among the table values do not count as near misses.  This is
    the convention under which the reference data for the fixed-base
    tables was generated; pass include_exact=True for the literal
    delta <= d rule.
    """
    if not d_grid:
        raise ValueError("d grid must be nonempty")
    deltas = delta_tilde_series(table, base, bound)
    if include_exact:
        qualifies = lambda dd, d: dd <= d
    else:
        qualifies = lambda dd, d: 0 < dd <= d
    return _rows_from_deltas(deltas, base, d_grid, bound, qualifies)


def l_of(table: CoeffTable, d: int) -> int:
    """L(d) = max{n >= 1 : f(n) <= d + 1}.

    Requires values nondecreasing from index 1; a non-monotone table is
    routed through its running maximum with a warning.  Raises if the
    table is too short to witness the maximum (f(n_max) <= d + 1).
    """
    if d < 0:
        raise ValueError("d must be >= 0")
    values = table.values
    n_max = table.n_max
    if n_max < 1:
        raise ValueError("table has no entries past index 0")
    monotone = all(values[n] <= values[n + 1] for n in range(1, n_max))
    if monotone:
        levels = values
    else:
        warnings.warn(
            f"table {table.spec.name!r} is not monotone; L(d) computed on the "
            "running maximum",
            stacklevel=2,
        )
        levels = [0] * (n_max + 1)
        running = values[1]
        for n in range(1, n_max + 1):
            running = max(running, values[n])
            levels[n] = running
    if levels[n_max] <= d + 1:
        raise ValueError(
            f"table too short: f({n_max}) = {levels[n_max]} <= d+1 = {d + 1}"
        )
    lo, hi = 1, n_max  # levels[hi] > d+1
    if levels[1] > d + 1:
        raise ValueError(f"no n with f(n) <= d+1 = {d + 1}")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if levels[mid] <= d + 1:
            lo = mid
        else:
            hi = mid
    return lo


class NdEstimate(NamedTuple):
    """Smallest exponent past which M_k(d) sticks at L(d), within k_max."""

    k0: Optional[int]
    stable: bool
    l_value: int
    m_by_k: dict[int, Optional[int]]


def estimate_nd(table: CoeffTable, d: int, k_max: int, bound: int) -> NdEstimate:
    """Scan M_k(d) for k = 2..k_max and locate the stabilization point.

    k0 is the smallest exponent with M_k(d) = L(d) for every k in
    [k0, k_max]; stable is False (and k0 None) when even k_max has not
    stabilized, meaning the estimate is unreliable.
    """
    if k_max < 2:
        raise ValueError("k_max must be >= 2")
    l_value = l_of(table, d)
    m_by_k: dict[int, Optional[int]] = {}
    for k in range(2, k_max + 1):
        m_by_k[k] = scan_m(table, k, [d], bound)[0].m
    k0: Optional[int] = None
    for k in range(k_max, 1, -1):
        if m_by_k[k] == l_value:
            k0 = k
        else:
            break
    stable = m_by_k[k_max] == l_value
    return NdEstimate(k0 if stable else None, stable, l_value, m_by_k)


def half_gap_series(table: CoeffTable, k: int, bound: int) -> list[int]:
    """Round-up binomial-gap sums 2 * (1/2) sum_i C(k,i) f(n)^((k-i)/k).

    Entry n holds the exact integer sum_{i=1..k} C(k,i) * ceil(f(n)^((k-i)/k)),
    an upper bound on twice the half-gap, so comparisons against 2d are
    conservative.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if bound > table.n_max:
        raise ValueError(f"bound {bound} exceeds table length {table.n_max}")
    binom = [math.comb(k, i) for i in range(k + 1)]
    out = [0] * (bound + 1)
    values = table.values
    for n in range(1, bound + 1):
        v = values[n]
        acc = binom[k]  # i = k term: f^0 = 1
        pw = 1
        for i in range(k - 1, 0, -1):
            pw *= v  # pw = v^(k-i)
            acc += binom[i] * iroot_ceil(pw, k)
        out[n] = acc
    return out


def half_gap_lower_scan(table: CoeffTable, k: int, d: int, bound: int) -> Optional[int]:
    """Largest n <= bound whose conservative half-gap sum is <= d."""
    sums = half_gap_series(table, k, bound)
    for n in range(bound, 0, -1):
        if sums[n] <= 2 * d:
            return n
    return None


def scan_half_gap(
    table: CoeffTable, k: int, d_grid: Sequence[int], bound: int
) -> list[ScanRow]:
    """half_gap_lower_scan over a whole d grid in one pass.

    Only valid for tables with nondecreasing values (the sums are then
    nondecreasing and the reverse pointer walk is sound).
    """
    values = table.values
    if any(values[n] > values[n + 1] for n in range(1, bound)):
        raise ValueError("scan_half_gap requires a nondecreasing table")
    sums = half_gap_series(table, k, bound)
    return _rows_from_deltas(sums, k, d_grid, bound, lambda s, d: s <= 2 * d)


def log_big(x: int) -> float:
    """Natural log of a positive int of any size."""
    if x <= 0:
        raise ValueError("log_big argument must be positive")
    if x.bit_length() <= 900:
        return math.log(x)
    shift = x.bit_length() - 64
    return math.log(x >> shift) + shift * math.log(2)


class BoundFormulas(NamedTuple):
    """Closed-form bound evaluations for one (k, d) pair.

    half_gap_approx(n) is the leading-order gap bound (k/2) A(n)^((k-1)/k);
    m_lower_leading / m_heuristic_upper are the proved lower and heuristic
    upper leading terms for M(d); nd_lower1 / nd_lower2 bound the
    stabilization exponent.
    """

    half_gap_approx: Callable[[int], float]
    m_lower_leading: float
    m_heuristic_upper: float
    nd_lower1: int
    nd_lower2: float


def bound_formulas(
    params: AsymptoticParams, k: int, d: int, a_const: Optional[float] = None
) -> BoundFormulas:
    """Evaluate the asymptotic bound formulas in double precision.

    a_const is the coefficient of the loglog term in nd_lower2 and must
    satisfy 0 < a_const < (1-beta)/(beta*ln 2); default is half the
    supremum.  Requires d >= 2 so the log terms are positive.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if d < 2:
        raise ValueError("d must be >= 2 for the log-based formulas")
    beta = float(params.beta)
    c = float(params.c)
    sup_a = (1.0 - beta) / (beta * math.log(2)) if beta < 1 else 0.0
    if a_const is None:
        a_const = sup_a / 2
    if beta < 1 and not 0 < a_const < sup_a:
        raise ValueError(f"a_const must lie in (0, {sup_a:.6g})")
    log_d = log_big(d)
    base = (k / (c * (k - 1))) ** (1.0 / beta)
    m_lower = base * log_d ** (1.0 / beta)
    m_upper = 2 ** (1.0 / beta) * base * log_d ** (1.0 / beta)
    nd1 = d.bit_length()  # floor(log2 d) + 1
    nd2 = log_d / math.log(2) + a_const * math.log(log_d)

    def half_gap_approx(n: int) -> float:
        log_a = params.log_a_value(n)
        try:
            return (k / 2) * math.exp((1.0 - 1.0 / k) * log_a)
        except OverflowError:
            return math.inf

    return BoundFormulas(half_gap_approx, m_lower, m_upper, nd1, nd2)
