"""Random model for fast-growing counting functions.

Each index n carries a uniform random variable on the integer interval
S_n = [A(n)(1 - eps_n), A(n)(1 + eps_n)].  This module computes S_n with
certified endpoints, exact probabilities of landing near powers, the
analytic bounds on those probabilities, the expected number of perfect
powers over the whole sequence, and seeded Monte Carlo realizations.
"""

from __future__ import annotations

import hashlib
import math
import struct
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, NamedTuple, Optional, Sequence, Union

import gmpy2
from gmpy2 import mpfr

from .asymptotics import AsymptoticParams, a_bounds
from .powers import count_perfect_powers_upto, delta_k, iroot, iroot_ceil

PREC_CAP = 10**6
DENSE_WINDOW_CAP = 10**7


def _floor_exact(x: mpfr) -> int:
    # floor at the operand's own precision is exact; int() of an
    # integral mpfr is then lossless (int(mpfr) rounds to nearest)
    with gmpy2.context(precision=max(x.precision, 2)):
        return int(gmpy2.floor(x))


def _ceil_exact(x: mpfr) -> int:
    with gmpy2.context(precision=max(x.precision, 2)):
        return int(gmpy2.ceil(x))


def _mul_bounds(
    x_lo: mpfr, x_hi: mpfr, y_lo: mpfr, y_hi: mpfr, prec: int
) -> tuple[mpfr, mpfr]:
    """Enclosure of the product of two enclosed reals."""
    with gmpy2.context(precision=prec, round=gmpy2.RoundDown):
        lo = min(x_lo * y_lo, x_lo * y_hi, x_hi * y_lo, x_hi * y_hi)
    with gmpy2.context(precision=prec, round=gmpy2.RoundUp):
        hi = max(x_lo * y_lo, x_lo * y_hi, x_hi * y_lo, x_hi * y_hi)
    return lo, hi


@dataclass(frozen=True)
class ModelInterval:
    """S_n with exact integer endpoints.

    lo = max(1, ceil(A(n)(1 - eps_n))), hi = floor(A(n)(1 + eps_n)),
    both certified by directed rounding.  card may be 0 when the real
    interval straddles no integer (narrow windows at small n); such
    intervals carry no probability mass.
    """

    n: int
    lo: int
    hi: int
    eps_used: float
    a_lo: mpfr
    a_hi: mpfr

    @property
    def card(self) -> int:
        return self.hi - self.lo + 1 if self.hi >= self.lo else 0

    @property
    def a_value(self) -> float:
        return float(self.a_lo + (self.a_hi - self.a_lo) / 2)


def interval_s(params: AsymptoticParams, n: int) -> ModelInterval:
    """Certified S_n for the given growth parameters.

    Starts at precision c*n^beta/ln2 + 64 bits and doubles until both
    endpoint floor/ceil are unambiguous; a hard cap signals pathological
    parameters.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    prec = int(float(params.c) * n ** float(params.beta) / math.log(2)) + 64
    one = mpfr(1)
    while prec <= PREC_CAP:
        ab = a_bounds(params, n, prec)
        with gmpy2.context(precision=prec, round=gmpy2.RoundDown):
            lo_fac_lo = one - ab.eps_hi
            hi_fac_lo = one + ab.eps_lo
        with gmpy2.context(precision=prec, round=gmpy2.RoundUp):
            lo_fac_hi = one - ab.eps_lo
            hi_fac_hi = one + ab.eps_hi
        x_lo, x_hi = _mul_bounds(ab.a_lo, ab.a_hi, lo_fac_lo, lo_fac_hi, prec)
        y_lo, y_hi = _mul_bounds(ab.a_lo, ab.a_hi, hi_fac_lo, hi_fac_hi, prec)
        if x_hi < 1:
            lo_ok, lo = True, 1
        else:
            lo_ok = _ceil_exact(x_lo) == _ceil_exact(x_hi)
            lo = max(1, _ceil_exact(x_lo))
        hi_ok = _floor_exact(y_lo) == _floor_exact(y_hi)
        hi = _floor_exact(y_lo)
        if lo_ok and hi_ok:
            return ModelInterval(n, lo, hi, params.eps_float(n), ab.a_lo, ab.a_hi)
        prec *= 2
    raise ArithmeticError(
        f"endpoint certification for n={n} exceeded {PREC_CAP} bits; "
        "parameters look pathological"
    )


ExactLike = Union[int, str, Fraction]


def synthetic_interval(a_value: ExactLike, eps: ExactLike, n: int = 1) -> ModelInterval:
    """S_n from exact rational center and half-width (for tests/synthetic runs)."""
    a = Fraction(a_value)
    e = Fraction(eps)
    if a <= 0 or e <= 0:
        raise ValueError("a_value and eps must be positive")
    lo = max(1, math.ceil(a * (1 - e)))
    hi = math.floor(a * (1 + e))
    with gmpy2.context(precision=256, round=gmpy2.RoundDown):
        a_lo = mpfr(a.numerator) / mpfr(a.denominator)
    with gmpy2.context(precision=256, round=gmpy2.RoundUp):
        a_hi = mpfr(a.numerator) / mpfr(a.denominator)
    return ModelInterval(n, lo, hi, float(e), a_lo, a_hi)


def count_powers_in_interval(iv: ModelInterval, k: Optional[int] = None) -> int:
    """Number of k-th powers (or of all perfect powers when k is None) in S_n."""
    if iv.card <= 0:
        return 0
    if k is None:
        return count_perfect_powers_upto(iv.hi) - count_perfect_powers_upto(iv.lo - 1)
    if k < 2:
        raise ValueError("k must be >= 2")
    return iroot(iv.hi, k) - iroot(iv.lo - 1, k)


def _near_power_intervals(iv: ModelInterval, k: int, d: int) -> Iterator[tuple[int, int]]:
    """Clipped intervals [m^k - d, m^k + d] cap [lo, hi], in increasing m."""
    m_lo = iroot_ceil(max(iv.lo - d, 0), k)
    m_hi = iroot(iv.hi + d, k)
    if m_hi - m_lo + 1 > DENSE_WINDOW_CAP:
        raise ArithmeticError(
            f"near-power window holds {m_hi - m_lo + 1} candidate powers "
            f"(> {DENSE_WINDOW_CAP}); reduce n or d"
        )
    for m in range(m_lo, m_hi + 1):
        p = m**k
        s = max(iv.lo, p - d)
        e = min(iv.hi, p + d)
        if s <= e:
            yield (s, e)


def prob_delta_merge(iv: ModelInterval, k: int, d: int) -> Fraction:
    """prob_delta by explicit union of overlapping near-power intervals."""
    if iv.card <= 0:
        raise ValueError("interval is empty")
    count = 0
    cur_s: Optional[int] = None
    cur_e = 0
    for s, e in _near_power_intervals(iv, k, d):
        if cur_s is None:
            cur_s, cur_e = s, e
        elif s <= cur_e + 1:
            cur_e = max(cur_e, e)
        else:
            count += cur_e - cur_s + 1
            cur_s, cur_e = s, e
    if cur_s is not None:
        count += cur_e - cur_s + 1
    return Fraction(count, iv.card)


def prob_delta(iv: ModelInterval, k: int, d: int) -> Fraction:
    """Exact P(sample from S_n is within d of a k-th power).

    When consecutive candidate powers all differ by more than 2d the
    clipped intervals are disjoint and are summed directly; otherwise
    they are merged explicitly.
    """
    if iv.card <= 0:
        raise ValueError("interval is empty")
    if k < 2:
        raise ValueError("k must be >= 2")
    if d < 0:
        raise ValueError("d must be >= 0")
    m_lo = iroot_ceil(max(iv.lo - d, 0), k)
    min_gap = (m_lo + 1) ** k - m_lo**k
    if min_gap <= 2 * d:
        return prob_delta_merge(iv, k, d)
    count = sum(e - s + 1 for s, e in _near_power_intervals(iv, k, d))
    return Fraction(count, iv.card)


class LemmaBounds(NamedTuple):
    """Analytic enclosure of the near-power probability at one n.

    Bounds are outward-rounded; `applicable` is False (with reasons)
    where the derivation's side conditions cannot be certified.
    """

    lower: float
    upper: float
    applicable: bool
    reasons: tuple[str, ...]


def _to_float_down(x: mpfr) -> float:
    with gmpy2.context(precision=53, round=gmpy2.RoundDown):
        return float(mpfr(x))


def _to_float_up(x: mpfr) -> float:
    with gmpy2.context(precision=53, round=gmpy2.RoundUp):
        return float(mpfr(x))


def lemma_bounds(
    params: AsymptoticParams, n: int, k: int, d: int, any_power: bool = False
) -> LemmaBounds:
    """Bounds on P(Delta <= d) for one n: fixed k, or any power when
    any_power is True (then k is ignored).

    Fixed-k form:     upper = (2d+1)/(k A^(1-1/k)) + (6d+3)/(2 eps A)
                              + (8d+4) eps^2 / A^(1-1/k)
                      lower = (2d+1)/(k A^(1-1/k)) - (10d+3)/(2 eps A)
    Any-power form:   upper = (2d+1)/(2 sqrt A) + (2d+1)/A^(2/3)
                              + (8d+5) eps^2 / sqrt A
                              + (6d+3) log2(A) / (2 eps A)
                      lower = (2d+1)/(2 sqrt A) - (10d+3)/(2 eps A)
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not any_power and k < 2:
        raise ValueError("k must be >= 2")
    prec = max(128, int(float(params.c) * n ** float(params.beta) / math.log(2)) + 64)
    ab = a_bounds(params, n, prec)
    reasons = []
    with gmpy2.context(precision=prec):
        if not ab.eps_hi <= 0.5:
            reasons.append("eps > 1/2")
        if not ab.eps_lo * ab.a_lo > 1:
            reasons.append("eps*A <= 1")
        if not ab.a_lo > 1:
            reasons.append("A <= 1")
        if not gmpy2.sqrt(ab.a_lo) > 10 * (2 * d + 1):
            reasons.append("sqrt(A) <= 10(2d+1)")
    applicable = not reasons

    # Directed evaluation: denominators are pre-rounded in the opposite
    # direction of the enclosing quotient so every term is a true bound.
    down = gmpy2.context(precision=prec, round=gmpy2.RoundDown)
    up = gmpy2.context(precision=prec, round=gmpy2.RoundUp)
    if any_power:
        with down:
            den1_small = 2 * gmpy2.sqrt(ab.a_lo)
            den2_small = ab.a_lo ** (mpfr(2) / 3)
            den3_small = gmpy2.sqrt(ab.a_lo)
            den4_small = 2 * ab.eps_lo * ab.a_lo
        with up:
            den1_big = 2 * gmpy2.sqrt(ab.a_hi)
            upper = (
                (2 * d + 1) / den1_small
                + (2 * d + 1) / den2_small
                + (8 * d + 5) * ab.eps_hi**2 / den3_small
                + (6 * d + 3) * gmpy2.log2(ab.a_hi) / den4_small
            )
            sub = (10 * d + 3) / den4_small
        with down:
            lower = (2 * d + 1) / den1_big - sub
    else:
        expo = 1 - mpfr(1) / k
        with down:
            alo_expo = ab.a_lo**expo
            den1_small = k * alo_expo
            den2_small = 2 * ab.eps_lo * ab.a_lo
        with up:
            den1_big = k * ab.a_hi**expo
            upper = (
                (2 * d + 1) / den1_small
                + (6 * d + 3) / den2_small
                + (8 * d + 4) * ab.eps_hi**2 / alo_expo
            )
            sub = (10 * d + 3) / den2_small
        with down:
            lower = (2 * d + 1) / den1_big - sub
    return LemmaBounds(_to_float_down(lower), _to_float_up(upper), applicable, tuple(reasons))


class ExpectationResult(NamedTuple):
    """Expected number of perfect powers over the whole model sequence."""

    value: float
    tail_bound: float
    n_max: int


def _tail_bound(params: AsymptoticParams, x: int) -> float:
    """Bound on sum_{n > x} P(sample at n is a perfect power).

    Majorant 1.1/(2 sqrt(A(n)(1 - eps_n))), summed via the explicit term
    at x+1 plus the incomplete-gamma integral bound with b' = b/2,
    c' = c/2.  Returns inf while the asymptotic regime cannot be
    certified at x.
    """
    a = float(params.a)
    b = float(params.b)
    c = float(params.c)
    beta = float(params.beta)
    eps = params.eps_float(x + 1)
    if eps >= 0.5:
        return math.inf
    bp = b / 2
    cp = c / 2
    s = (bp + 1) / beta
    z = cp * (x + 1) ** beta
    if z < 2 * max(s, 1.0) + 8:
        return math.inf  # integral-bound asymptotics not yet trustworthy
    factor = 1.1 / (2 * math.sqrt(a * (1 - eps)))
    explicit = (x + 1) ** bp * math.exp(-cp * (x + 1) ** beta)
    integral = (2 / (beta * cp)) * (x + 1) ** (bp + 1 - beta) * math.exp(
        -cp * (x + 1) ** beta
    )
    return factor * (explicit + integral)


def expectation(
    params: AsymptoticParams, tol: float = 1e-4, n_cap: int = 10**5
) -> ExpectationResult:
    """Sum of exact per-n perfect-power probabilities, truncated once a
    rigorous tail bound drops below tol.

    Empty intervals (card 0) contribute nothing.  Raises when tol is
    unreachable below the hard index cap.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    total = 0.0
    n = 0
    while n < n_cap:
        n += 1
        iv = interval_s(params, n)
        if iv.card >= 1:
            total += count_powers_in_interval(iv) / iv.card
        tail = _tail_bound(params, n)
        if tail < tol:
            return ExpectationResult(total, tail, n)
    raise ArithmeticError(f"tail bound did not reach tol={tol} by n={n_cap}")


# ---------------------------------------------------------------------------
# Seeded Monte Carlo.


def _stream_key(seed: int) -> bytes:
    return (seed % 2**256).to_bytes(32, "little")


def uniform_below(card: int, seed: int, trial: int, n: int) -> int:
    """Unbiased uniform draw from [0, card), deterministic in (seed, trial, n).

    Counter-mode BLAKE2b stream: rejection sampling on the top chunk of
    bit_length(card-1) bits, drawing further blocks as needed.
    """
    if card < 1:
        raise ValueError("card must be >= 1")
    if card == 1:
        return 0
    nbits = (card - 1).bit_length()
    nbytes = (nbits + 7) // 8
    mask = (1 << nbits) - 1
    key = _stream_key(seed)
    block = 0
    buf = b""
    while True:
        if len(buf) < nbytes:
            msg = struct.pack("<QQQ", trial % 2**64, n % 2**64, block)
            buf += hashlib.blake2b(msg, key=key, digest_size=64).digest()
            block += 1
            continue
        r = int.from_bytes(buf[:nbytes], "little") & mask
        buf = buf[nbytes:]
        if r < card:
            return r


@dataclass(frozen=True)
class SimulationReport:
    """Aggregates over seeded trials of the model on a range of n.

    freq_delta_le_d[n]: trials whose sample at n lay within d of a k-th
    power.  realized_m: distribution of the largest qualifying n per
    trial (None when no n qualified).  perfect_power_counts:
    distribution of the number of indices whose sample was a perfect
    power.
    """

    k: int
    d: int
    n_lo: int
    n_hi: int
    trials: int
    seed: int
    freq_delta_le_d: dict[int, int] = field(default_factory=dict)
    realized_m: dict[Optional[int], int] = field(default_factory=dict)
    perfect_power_counts: dict[int, int] = field(default_factory=dict)

    def mean_qualifying(self) -> float:
        """Average number of qualifying indices per trial."""
        return sum(self.freq_delta_le_d.values()) / self.trials

    def mean_perfect_powers(self) -> float:
        return sum(c * t for c, t in self.perfect_power_counts.items()) / self.trials


def simulate(
    params_or_intervals: Union[AsymptoticParams, Sequence[ModelInterval]],
    n_range: tuple[int, int],
    k: int,
    d: int,
    trials: int,
    seed: int,
) -> SimulationReport:
    """Run seeded trials of the model and aggregate exact counts.

    Accepts either growth parameters (intervals are built for each n in
    n_range) or prebuilt intervals.  Deterministic: identical arguments
    give identical reports regardless of execution interleaving.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    n_lo, n_hi = n_range
    if isinstance(params_or_intervals, AsymptoticParams):
        intervals = [interval_s(params_or_intervals, n) for n in range(n_lo, n_hi + 1)]
    else:
        intervals = list(params_or_intervals)
    intervals = [iv for iv in intervals if iv.card >= 1]
    freq: dict[int, int] = {iv.n: 0 for iv in intervals}
    realized: dict[Optional[int], int] = {}
    pp_counts: dict[int, int] = {}
    for trial in range(trials):
        max_qual: Optional[int] = None
        pp = 0
        for iv in intervals:
            x = iv.lo + uniform_below(iv.card, seed, trial, iv.n)
            if delta_k(x, k).delta <= d:
                freq[iv.n] += 1
                if max_qual is None or iv.n > max_qual:
                    max_qual = iv.n
            if x == 1 or gmpy2.is_power(gmpy2.mpz(x)):
                pp += 1
        realized[max_qual] = realized.get(max_qual, 0) + 1
        pp_counts[pp] = pp_counts.get(pp, 0) + 1
    return SimulationReport(k, d, n_lo, n_hi, trials, seed, freq, realized, pp_counts)


def coverage_report(
    params: AsymptoticParams, values: Sequence[int], n_lo: int, n_hi: int
) -> tuple[int, int]:
    """Diagnostic: how many actual f(n) values land inside S_n.

    Returns (inside, total).  Not an invariant; the model's eps_n is an
    asymptotic statement and small n may fall outside.
    """
    inside = 0
    total = 0
    for n in range(n_lo, n_hi + 1):
        iv = interval_s(params, n)
        total += 1
        if iv.card >= 1 and iv.lo <= values[n] <= iv.hi:
            inside += 1
    return inside, total
