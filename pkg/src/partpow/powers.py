"""Exact big-integer power arithmetic.

Floor k-th roots, distance to the nearest k-th power, distance to the
nearest power of a fixed base, and perfect-power detection/counting.
All functions are pure and operate on arbitrary-precision ints.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import gmpy2

SIDE_BELOW = "below"
SIDE_ABOVE = "above"
SIDE_EXACT = "exact"


def iroot(x: int, k: int) -> int:
    """Floor k-th root: the unique r >= 0 with r**k <= x < (r+1)**k."""
    if k < 1:
        raise ValueError(f"iroot exponent must be >= 1, got {k}")
    if x < 0:
        raise ValueError("iroot argument must be nonnegative")
    if x == 0:
        return 0
    r, _ = gmpy2.iroot(gmpy2.mpz(x), k)
    return int(r)


def iroot_ceil(x: int, k: int) -> int:
    """Ceiling k-th root: the unique r >= 0 with (r-1)**k < x <= r**k."""
    if k < 1:
        raise ValueError(f"iroot exponent must be >= 1, got {k}")
    if x < 0:
        raise ValueError("iroot argument must be nonnegative")
    if x == 0:
        return 0
    r, exact = gmpy2.iroot(gmpy2.mpz(x), k)
    return int(r) if exact else int(r) + 1


@dataclass(frozen=True)
class PowerDistance:
    """Distance from ``value`` to the nearest k-th power.

    Invariants: floor_root**k <= value < (floor_root+1)**k and
    delta = min(value - floor_root**k, (floor_root+1)**k - value).
    """

    value: int
    k: int
    floor_root: int
    delta: int
    nearest: int
    side: str


def delta_k(x: int, k: int) -> PowerDistance:
    """Distance from x to the nearest k-th power (k >= 2).

    Ties between the bracketing powers are resolved toward the lower
    power. x = 0 is permitted and is itself a k-th power.
    """
    if k < 2:
        raise ValueError(f"delta_k exponent must be >= 2, got {k}")
    if x < 0:
        raise ValueError("delta_k argument must be nonnegative")
    r = iroot(x, k)
    below = x - r**k
    above = (r + 1) ** k - x
    if below == 0:
        return PowerDistance(x, k, r, 0, x, SIDE_EXACT)
    if below <= above:
        return PowerDistance(x, k, r, below, r**k, SIDE_BELOW)
    return PowerDistance(x, k, r, above, (r + 1) ** k, SIDE_ABOVE)


class BaseDistance(NamedTuple):
    """Distance from a value to the nearest power of a fixed base."""

    delta: int
    exponent: int
    power: int


def delta_tilde(x: int, base: int) -> BaseDistance:
    """Distance from x >= 1 to the nearest base**k with k >= 0.

    The exponent k = 0 is a candidate, so 1 is always an admissible
    power.  Ties resolve toward the lower power.
    """
    if base < 2:
        raise ValueError(f"delta_tilde base must be >= 2, got {base}")
    if x < 1:
        raise ValueError("delta_tilde argument must be >= 1")
    # bracket x between consecutive powers of the base
    k = 0
    power = 1
    nxt = base
    while nxt <= x:
        power, nxt = nxt, nxt * base
        k += 1
    below = x - power
    above = nxt - x
    if below <= above:
        return BaseDistance(below, k, power)
    return BaseDistance(above, k + 1, nxt)


def mobius(n: int) -> int:
    """Mobius function by trial division (n stays small: root exponents)."""
    if n < 1:
        raise ValueError("mobius argument must be >= 1")
    result = 1
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    if m > 1:
        result = -result
    return result


def count_perfect_powers_upto(x: int) -> int:
    """Number of perfect powers m = t**k (k >= 2, t >= 1) with m <= x.

    1 is counted once.  Uses Mobius inclusion-exclusion over exponents:
    1 + sum_{j=2}^{log2 x} (-mu(j)) * (iroot(x, j) - 1).
    """
    if x < 1:
        return 0
    total = 1
    for j in range(2, x.bit_length()):
        mu = mobius(j)
        if mu != 0:
            total -= mu * (iroot(x, j) - 1)
    return total


def is_perfect_power(x: int) -> Optional[tuple[int, int]]:
    """Canonical perfect-power decomposition with maximal exponent.

    Returns (m, k) with m**k == x and k >= 2 maximal, or None if x is
    not a perfect power.  By convention 1 -> (1, 2).
    """
    if x < 1:
        raise ValueError("is_perfect_power argument must be >= 1")
    if x == 1:
        return (1, 2)
    if not gmpy2.is_power(gmpy2.mpz(x)):
        return None
    base = x
    k_total = 1
    q = 2
    while q <= base.bit_length():
        r, exact = gmpy2.iroot(gmpy2.mpz(base), q)
        while exact:
            base = int(r)
            k_total *= q
            r, exact = gmpy2.iroot(gmpy2.mpz(base), q)
        q = int(gmpy2.next_prime(q))
    if k_total < 2:
        return None
    return (base, k_total)
