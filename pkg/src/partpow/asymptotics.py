"""Asymptotic growth parameters a*n^(-b)*exp(c*n^beta) and certified
evaluation of the main term A(n) with directed rounding.

Parameters are frozen as 192-bit dyadics at construction and treated as
exact from then on, so floor/ceil certification of derived quantities is
well defined and reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Union

import gmpy2
import mpmath
from gmpy2 import mpfr

PARAM_PREC = 192

Real = Union[int, float, str, "mpfr"]


def _freeze(x: Real) -> mpfr:
    with gmpy2.context(precision=PARAM_PREC):
        return mpfr(x)


@dataclass(frozen=True)
class AsymptoticParams:
    """Growth law A(n) = a * n^(-b) * exp(c * n^beta) plus the model's
    relative half-width constant: eps_n = eps_const / n^beta."""

    name: str
    a: mpfr
    b: mpfr
    c: mpfr
    beta: mpfr
    eps_const: mpfr

    def __post_init__(self) -> None:
        for attr in ("a", "b", "c", "beta", "eps_const"):
            object.__setattr__(self, attr, _freeze(getattr(self, attr)))
        if not self.a > 0:
            raise ValueError("a must be positive")
        if not self.c > 0:
            raise ValueError("c must be positive")
        if not self.eps_const > 0:
            raise ValueError("eps_const must be positive")
        if not 0 < self.beta <= 1:
            raise ValueError("beta must lie in (0, 1]")

    def with_eps_const(self, eps_const: Real) -> "AsymptoticParams":
        return AsymptoticParams(self.name, self.a, self.b, self.c, self.beta, eps_const)

    def log_a_value(self, n: int) -> float:
        """ln A(n) in double precision (A itself may overflow a float)."""
        import math

        return (
            math.log(float(self.a))
            - float(self.b) * math.log(n)
            + float(self.c) * n ** float(self.beta)
        )

    def a_value_float(self, n: int) -> float:
        """A(n) in double precision; inf when it overflows."""
        import math

        try:
            return math.exp(self.log_a_value(n))
        except OverflowError:
            return math.inf

    def eps_float(self, n: int) -> float:
        return float(self.eps_const) / n ** float(self.beta)


class ABounds(NamedTuple):
    """Directed-rounding enclosures of A(n) and eps_n at one precision."""

    a_lo: mpfr
    a_hi: mpfr
    eps_lo: mpfr
    eps_hi: mpfr


def a_bounds(params: AsymptoticParams, n: int, prec: int) -> ABounds:
    """Enclose A(n) and eps_n = eps_const/n^beta at precision `prec`.

    Every operation is monotone in its (positive) inputs, so chaining
    MPFR's correctly-rounded ops in one rounding direction yields a
    true bound on the exact value for the frozen dyadic parameters.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    down = gmpy2.context(precision=prec, round=gmpy2.RoundDown)
    up = gmpy2.context(precision=prec, round=gmpy2.RoundUp)
    with up:
        nb_hi = mpfr(n) ** params.beta  # n^beta rounded up
        pow_b_hi = mpfr(n) ** params.b
    with down:
        nb_lo = mpfr(n) ** params.beta
        pow_b_lo = mpfr(n) ** params.b
    with down:
        a_lo = params.a * gmpy2.exp(params.c * nb_lo) / pow_b_hi
        eps_lo = params.eps_const / nb_hi
    with up:
        a_hi = params.a * gmpy2.exp(params.c * nb_hi) / pow_b_lo
        eps_hi = params.eps_const / nb_lo
    return ABounds(a_lo, a_hi, eps_lo, eps_hi)


def _const(expr: str) -> str:
    """Evaluate an mpmath expression to 58 significant digits."""
    with mpmath.workdps(60):
        return mpmath.nstr(eval(expr, {"mp": mpmath}), 58)


_BUILTIN_CACHE: dict[str, AsymptoticParams] = {}

_BUILTIN_DEFS = {
    # name: (a, b, c, beta, eps_const) as mpmath expressions
    "p": (
        "1/(4*mp.sqrt(3))",
        "1",
        "mp.pi*mp.sqrt(2)/mp.sqrt(3)",
        "0.5",
        # second-order term of p(n)/A(n); the sqrt(3/2) factor divides pi
        "mp.sqrt(mp.mpf(3)/2)/mp.pi + mp.pi/(24*mp.sqrt(6))",
    ),
    "overpartition": (
        "mp.mpf(1)/8",
        "1",
        "mp.pi",
        "0.5",
        "1/mp.pi",
    ),
    "strict": (
        "1/(4*mp.root(3, 4))",
        "0.75",
        "mp.pi/mp.sqrt(3)",
        "0.5",
        "3*mp.sqrt(3)/(8*mp.pi) - mp.pi/(48*mp.sqrt(3))",
    ),
    "selfconj": (
        "1/(2**mp.mpf('1.75')*mp.root(3, 4))",
        "0.75",
        "mp.pi/mp.sqrt(6)",
        "0.5",
        "3*mp.sqrt(6)/(8*mp.pi) + mp.pi/(48*mp.sqrt(6))",
    ),
    "nonunitary": (
        "mp.pi/(12*mp.sqrt(2))",
        "1.5",
        "mp.pi*mp.sqrt(2)/mp.sqrt(3)",
        "0.5",
        "3*mp.sqrt(mp.mpf(3)/2)/mp.pi + 13*mp.pi/(24*mp.sqrt(6))",
    ),
    "plane": (
        "mp.zeta(3)**(mp.mpf(7)/36)*mp.exp(mp.zeta(-1, derivative=1))"
        "/(2**(mp.mpf(11)/36)*mp.sqrt(3*mp.pi))",
        "mp.mpf(25)/36",
        "3*mp.zeta(3)**(mp.mpf(1)/3)/2**(mp.mpf(2)/3)",
        "mp.mpf(2)/3",
        "277/(864*(2*mp.zeta(3))**(mp.mpf(1)/3))"
        " - mp.zeta(3)**(mp.mpf(2)/3)/(1440*2**(mp.mpf(1)/3))",
    ),
}


def builtin_params(name: str) -> AsymptoticParams:
    """Growth parameters for a builtin function (Hardy-Ramanujan-style
    laws for p, overpartition, strict, selfconj, nonunitary, plane)."""
    if name not in _BUILTIN_DEFS:
        raise ValueError(f"no asymptotic parameters for {name!r}")
    if name not in _BUILTIN_CACHE:
        a, b, c, beta, eps = (_const(e) for e in _BUILTIN_DEFS[name])
        _BUILTIN_CACHE[name] = AsymptoticParams(name, a, b, c, beta, eps)
    return _BUILTIN_CACHE[name]
