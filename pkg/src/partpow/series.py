"""Exact coefficient tables for products prod_{a>=1} (1 - x^a)^(-e_a).

A ProductSpec describes the exponents e_a through residue-class rules
plus pointwise overrides; build_coeff_table expands the product exactly
with big-integer arithmetic.  Brute-force enumeration counters for the
builtin functions live here too, as independent test oracles.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence, TextIO

BUILTIN_NAMES = (
    "p",
    "overpartition",
    "strict",
    "selfconj",
    "nonunitary",
    "plane",
    "colored2",
)


@dataclass(frozen=True)
class Rule:
    """Adds u + v*a to e_a for every a == res (mod mod)."""

    mod: int
    res: int
    u: int
    v: int

    def __post_init__(self) -> None:
        if self.mod < 1:
            raise ValueError(f"rule modulus must be >= 1, got {self.mod}")
        if not 0 <= self.res < self.mod:
            raise ValueError(f"rule residue {self.res} out of range for modulus {self.mod}")


@dataclass(frozen=True)
class ProductSpec:
    """Finite description of the exponents of prod (1 - x^a)^(-e_a).

    Rule contributions sum across rules; overrides add on top.
    """

    name: str
    rules: tuple[Rule, ...] = ()
    overrides: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "overrides", dict(self.overrides))
        for a in self.overrides:
            if a < 1:
                raise ValueError(f"override index must be >= 1, got {a}")

    def exponent(self, a: int) -> int:
        """Effective exponent e_a; O(#rules)."""
        if a < 1:
            raise ValueError("exponent index must be >= 1")
        e = 0
        for rule in self.rules:
            if a % rule.mod == rule.res:
                e += rule.u + rule.v * a
        return e + self.overrides.get(a, 0)

    def to_json(self) -> str:
        return json.dumps(
            {
                "name": self.name,
                "rules": [
                    {"mod": r.mod, "res": r.res, "u": r.u, "v": r.v} for r in self.rules
                ],
                "overrides": {str(a): d for a, d in sorted(self.overrides.items())},
            }
        )

    @staticmethod
    def from_json(text: str) -> "ProductSpec":
        data = json.loads(text)
        rules = tuple(
            Rule(r["mod"], r["res"], r["u"], r["v"]) for r in data.get("rules", ())
        )
        overrides = {int(a): int(d) for a, d in data.get("overrides", {}).items()}
        return ProductSpec(data["name"], rules, overrides)


def builtin_spec(name: str) -> ProductSpec:
    """Spec for a builtin counting function.

    Recognized names: p, overpartition, strict, selfconj, nonunitary,
    plane, colored2, colored<r> (r >= 1), and parts:<a1,a2,...> for
    partitions with parts restricted to a finite set.
    """
    if name == "p":
        return ProductSpec("p", (Rule(1, 0, 1, 0),))
    if name == "overpartition":
        # (1+x^a) = (1-x^2a)/(1-x^a): exponent 2 everywhere, minus 1 on evens
        return ProductSpec("overpartition", (Rule(1, 0, 2, 0), Rule(2, 0, -1, 0)))
    if name == "strict":
        return ProductSpec("strict", (Rule(2, 1, 1, 0),))
    if name == "selfconj":
        # distinct odd parts: prod_{a odd} (1+x^a)
        return ProductSpec("selfconj", (Rule(2, 1, 1, 0), Rule(4, 2, -1, 0)))
    if name == "nonunitary":
        return ProductSpec("nonunitary", (Rule(1, 0, 1, 0),), {1: -1})
    if name == "plane":
        return ProductSpec("plane", (Rule(1, 0, 0, 1),))
    if name == "colored2":
        return ProductSpec("colored2", (Rule(1, 0, 2, 0),))
    m = re.fullmatch(r"colored(\d+)", name)
    if m:
        r = int(m.group(1))
        if r < 1:
            raise ValueError(f"colored partition count must be >= 1, got {r}")
        return ProductSpec(name, (Rule(1, 0, r, 0),))
    m = re.fullmatch(r"parts:([\d,]+)", name)
    if m:
        parts = sorted({int(t) for t in m.group(1).split(",") if t})
        return parts_from_set_spec(parts)
    raise ValueError(f"unknown builtin function {name!r}")


def parts_from_set_spec(parts: Iterable[int]) -> ProductSpec:
    """Spec for partitions with parts drawn from a finite set."""
    parts = sorted(set(parts))
    if not parts:
        raise ValueError("parts set must be nonempty")
    if parts[0] < 1:
        raise ValueError("parts must be positive")
    name = "parts:" + ",".join(str(a) for a in parts)
    return ProductSpec(name, (), {a: 1 for a in parts})


@dataclass(frozen=True)
class CoeffTable:
    """Immutable exact table of coefficients f(0..n_max) for one spec."""

    spec: ProductSpec
    n_max: int
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.values) != self.n_max + 1:
            raise ValueError("values length must be n_max + 1")
        if self.values[0] != 1:
            raise ValueError("constant coefficient must be 1")

    def __getitem__(self, n: int) -> int:
        return self.values[n]

    def __len__(self) -> int:
        return self.n_max + 1


class NonCountingSpecError(ValueError):
    """Raised when a spec produces a negative coefficient."""


def _exponents(spec: ProductSpec, n_max: int) -> list[int]:
    e = [0] * (n_max + 1)
    for a in range(1, n_max + 1):
        e[a] = spec.exponent(a)
    return e


def _g_series(exponents: Sequence[int], n_max: int) -> list[int]:
    """g(j) = sum_{a | j} a * e_a, via a divisor sieve."""
    g = [0] * (n_max + 1)
    for a in range(1, n_max + 1):
        ea = exponents[a]
        if ea:
            step = a * ea
            for j in range(a, n_max + 1, a):
                g[j] += step
    return g


def _coeffs_from_g(g: Sequence[int], n_max: int) -> list[int]:
    """Solve n*f(n) = sum_{j=1..n} g(j) f(n-j) with f(0) = 1, exactly."""
    f = [0] * (n_max + 1)
    f[0] = 1
    for n in range(1, n_max + 1):
        acc = 0
        for j in range(1, n + 1):
            gj = g[j]
            if gj:
                acc += gj * f[n - j]
        q, rem = divmod(acc, n)
        if rem:
            raise ArithmeticError(
                f"recurrence sum not divisible at n={n}: corrupted spec or bug"
            )
        f[n] = q
    return f


def _pentagonal_coeffs(n_max: int) -> list[int]:
    """p(n) by the pentagonal-number recurrence, O(N sqrt N) additions."""
    offsets: list[tuple[int, int]] = []
    k = 1
    while k * (3 * k - 1) // 2 <= n_max:
        sign = 1 if k % 2 == 1 else -1
        offsets.append((k * (3 * k - 1) // 2, sign))
        if k * (3 * k + 1) // 2 <= n_max:
            offsets.append((k * (3 * k + 1) // 2, sign))
        k += 1
    offsets.sort()
    f = [0] * (n_max + 1)
    f[0] = 1
    for n in range(1, n_max + 1):
        acc = 0
        for g, sign in offsets:
            if g > n:
                break
            if sign > 0:
                acc += f[n - g]
            else:
                acc -= f[n - g]
        f[n] = acc
    return f


def build_coeff_table(spec: ProductSpec, n_max: int) -> CoeffTable:
    """Exact coefficients of prod (1 - x^a)^(-e_a) up to x^n_max.

    Uses the pentagonal fast path when the spec has e_a = 1 everywhere,
    the generic log-derivative recurrence otherwise.  Aborts if any
    coefficient goes negative (the spec is not a counting function).
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    exponents = _exponents(spec, n_max)
    if not spec.overrides and all(e == 1 for e in exponents[1:]):
        values = _pentagonal_coeffs(n_max)
    else:
        values = _coeffs_from_g(_g_series(exponents, n_max), n_max)
    for n, v in enumerate(values):
        if v < 0:
            raise NonCountingSpecError(
                f"negative coefficient {v} at n={n} for spec {spec.name!r}: "
                "not a counting function"
            )
    return CoeffTable(spec, n_max, tuple(values))


def write_values_csv(table: CoeffTable, out: TextIO) -> None:
    """CSV export with header n,value; big integers in decimal."""
    out.write("n,value\n")
    for n, v in enumerate(table.values):
        out.write(f"{n},{v}\n")


def load_values_csv(lines: Iterable[str], name: str = "values-file") -> CoeffTable:
    """Re-ingest a values CSV produced by write_values_csv."""
    values: list[int] = []
    for i, line in enumerate(lines):
        line = line.strip()
        if not line or (i == 0 and line == "n,value"):
            continue
        n_str, v_str = line.split(",")
        n = int(n_str)
        if n != len(values):
            raise ValueError(f"values CSV rows out of order at n={n}")
        values.append(int(v_str))
    if not values:
        raise ValueError("values CSV is empty")
    return CoeffTable(ProductSpec(name), len(values) - 1, tuple(values))


# ---------------------------------------------------------------------------
# Brute-force enumeration oracles (exhaustive, for small n only).

_BRUTE_LIMIT = 40


def _check_brute_range(n: int) -> None:
    if n < 0:
        raise ValueError("n must be >= 0")
    if n > _BRUTE_LIMIT:
        raise ValueError(f"brute-force enumeration capped at n <= {_BRUTE_LIMIT}")


def _partitions(n: int, max_part: int) -> Iterable[tuple[int, ...]]:
    """All partitions of n with parts <= max_part, largest part first."""
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


def count_partitions_brute(n: int) -> int:
    _check_brute_range(n)
    return sum(1 for _ in _partitions(n, n if n else 1))


def count_overpartitions_brute(n: int) -> int:
    """Each distinct part's first occurrence may be overlined: 2^#distinct."""
    _check_brute_range(n)
    if n == 0:
        return 1
    return sum(2 ** len(set(lam)) for lam in _partitions(n, n))


def count_strict_brute(n: int) -> int:
    _check_brute_range(n)
    if n == 0:
        return 1
    return sum(1 for lam in _partitions(n, n) if len(set(lam)) == len(lam))


def count_selfconj_brute(n: int) -> int:
    """Counted via the distinct-odd-parts bijection."""
    _check_brute_range(n)
    if n == 0:
        return 1
    return sum(
        1
        for lam in _partitions(n, n)
        if len(set(lam)) == len(lam) and all(part % 2 == 1 for part in lam)
    )


def count_nonunitary_brute(n: int) -> int:
    _check_brute_range(n)
    if n == 0:
        return 1
    return sum(1 for lam in _partitions(n, n) if lam[-1] != 1)


def count_parts_from_set_brute(n: int, parts: Iterable[int]) -> int:
    _check_brute_range(n)
    allowed = set(parts)
    if n == 0:
        return 1
    return sum(1 for lam in _partitions(n, n) if set(lam) <= allowed)


def count_colored_brute(n: int, colors: int) -> int:
    """r-colored partitions: r-tuples of partitions with total size n."""
    _check_brute_range(n)
    if colors < 1:
        raise ValueError("colors must be >= 1")
    if colors == 1:
        return count_partitions_brute(n)
    return sum(
        count_partitions_brute(j) * count_colored_brute(n - j, colors - 1)
        for j in range(n + 1)
    )


def _bounded_rows(budget: int, caps: tuple[int, ...]) -> Iterable[tuple[int, ...]]:
    """Weakly-decreasing tuples bounded entrywise by caps, sum <= budget.

    Includes the empty tuple; caps itself must be weakly decreasing.
    """
    yield ()
    if not caps or budget == 0 or caps[0] == 0:
        return
    for first in range(min(budget, caps[0]), 0, -1):
        sub = tuple(min(c, first) for c in caps[1:])
        for rest in _bounded_rows(budget - first, sub):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _plane_completions(remaining: int, prev_row: tuple[int, ...]) -> int:
    """Ways to extend a plane partition below prev_row using exactly
    `remaining` more; each added row is entrywise <= the row above."""
    if remaining == 0:
        return 1
    total = 0
    for row in _bounded_rows(remaining, prev_row):
        if row:
            total += _plane_completions(remaining - sum(row), row)
    return total


def count_plane_brute(n: int) -> int:
    """Plane partitions of n: arrays nonincreasing along rows and columns."""
    _check_brute_range(n)
    if n == 0:
        return 1
    total = 0
    for size in range(1, n + 1):
        for first_row in _partitions(size, size):
            total += _plane_completions(n - size, first_row)
    return total


def brute_force_count(name: str, n: int) -> int:
    """Dispatch to the enumeration oracle for a builtin function name."""
    if name == "p":
        return count_partitions_brute(n)
    if name == "overpartition":
        return count_overpartitions_brute(n)
    if name == "strict":
        return count_strict_brute(n)
    if name == "selfconj":
        return count_selfconj_brute(n)
    if name == "nonunitary":
        return count_nonunitary_brute(n)
    if name == "plane":
        return count_plane_brute(n)
    if name == "colored2":
        return count_colored_brute(n, 2)
    m = re.fullmatch(r"colored(\d+)", name)
    if m:
        return count_colored_brute(n, int(m.group(1)))
    m = re.fullmatch(r"parts:([\d,]+)", name)
    if m:
        return count_parts_from_set_brute(n, (int(t) for t in m.group(1).split(",")))
    raise ValueError(f"no brute-force oracle for {name!r}")
