"""Batch command-line front end.

Subcommands cover table generation, near-power distances, bounded scans,
stabilization estimates, bound formulas, equidistribution diagnostics,
and the random model (expectation, exact probabilities, Monte Carlo).
Output is deterministic CSV (or JSON with --format json); big integers
are printed in decimal, d thresholds in their input syntax.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence, TextIO

from . import equidist, model, scanner, series
from .asymptotics import AsymptoticParams, builtin_params
from .powers import delta_k, delta_tilde
from .series import CoeffTable, ProductSpec, build_coeff_table, builtin_spec


class UsageError(ValueError):
    """Bad flag combinations detected past argparse."""


def parse_d_grid(text: str) -> list[tuple[str, int]]:
    """Parse a d-grid expression into sorted distinct (token, value) pairs.

    Forms: 'pow2:LO:HI', 'pow10:LO:HI', or a comma list whose items are
    decimal integers, '2^K', or '10^K'.
    """
    items: list[tuple[str, int]] = []
    if text.startswith("pow2:") or text.startswith("pow10:"):
        base_s, lo_s, hi_s = text.split(":")
        base = 2 if base_s == "pow2" else 10
        lo, hi = int(lo_s), int(hi_s)
        if hi < lo:
            raise UsageError(f"empty grid range in {text!r}")
        items = [(f"{base}^{j}", base**j) for j in range(lo, hi + 1)]
    else:
        for token in text.split(","):
            token = token.strip()
            if not token:
                continue
            if "^" in token:
                base_s, exp_s = token.split("^")
                value = int(base_s) ** int(exp_s)
            else:
                value = int(token)
            if value < 0:
                raise UsageError(f"d values must be nonnegative, got {token!r}")
            items.append((token, value))
    if not items:
        raise UsageError(f"empty d grid {text!r}")
    by_value: dict[int, str] = {}
    for token, value in items:
        by_value.setdefault(value, token)
    return sorted(((tok, val) for val, tok in by_value.items()), key=lambda tv: tv[1])


def _parse_int_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _load_table(args: argparse.Namespace, n_max: int) -> CoeffTable:
    sources = [
        s
        for s in (args.function, getattr(args, "spec_file", None), getattr(args, "values_file", None))
        if s
    ]
    if len(sources) != 1:
        raise UsageError("give exactly one of --function, --spec-file, --values-file")
    if getattr(args, "values_file", None):
        with open(args.values_file, encoding="utf-8") as fh:
            table = series.load_values_csv(fh, name=args.values_file)
        if table.n_max < n_max:
            raise UsageError(
                f"values file covers n <= {table.n_max}, need n <= {n_max}"
            )
        return table
    if getattr(args, "spec_file", None):
        with open(args.spec_file, encoding="utf-8") as fh:
            spec = ProductSpec.from_json(fh.read())
    else:
        spec = builtin_spec(args.function)
    return build_coeff_table(spec, n_max)


def _params_for(args: argparse.Namespace) -> AsymptoticParams:
    if not args.function:
        raise UsageError("this subcommand needs --function with known asymptotics")
    params = builtin_params(args.function)
    if getattr(args, "eps_const", None) is not None:
        params = params.with_eps_const(args.eps_const)
    return params


def _emit(rows: list[dict], header: Sequence[str], args: argparse.Namespace) -> None:
    out: TextIO
    close = False
    if args.out and args.out != "-":
        out = open(args.out, "w", encoding="utf-8")
        close = True
    else:
        out = sys.stdout
    try:
        if args.format == "json":
            json.dump(rows, out, indent=2)
            out.write("\n")
        else:
            out.write(",".join(header) + "\n")
            for row in rows:
                out.write(",".join(_cell(row.get(col)) for col in header) + "\n")
    finally:
        if close:
            out.close()


def _cell(value) -> str:
    if value is None:
        return "NONE"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def _frac_str(x) -> str:
    return format(float(x), ".18f")


# --- subcommand implementations -------------------------------------------


def _cmd_gen(args) -> None:
    table = _load_table(args, args.n_max)
    rows = [{"n": n, "value": v} for n, v in enumerate(table.values)]
    _emit(rows, ("n", "value"), args)


def _iter_indices(args, table: CoeffTable) -> list[int]:
    if args.n is not None:
        return [args.n]
    return list(range(1, args.n_max + 1))


def _cmd_delta(args) -> None:
    n_hi = args.n if args.n is not None else args.n_max
    if n_hi is None:
        raise UsageError("give --n or --n-max")
    table = _load_table(args, n_hi)
    limit = args.value_digit_limit
    rows = []
    for k in _parse_int_list(args.k):
        for n in _iter_indices(args, table):
            pd = delta_k(table.values[n], k)
            row = {
                "n": n,
                "k": k,
                "value_digits": len(str(pd.value)),
                "delta": pd.delta,
                "side": pd.side,
            }
            if limit is not None:
                row["value"] = pd.value if row["value_digits"] <= limit else ""
            rows.append(row)
    header = ["n", "k", "value_digits", "delta", "side"]
    if limit is not None:
        header.append("value")
    _emit(rows, header, args)


def _cmd_delta_tilde(args) -> None:
    n_hi = args.n if args.n is not None else args.n_max
    if n_hi is None:
        raise UsageError("give --n or --n-max")
    table = _load_table(args, n_hi)
    rows = []
    for base in _parse_int_list(args.base):
        for n in _iter_indices(args, table):
            v = table.values[n]
            bd = delta_tilde(v, base)
            rows.append(
                {
                    "n": n,
                    "a": base,
                    "value_digits": len(str(v)),
                    "delta": bd.delta,
                    "exponent": bd.exponent,
                }
            )
    _emit(rows, ("n", "a", "value_digits", "delta", "exponent"), args)


def _cmd_scan_m(args) -> None:
    grid = parse_d_grid(args.d)
    table = _load_table(args, args.bound)
    try:
        params: Optional[AsymptoticParams] = (
            builtin_params(args.function) if args.function else None
        )
    except ValueError:
        params = None
    rows = []
    for k in _parse_int_list(args.k):
        scan_rows = scanner.scan_m(table, k, [v for _, v in grid], args.bound)
        half_rows = (
            scanner.scan_half_gap(table, k, [v for _, v in grid], args.bound)
            if args.with_half_gap
            else None
        )
        for i, (token, value) in enumerate(grid):
            row = {
                "k": k,
                "d": token,
                "M": scan_rows[i].m,
                "bound": args.bound,
            }
            if half_rows is not None:
                row["lower_halfgap"] = half_rows[i].m
            if params is not None and value >= 2:
                row["asymptotic_leading"] = scanner.bound_formulas(
                    params, k, value
                ).m_lower_leading
            else:
                row["asymptotic_leading"] = None
            rows.append(row)
    header = ["k", "d", "M", "bound"]
    if args.with_half_gap:
        header.append("lower_halfgap")
    header.append("asymptotic_leading")
    _emit(rows, header, args)


def _cmd_scan_mtilde(args) -> None:
    grid = parse_d_grid(args.d)
    table = _load_table(args, args.bound)
    rows = []
    for base in _parse_int_list(args.base):
        scan_rows = scanner.scan_m_tilde(
            table,
            base,
            [v for _, v in grid],
            args.bound,
            include_exact=args.include_exact,
        )
        for (token, _), sr in zip(grid, scan_rows):
            rows.append({"a": base, "d": token, "M": sr.m})
    _emit(rows, ("a", "d", "M"), args)


def _cmd_scan_nd(args) -> None:
    grid = parse_d_grid(args.d)
    table = _load_table(args, args.bound)
    rows = []
    for token, value in grid:
        est = scanner.estimate_nd(table, value, args.k_max, args.bound)
        row = {
            "d": token,
            "L": est.l_value,
            "k0": est.k0,
            "stable": est.stable,
            "nd_lower1": value.bit_length(),
        }
        rows.append(row)
    _emit(rows, ("d", "L", "k0", "stable", "nd_lower1"), args)


def _cmd_bounds(args) -> None:
    params = _params_for(args)
    grid = parse_d_grid(args.d)
    rows = []
    for k in _parse_int_list(args.k):
        for token, value in grid:
            bf = scanner.bound_formulas(params, k, value, args.a_const)
            rows.append(
                {
                    "k": k,
                    "d": token,
                    "m_lower_leading": bf.m_lower_leading,
                    "m_heuristic_upper": bf.m_heuristic_upper,
                    "nd_lower1": bf.nd_lower1,
                    "nd_lower2": bf.nd_lower2,
                }
            )
    _emit(
        rows,
        ("k", "d", "m_lower_leading", "m_heuristic_upper", "nd_lower1", "nd_lower2"),
        args,
    )


def _ks_grid(n_max: int) -> list[int]:
    """Decades and half-decades up to n_max: 10, 30, 100, 300, ..."""
    grid = []
    decade = 10
    while decade <= n_max:
        grid.append(decade)
        if 3 * decade <= n_max:
            grid.append(3 * decade)
        decade *= 10
    if not grid or grid[-1] != n_max:
        grid.append(n_max)
    return grid


def _cmd_equidist(args) -> None:
    table = _load_table(args, args.n_max)
    ks = _parse_int_list(args.k)
    rows = []
    if args.emit == "fracs":
        for k in ks:
            for s in equidist.collect_fracs(table, k, args.n_max):
                rows.append({"n": s.n, "k": k, "frac": _frac_str(s.frac)})
        _emit(rows, ("n", "k", "frac"), args)
    elif args.emit == "hist":
        for k in ks:
            rep = equidist.ks_report(table, k, args.n_max, args.bins)
            for i, count in enumerate(rep.histogram):
                rows.append(
                    {
                        "k": k,
                        "bin_lo": _frac_str(i / args.bins),
                        "bin_hi": _frac_str((i + 1) / args.bins),
                        "count": count,
                    }
                )
        _emit(rows, ("k", "bin_lo", "bin_hi", "count"), args)
    else:  # ks
        for k in ks:
            samples = equidist.collect_fracs(table, k, args.n_max)
            fracs = [float(s.frac) for s in samples]
            for n in _ks_grid(args.n_max):
                rows.append(
                    {"N": n, "k": k, "D": equidist.ks_statistic(fracs[:n])}
                )
        _emit(rows, ("N", "k", "D"), args)


def _cmd_model_expect(args) -> None:
    rows = []
    for name in args.function.split(","):
        params = builtin_params(name.strip())
        if args.eps_const is not None:
            params = params.with_eps_const(args.eps_const)
        res = model.expectation(params, args.tol)
        rows.append(
            {
                "name": name.strip(),
                "E": res.value,
                "tail_bound": res.tail_bound,
                "n_max": res.n_max,
            }
        )
    _emit(rows, ("name", "E", "tail_bound", "n_max"), args)


def _cmd_model_prob(args) -> None:
    params = _params_for(args)
    if args.n_range:
        lo, hi = (int(t) for t in args.n_range.split(":"))
    else:
        if args.n is None:
            raise UsageError("give --n or --n-range")
        lo = hi = args.n
    rows = []
    for n in range(lo, hi + 1):
        iv = model.interval_s(params, n)
        lb = model.lemma_bounds(params, n, args.k, args.d)
        exact = model.prob_delta(iv, args.k, args.d) if iv.card else None
        rows.append(
            {
                "n": n,
                "exactP": float(exact) if exact is not None else None,
                "lower": lb.lower,
                "upper": lb.upper,
                "applicable": lb.applicable,
            }
        )
    _emit(rows, ("n", "exactP", "lower", "upper", "applicable"), args)


def _cmd_model_simulate(args) -> None:
    if args.synthetic:
        a_str, eps_str = args.synthetic.split(":")
        iv = model.synthetic_interval(a_str, eps_str, n=1)
        report = model.simulate([iv], (1, 1), args.k, args.d, args.trials, args.seed)
    else:
        params = _params_for(args)
        lo, hi = (int(t) for t in args.n_range.split(":"))
        report = model.simulate(params, (lo, hi), args.k, args.d, args.trials, args.seed)
    rows = []
    for n in sorted(report.freq_delta_le_d):
        rows.append({"stat": "freq_delta_le_d", "key": n, "count": report.freq_delta_le_d[n]})
    for key in sorted(report.realized_m, key=lambda x: (x is None, x)):
        rows.append(
            {
                "stat": "realized_m",
                "key": key if key is not None else "NONE",
                "count": report.realized_m[key],
            }
        )
    for c in sorted(report.perfect_power_counts):
        rows.append({"stat": "perfect_power_count", "key": c, "count": report.perfect_power_counts[c]})
    _emit(rows, ("stat", "key", "count"), args)


# --- argument wiring --------------------------------------------------------


def _add_source_flags(sp: argparse.ArgumentParser, values_file: bool = True) -> None:
    sp.add_argument("--function", help="builtin function name")
    sp.add_argument("--spec-file", help="JSON ProductSpec file")
    if values_file:
        sp.add_argument("--values-file", help="values CSV produced by gen")


def _add_common_output(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--out", default="-", help="output path (default stdout)")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="partpow",
        description="Exact partition-type counting functions vs perfect powers",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("gen", help="emit a coefficient table as CSV")
    _add_source_flags(sp, values_file=False)
    sp.add_argument("--n-max", type=int, required=True)
    _add_common_output(sp)
    sp.set_defaults(func=_cmd_gen)

    sp = sub.add_parser("delta", help="distance to the nearest k-th power")
    _add_source_flags(sp)
    sp.add_argument("--k", required=True, help="exponent(s), comma separated")
    sp.add_argument("--n", type=int, help="single index")
    sp.add_argument("--n-max", type=int, help="indices 1..n_max")
    sp.add_argument("--value-digit-limit", type=int, help="include values up to this many digits")
    _add_common_output(sp)
    sp.set_defaults(func=_cmd_delta)

    sp = sub.add_parser("delta-tilde", help="distance to the nearest power of a base")
    _add_source_flags(sp)
    sp.add_argument("--base", required=True, help="base(s), comma separated")
    sp.add_argument("--n", type=int)
    sp.add_argument("--n-max", type=int)
    _add_common_output(sp)
    sp.set_defaults(func=_cmd_delta_tilde)

    sp = sub.add_parser("scan-m", help="largest n <= bound with delta <= d")
    _add_source_flags(sp)
    sp.add_argument("--k", required=True)
    sp.add_argument("--d", required=True, help="d grid expression")
    sp.add_argument("--bound", type=int, required=True)
    sp.add_argument("--with-half-gap", action="store_true")
    _add_common_output(sp)
    sp.set_defaults(func=_cmd_scan_m)

    sp = sub.add_parser("scan-mtilde", help="fixed-base scan")
    _add_source_flags(sp)
    sp.add_argument("--base", required=True)
    sp.add_argument("--d", required=True)
    sp.add_argument("--bound", type=int, required=True)
    sp.add_argument("--include-exact", action="store_true",
                    help="count exact powers (delta = 0) as qualifying")
    _add_common_output(sp)
    sp.set_defaults(func=_cmd_scan_mtilde)

    sp = sub.add_parser("scan-nd", help="stabilization exponent estimate")
    _add_source_flags(sp)
    sp.add_argument("--d", required=True)
    sp.add_argument("--k-max", type=int, default=20)
    sp.add_argument("--bound", type=int, required=True)
    _add_common_output(sp)
    sp.set_defaults(func=_cmd_scan_nd)

    sp = sub.add_parser("bounds", help="closed-form bound formulas")
    sp.add_argument("--function", required=True)
    sp.add_argument("--k", required=True)
    sp.add_argument("--d", required=True)
    sp.add_argument("--a-const", type=float, help="loglog coefficient for nd_lower2")
    sp.add_argument("--eps-const", type=float)
    _add_common_output(sp)
    sp.set_defaults(func=_cmd_bounds)

    sp = sub.add_parser("equidist", help="fractional-part uniformity diagnostics")
    _add_source_flags(sp)
    sp.add_argument("--k", required=True)
    sp.add_argument("--n-max", type=int, required=True)
    sp.add_argument("--bins", type=int, default=50)
    sp.add_argument("--emit", choices=("ks", "fracs", "hist"), default="ks")
    _add_common_output(sp)
    sp.set_defaults(func=_cmd_equidist)

    sp = sub.add_parser("model-expect", help="expected number of perfect powers")
    sp.add_argument("--function", required=True, help="name(s), comma separated")
    sp.add_argument("--tol", type=float, default=1e-4)
    sp.add_argument("--eps-const", type=float)
    _add_common_output(sp)
    sp.set_defaults(func=_cmd_model_expect)

    sp = sub.add_parser("model-prob", help="exact and bounded near-power probabilities")
    sp.add_argument("--function", required=True)
    sp.add_argument("--n", type=int)
    sp.add_argument("--n-range", help="LO:HI")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--eps-const", type=float)
    _add_common_output(sp)
    sp.set_defaults(func=_cmd_model_prob)

    sp = sub.add_parser("model-simulate", help="seeded Monte Carlo trials")
    sp.add_argument("--function")
    sp.add_argument("--synthetic", help="A:EPS exact center and half-width")
    sp.add_argument("--n-range", default="1:1", help="LO:HI")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--eps-const", type=float)
    _add_common_output(sp)
    sp.set_defaults(func=_cmd_model_simulate)

    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
