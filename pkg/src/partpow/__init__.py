"""Exact partition-type counting functions and their distance to perfect powers.

Library layout:

- series:      exact coefficient tables of prod (1 - x^a)^(-e_a)
- powers:      integer roots, near-power distances, perfect-power counting
- scanner:     bounded scans for M(d)-style maxima and bound formulas
- asymptotics: growth-law parameters with certified evaluation
- equidist:    fractional parts of f(n)^(1/k) and KS diagnostics
- model:       random interval model, exact probabilities, Monte Carlo
- cli:         batch front end (entry point: partpow)
"""

from .asymptotics import AsymptoticParams, builtin_params
from .equidist import FracSample, KSReport, frac_root, ks_report, ks_statistic
from .model import (
    ExpectationResult,
    LemmaBounds,
    ModelInterval,
    SimulationReport,
    count_powers_in_interval,
    expectation,
    interval_s,
    lemma_bounds,
    prob_delta,
    simulate,
    synthetic_interval,
)
from .powers import (
    BaseDistance,
    PowerDistance,
    count_perfect_powers_upto,
    delta_k,
    delta_tilde,
    iroot,
    iroot_ceil,
    is_perfect_power,
    mobius,
)
from .scanner import (
    BoundFormulas,
    NdEstimate,
    ScanRow,
    bound_formulas,
    estimate_nd,
    half_gap_lower_scan,
    l_of,
    scan_half_gap,
    scan_m,
    scan_m_tilde,
)
from .series import (
    CoeffTable,
    NonCountingSpecError,
    ProductSpec,
    Rule,
    build_coeff_table,
    builtin_spec,
    parts_from_set_spec,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
