"""Closed-form bounds for minimum rank, xi and the degree/edge statistics of G(v, p).

Quantities that overflow a double (huge binomials, powers raised to v^2)
are evaluated as sums of logarithms; binomials go through ``gammaln`` so
non-integer arguments are handled by the continuous extension.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .errors import ParameterError, SolverError

__all__ = [
    "AnalyticBound",
    "CpSolution",
    "Interval",
    "DeviationIntervals",
    "log_binom",
    "cp_log_lhs",
    "solve_cp",
    "mr_expectation_bounds",
    "zero_pattern_bound",
    "zero_patterns_of_inertia_forms",
    "mr_probability_bound",
    "stirling_binom_upper",
    "deviation_intervals",
    "azuma_tail",
    "concentration_radius",
    "xi_edge_upper",
    "xi_bounds",
    "connectivity_failure_bound",
]

_LOG_MAX_VALUE = math.log(1e300)


@dataclass(frozen=True)
class AnalyticBound:
    """An evaluated bound.  ``value`` is None when it would exceed 1e300."""

    value: float | None
    log_value: float
    validity: str
    provenance: str
    details: dict = field(default_factory=dict, compare=False)

    @classmethod
    def from_log(cls, log_value, validity, provenance, details=None):
        value = math.exp(log_value) if log_value < _LOG_MAX_VALUE else None
        return cls(value, float(log_value), validity, provenance, details or {})

    @classmethod
    def from_value(cls, value, validity, provenance, details=None):
        log_value = math.log(value) if value > 0 else -math.inf
        return cls(float(value), log_value, validity, provenance, details or {})


def _check_p(p):
    if not (0.0 < p < 1.0):
        raise ParameterError(f"p must lie in (0, 1), got {p!r}")


def _xlogx(x):
    return 0.0 if x == 0 else x * math.log(x)


def log_binom(n, k):
    """log C(n, k) through log-gamma; n and k may be real."""
    return float(gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1))


# -- c(p) ------------------------------------------------------------------

@dataclass(frozen=True)
class CpSolution:
    p: float
    c: float
    residual: float


def cp_log_lhs(c, p):
    """Natural log of (c+p)^(2c+2p) / (c^(2c) p^(2p)) * p^p (1-p)^(1-p), with c^(2c) -> 1 at c = 0."""
    return (
        2 * _xlogx(c + p)
        - 2 * _xlogx(c)
        - 2 * _xlogx(p)
        + _xlogx(p)
        + _xlogx(1 - p)
    )


def solve_cp(p: float, tol: float = 1e-10) -> CpSolution:
    """Root c in (0, 1) of the lower-bound slope equation, by bisection.

    The log of the left side is strictly increasing in c, negative at c -> 0
    (it tends to the entropy term p ln p + (1-p) ln(1-p)) and positive at
    c = 1, so a sign-change bracket on (1e-12, 1) always exists.
    Bisection stops once |LHS - 1| <= tol or the bracket hits float resolution.
    """
    _check_p(p)
    if not tol > 0:
        raise ParameterError("tol must be positive")
    lo, hi = 1e-12, 1.0
    f_lo, f_hi = cp_log_lhs(lo, p), cp_log_lhs(hi, p)
    if not (f_lo < 0 < f_hi):
        raise SolverError(f"no sign change for p={p}: f(lo)={f_lo}, f(hi)={f_hi}")
    c = 0.5 * (lo + hi)
    for _ in range(400):
        c = 0.5 * (lo + hi)
        f = cp_log_lhs(c, p)
        if abs(math.expm1(f)) <= tol or hi - lo <= 4 * np.finfo(float).eps * hi:
            break
        if f < 0:
            lo = c
        else:
            hi = c
    residual = abs(math.expm1(cp_log_lhs(c, p)))
    return CpSolution(p, c, residual)


def mr_expectation_bounds(v: int, p: float) -> tuple[AnalyticBound, AnalyticBound]:
    """Asymptotic sandwich c(p) v < E[mr(G(v,p))] <= (1-p) v + sqrt(7 v ln v)."""
    _check_p(p)
    if v < 2:
        raise ParameterError("v must be >= 2")
    c = solve_cp(p).c
    lower = AnalyticBound.from_value(
        c * v,
        "v sufficiently large; any slope below c(p) is eventually valid",
        "zero-pattern counting lower bound",
        {"c": c},
    )
    upper = AnalyticBound.from_value(
        (1 - p) * v + math.sqrt(7 * v * math.log(v)),
        "v sufficiently large",
        "connectivity upper bound via kappa = delta",
    )
    return lower, upper


# -- zero-pattern counting ---------------------------------------------------

def zero_pattern_bound(n: int, d: int, s: int) -> AnalyticBound:
    """C(n + s d, n): zero patterns of support <= s for degree-<=d polynomials in n variables."""
    if n < 1 or d < 1 or s < 0:
        raise ParameterError("need n >= 1, d >= 1, s >= 0")
    log_value = log_binom(n + s * d, n)
    value = float(math.comb(n + s * d, n)) if log_value < _LOG_MAX_VALUE else None
    return AnalyticBound(
        value,
        log_value,
        "m >= n polynomials of degree <= d in n variables",
        "zero-pattern count",
        {"n": n, "d": d, "s": s},
    )


def zero_patterns_of_inertia_forms(xs, r: int) -> dict[int, set[tuple[bool, ...]]]:
    """Realized zero patterns of the upper-triangular entries of X^T D_i X.

    ``xs`` is an array of candidate X matrices of shape (k, r, v).  D_i is
    diag(1 x i, -1 x (r-i)) for i = 0..r.  Returns, per i, the set of
    support indicator tuples (True where the entry is nonzero).
    """
    xs = np.asarray(xs, dtype=float)
    _, rr, v = xs.shape
    if rr != r:
        raise ParameterError("X must have r rows")
    iu = np.triu_indices(v)
    out = {}
    for i in range(r + 1):
        D = np.diag([1.0] * i + [-1.0] * (r - i))
        forms = np.einsum("kai,ab,kbj->kij", xs, D, xs)
        entries = forms[:, iu[0], iu[1]]
        scale = np.maximum(1.0, np.abs(xs).max(axis=(1, 2))) ** 2
        nz = np.abs(entries) > 1e-9 * scale[:, None]
        out[i] = {tuple(row) for row in nz.tolist()}
    return out


def mr_probability_bound(v: int, p: float, r: int) -> AnalyticBound:
    """Upper bound on Pr[mr(G) <= r | e(G) within v sqrt(2 ln v) of its mean], in log space.

    (max(p,1-p)/min(p,1-p))^(v sqrt(2 ln v)) * (p^p (1-p)^(1-p))^C(v,2)
        * (r+1) * C(r v + 2 p C(v,2) + 2 v sqrt(2 ln v), r v)
    """
    _check_p(p)
    if not (1 <= r < v):
        raise ParameterError("need 1 <= r < v")
    pairs = v * (v - 1) / 2
    dev = v * math.sqrt(2 * math.log(v))
    skew = math.log(max(p, 1 - p) / min(p, 1 - p))
    terms = {
        "edge_skew": dev * skew,
        "entropy": pairs * (_xlogx(p) + _xlogx(1 - p)),
        "inertia_count": math.log(r + 1),
        "pattern_count": log_binom(r * v + 2 * p * pairs + 2 * dev, r * v),
    }
    return AnalyticBound.from_log(
        sum(terms.values()),
        "conditional on the edge-count concentration event",
        "zero-pattern counting over rank-r inertia forms",
        terms,
    )


def stirling_binom_upper(alpha: float, beta: float, gamma: float, N: int) -> AnalyticBound:
    """Upper bound on C((alpha+beta+gamma) N, alpha N) from two-sided Stirling estimates.

    E(alpha,beta,gamma,N) * ((alpha+beta)^(alpha+beta) / (alpha^alpha beta^beta))^N with
    E = sqrt((alpha+beta) / (2 pi alpha beta N)) * exp(1/(12 (alpha+beta) N) + gamma (1 + alpha/beta) N).
    """
    if not (0 < alpha < 1 and 0 < beta < 1):
        raise ParameterError("alpha and beta must lie in (0, 1)")
    if not (0 <= gamma <= 1):
        raise ParameterError("gamma must lie in [0, 1]")
    if N < 1:
        raise ParameterError("N must be >= 1")
    s = alpha + beta
    log_exp_factor = 1 / (12 * s * N) + gamma * (1 + alpha / beta) * N
    log_E = 0.5 * math.log(s / (2 * math.pi * alpha * beta * N)) + log_exp_factor
    log_base = _xlogx(s) - _xlogx(alpha) - _xlogx(beta)
    return AnalyticBound.from_log(
        log_E + N * log_base,
        "alpha N and (alpha+beta+gamma) N positive integers",
        "Stirling binomial estimate",
        {"log_E": log_E, "log_exp_factor": log_exp_factor, "log_base": log_base},
    )


# -- concentration -------------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    center: float
    half_width: float
    failure_prob: float

    @property
    def lo(self):
        return self.center - self.half_width

    @property
    def hi(self):
        return self.center + self.half_width

    def __contains__(self, x):
        return self.lo <= x <= self.hi


@dataclass(frozen=True)
class DeviationIntervals:
    edges: Interval
    degrees: Interval


def deviation_intervals(v: int, p: float) -> DeviationIntervals:
    """Chernoff windows: e(G) in p C(v,2) +- v sqrt(2 ln v); all degrees in p v +- sqrt(6 v ln v).

    Each window fails with probability at most 2 v^-2.
    """
    _check_p(p)
    if v < 2:
        raise ParameterError("v must be >= 2")
    lnv = math.log(v)
    fail = 2.0 / v**2
    return DeviationIntervals(
        Interval(p * v * (v - 1) / 2, v * math.sqrt(2 * lnv), fail),
        Interval(p * v, math.sqrt(6 * v * lnv), fail),
    )


def azuma_tail(beta: float) -> float:
    """2 exp(-beta^2 / 2): tail of mr around its mean at distance 2 beta sqrt(v-1)."""
    if beta < 0:
        raise ParameterError("beta must be >= 0")
    return 2.0 * math.exp(-beta * beta / 2)


def concentration_radius(v: int) -> float:
    """sqrt(v ln ln v); NaN when ln ln v is undefined or negative (v < 3)."""
    if v < 3:
        return math.nan
    return math.sqrt(v * math.log(math.log(v)))


# -- xi ------------------------------------------------------------------------

def xi_edge_upper(e: int) -> int:
    """floor((-1 + sqrt(9 + 8 e)) / 2), computed in exact integer arithmetic."""
    if e < 0:
        raise ParameterError("e must be >= 0")
    return (math.isqrt(9 + 8 * e) - 1) // 2


def xi_bounds(v: int, e: int, p: float) -> tuple[int, tuple[float, float]]:
    """Per-graph edge bound on xi and the asymptotic window (p, sqrt p) for E[xi]/v."""
    _check_p(p)
    if v < 1:
        raise ParameterError("v must be >= 1")
    return xi_edge_upper(e), (p, math.sqrt(p))


def connectivity_failure_bound(v: int, p: float) -> AnalyticBound:
    """Pr[kappa < delta] <= 3 v^-2 for large v, with the thresholds that make 'large' concrete.

    ``details['valid']`` is True when t >= p(1-p) v - 5 sqrt(v ln v) > 0 and
    e v (1-p)^((v - delta_cap)/2) < 1, where delta_cap = p v + 2 sqrt(2 ln v)
    and t = (2p - p^2) v - 3 sqrt(v ln v) - delta_cap.
    """
    _check_p(p)
    if v < 2:
        raise ParameterError("v must be >= 2")
    lnv = math.log(v)
    delta_cap = p * v + 2 * math.sqrt(2 * lnv)
    t = (2 * p - p * p) * v - 3 * math.sqrt(v * lnv) - delta_cap
    t_floor = p * (1 - p) * v - 5 * math.sqrt(v * lnv)
    log_ratio = 1 + lnv + (v - delta_cap) / 2 * math.log(1 - p)
    valid = t >= t_floor > 0 and log_ratio < 0
    return AnalyticBound.from_value(
        3.0 / v**2,
        "p fixed, v large enough that the threshold conditions hold",
        "kappa = delta failure probability",
        {"delta_cap": delta_cap, "t": t, "t_floor": t_floor, "log_e_v_ratio": log_ratio, "valid": valid},
    )
