"""Monte Carlo trials over G(v, p) grids, per-cell summaries and curve data files.

Every trial seed is derived from (master seed, cell index, trial index), so a
configuration replays to byte-identical record and summary files.  Timings
are kept on the records but left out of data files unless asked for.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace

import numpy as np

from .analytic import concentration_radius, deviation_intervals, solve_cp
from .bounds_engine import BoundConfig, assemble_bound_report
from .errors import DataError, MinrankError, ParameterError
from .graph_core import GnpModel, sample_gnp
from .linalg import DEFAULT_REL_TOL

__all__ = [
    "ExperimentConfig",
    "TrialRecord",
    "trial_seed",
    "run_trial",
    "run_experiment",
    "summarize_records",
    "emit_curve_data",
    "curve_rows",
    "parse_config",
    "load_config",
    "write_records",
    "write_summary",
    "write_json",
    "with_outputs",
    "default_p_grid",
    "CURVE_KINDS",
    "RECORD_COLUMNS",
    "SUMMARY_COLUMNS",
]

RECORDS_SCHEMA = "minrank-records/1"
SUMMARY_SCHEMA = "minrank-summary/1"
CURVES_SCHEMA = "minrank-curves/1"


@dataclass(frozen=True)
class ExperimentConfig:
    v_grid: tuple[int, ...] = (50,)
    p_grid: tuple[float, ...] = (0.5,)
    trials: int = 10
    seed: int = 0
    rel_tol: float = DEFAULT_REL_TOL
    zero_forcing: bool = True
    numeric_minrank: bool = False
    faithful_rep: bool = False
    sah_search: bool = False
    xi_trials: int = 4
    workers: int = 1
    records_path: str | None = None
    summary_path: str | None = None
    include_timings: bool = False

    def __post_init__(self):
        if not self.v_grid or not self.p_grid:
            raise ParameterError("v and p grids must be non-empty")
        for v in self.v_grid:
            if int(v) != v or v < 2:
                raise ParameterError(f"grid value v={v!r} must be an integer >= 2")
        for p in self.p_grid:
            if not (0 < p < 1):
                raise ParameterError(f"grid value p={p!r} must lie in (0, 1)")
        if self.trials < 1:
            raise ParameterError("trials must be >= 1")
        if not (0 <= self.seed < 2**64):
            raise ParameterError("seed must be a 64-bit unsigned integer")
        if not self.rel_tol > 0:
            raise ParameterError("tolerance must be positive")
        if self.workers < 1:
            raise ParameterError("workers must be >= 1")

    @property
    def cells(self) -> list[tuple[int, float]]:
        return list(itertools.product(self.v_grid, self.p_grid))

    def bound_config(self, seed: int) -> BoundConfig:
        return BoundConfig(
            rel_tol=self.rel_tol,
            seed=seed,
            zero_forcing=self.zero_forcing,
            numeric_minrank=self.numeric_minrank,
            faithful_rep=self.faithful_rep,
            sah_search=self.sah_search,
            xi_trials=self.xi_trials,
        )


@dataclass(frozen=True)
class TrialRecord:
    trial_id: str
    cell: int
    trial: int
    v: int
    p: float
    seed: int
    e: int
    delta: int
    Delta: int
    kappa: int
    kappa_eq_delta: bool
    Z: int | None
    Z_exact: bool
    mr_lower: int
    mr_upper_kappa: int
    mr_upper_numeric: int | None
    mr_exact: int | None
    xi_edge_upper: int
    xi_certified: int | None
    runtime_ms: float = field(default=0.0, compare=False)


RECORD_COLUMNS = [f.name for f in fields(TrialRecord) if f.name != "runtime_ms"]


def trial_seed(master_seed: int, cell: int, trial: int) -> int:
    """64-bit seed for one trial: SeedSequence(master, spawn_key=(cell, trial))."""
    ss = np.random.SeedSequence(master_seed, spawn_key=(cell, trial))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def run_trial(config: ExperimentConfig, cell: int, trial: int) -> TrialRecord:
    v, p = config.cells[cell]
    seed = trial_seed(config.seed, cell, trial)
    start = time.perf_counter()
    G = sample_gnp(GnpModel(v, p, seed))
    report = assemble_bound_report(G, config.bound_config(seed))
    elapsed = (time.perf_counter() - start) * 1e3
    Delta = int(G.degrees.max())
    return TrialRecord(
        trial_id=f"c{cell}t{trial}",
        cell=cell,
        trial=trial,
        v=v,
        p=p,
        seed=seed,
        e=report.e,
        delta=report.delta,
        Delta=Delta,
        kappa=report.kappa,
        kappa_eq_delta=report.kappa == report.delta,
        Z=report.zero_forcing,
        Z_exact=report.zero_forcing_exact,
        mr_lower=report.mr_lower,
        mr_upper_kappa=report.mr_upper_kappa,
        mr_upper_numeric=report.mr_upper_numeric,
        mr_exact=report.mr_exact,
        xi_edge_upper=report.xi_edge_upper,
        xi_certified=report.xi_certified,
        runtime_ms=elapsed,
    )


def _run_task(args):
    config, cell, trial = args
    try:
        return run_trial(config, cell, trial)
    except MinrankError as exc:
        raise type(exc)(f"cell {cell} trial {trial}: {exc}") from exc


def run_experiment(config: ExperimentConfig) -> list[TrialRecord]:
    """Run every (cell, trial) and return records ordered by (cell, trial)."""
    tasks = [(config, c, t) for c in range(len(config.cells)) for t in range(config.trials)]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            records = list(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * config.workers))))
    else:
        records = [_run_task(t) for t in tasks]
    records.sort(key=lambda r: (r.cell, r.trial))
    if config.records_path:
        write_records(records, config.records_path, config.include_timings)
    if config.summary_path:
        write_summary(summarize_records(records), config.summary_path)
    return records


# -- summaries ----------------------------------------------------------------

_STAT_COLUMNS = ["e", "delta", "Delta", "kappa", "Z", "mr_lower", "mr_upper_kappa",
                 "mr_upper_numeric", "xi_edge_upper", "xi_certified"]

SUMMARY_COLUMNS = (
    ["v", "p", "n"]
    + [f"{stat}_{c}" for c in _STAT_COLUMNS for stat in ("mean", "std")]
    + [
        "frac_edges_in_interval",
        "frac_degrees_in_interval",
        "frac_edges_and_degrees_in_interval",
        "frac_kappa_eq_delta",
        "concentration_radius",
        "frac_v_minus_kappa_within_radius",
        "frac_mr_exact_within_radius",
        "concentration_quantity",
    ]
)


def _mean_std(values):
    vals = [x for x in values if x is not None]
    if not vals:
        return math.nan, math.nan
    arr = np.asarray(vals, dtype=float)
    return float(arr.mean()), float(arr.std())


def _frac_within(values, radius):
    arr = np.asarray(values, dtype=float)
    if math.isnan(radius):
        return math.nan
    return float(np.mean(np.abs(arr - arr.mean()) <= radius))


def summarize_records(records) -> list[dict]:
    """One row per (v, p) cell with means, standard deviations and interval fractions.

    The mr concentration window sqrt(v ln ln v) is measured on the proxy
    v - kappa (an upper bound on mr), and on mr itself only in cells where
    every sandwich closed; ``concentration_quantity`` names which was used.
    """
    records = list(records)
    if not records:
        raise ParameterError("cannot summarize an empty record set")
    cells: dict[tuple[int, float], list[TrialRecord]] = {}
    for r in records:
        cells.setdefault((r.v, r.p), []).append(r)
    rows = []
    for (v, p), recs in cells.items():
        row: dict = {"v": v, "p": p, "n": len(recs)}
        for col in _STAT_COLUMNS:
            row[f"mean_{col}"], row[f"std_{col}"] = _mean_std(getattr(r, col) for r in recs)
        iv = deviation_intervals(v, p)
        row["frac_edges_in_interval"] = float(np.mean([r.e in iv.edges for r in recs]))
        in_deg = [iv.degrees.lo <= r.delta and r.Delta <= iv.degrees.hi for r in recs]
        row["frac_degrees_in_interval"] = float(np.mean(in_deg))
        row["frac_edges_and_degrees_in_interval"] = float(
            np.mean([ok and r.e in iv.edges for ok, r in zip(in_deg, recs)])
        )
        row["frac_kappa_eq_delta"] = float(np.mean([r.kappa_eq_delta for r in recs]))
        radius = concentration_radius(v)
        row["concentration_radius"] = radius
        row["frac_v_minus_kappa_within_radius"] = _frac_within([r.mr_upper_kappa for r in recs], radius)
        exact = [r.mr_exact for r in recs]
        if all(x is not None for x in exact):
            row["frac_mr_exact_within_radius"] = _frac_within(exact, radius)
            row["concentration_quantity"] = "mr (closed sandwich) and v-kappa proxy"
        else:
            row["frac_mr_exact_within_radius"] = math.nan
            row["concentration_quantity"] = "v-kappa proxy only"
        rows.append(row)
    return rows


# -- files ----------------------------------------------------------------------

def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        return "nan" if math.isnan(x) else repr(x)
    return str(x)


def _write_csv(rows, columns, schema, path):
    buf = io.StringIO()
    buf.write(f"# schema: {schema}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row.get(c)) for c in columns])
    text = buf.getvalue()
    if path is not None:
        os.makedirs(os.path.dirname(os.fspath(path)) or ".", exist_ok=True)
        with open(path, "w", newline="") as fh:
            fh.write(text)
    return text


def write_records(records, path, include_timings: bool = False) -> str:
    cols = RECORD_COLUMNS + (["runtime_ms"] if include_timings else [])
    return _write_csv([asdict(r) for r in records], cols, RECORDS_SCHEMA, path)


def write_summary(rows, path) -> str:
    return _write_csv(rows, SUMMARY_COLUMNS, SUMMARY_SCHEMA, path)


def write_json(rows, path) -> str:
    text = json.dumps(rows, indent=2, sort_keys=False, default=_fmt) + "\n"
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text


# -- figure data ----------------------------------------------------------------

CURVE_KINDS = ("cp_curve", "fig2_curves", "bounds_vs_v")


def default_p_grid(n: int = 99) -> list[float]:
    return [k / (n + 1) for k in range(1, n + 1)]


def curve_rows(kind: str, grid, p: float = 0.5) -> tuple[list[str], list[dict]]:
    """Rows for one curve family.

    cp_curve: (p, c(p)).  fig2_curves: (p, 1 - c(p), sqrt p, p), each row
    checked for strict descent.  bounds_vs_v: (v, c(p) v, (1-p) v + sqrt(7 v ln v)).
    """
    if kind == "cp_curve":
        cols = ["p", "c"]
        rows = []
        for q in grid:
            rows.append({"p": float(q), "c": solve_cp(float(q)).c})
        return cols, rows
    if kind == "fig2_curves":
        cols = ["p", "one_minus_c", "sqrt_p", "p_lower"]
        rows = []
        for q in grid:
            q = float(q)
            row = {"p": q, "one_minus_c": 1 - solve_cp(q).c, "sqrt_p": math.sqrt(q), "p_lower": q}
            if not (row["one_minus_c"] > row["sqrt_p"] > row["p_lower"]):
                raise DataError(f"ordering 1-c(p) > sqrt(p) > p fails at p={q}")
            rows.append(row)
        return cols, rows
    if kind == "bounds_vs_v":
        if not (0 < p < 1):
            raise ParameterError("p must lie in (0, 1)")
        c = solve_cp(p).c
        cols = ["v", "lower_cv", "upper_kappa"]
        rows = []
        for v in grid:
            v = int(v)
            if v < 2:
                raise ParameterError("v grid values must be >= 2")
            rows.append({"v": v, "lower_cv": c * v, "upper_kappa": (1 - p) * v + math.sqrt(7 * v * math.log(v))})
        return cols, rows
    raise ParameterError(f"unknown curve kind {kind!r}; expected one of {CURVE_KINDS}")


def emit_curve_data(kind: str, grid=None, path=None, p: float = 0.5, fmt: str = "csv") -> str:
    """Write (or just return) the CSV/JSON text for a curve family."""
    if grid is None:
        grid = default_p_grid() if kind != "bounds_vs_v" else [2**k for k in range(2, 21)]
    if kind != "bounds_vs_v":
        for q in grid:
            if not (0 < q < 1):
                raise ParameterError(f"p grid value {q!r} outside (0, 1)")
    cols, rows = curve_rows(kind, grid, p)
    if fmt == "json":
        return write_json(rows, path)
    return _write_csv(rows, cols, f"{CURVES_SCHEMA} {kind}", path)


# -- config files ---------------------------------------------------------------

_BOOL = {"1": True, "true": True, "yes": True, "on": True, "0": False, "false": False, "no": False, "off": False}


def _parse_bool(key, text):
    try:
        return _BOOL[text.lower()]
    except KeyError:
        raise ParameterError(f"{key}: expected a boolean, got {text!r}") from None


def _parse_list(text, conv):
    return tuple(conv(x) for x in text.replace(",", " ").split())


_KEYS = {
    "v": ("v_grid", lambda k, s: _parse_list(s, int)),
    "p": ("p_grid", lambda k, s: _parse_list(s, float)),
    "trials": ("trials", lambda k, s: int(s)),
    "seed": ("seed", lambda k, s: int(s)),
    "tol": ("rel_tol", lambda k, s: float(s)),
    "zero_forcing": ("zero_forcing", _parse_bool),
    "numeric_minrank": ("numeric_minrank", _parse_bool),
    "faithful_rep": ("faithful_rep", _parse_bool),
    "sah_search": ("sah_search", _parse_bool),
    "xi_trials": ("xi_trials", lambda k, s: int(s)),
    "workers": ("workers", lambda k, s: int(s)),
    "records": ("records_path", lambda k, s: s),
    "summary": ("summary_path", lambda k, s: s),
    "include_timings": ("include_timings", _parse_bool),
}


def parse_config(text: str, **overrides) -> ExperimentConfig:
    """Parse flat ``key = value`` lines (``#`` starts a comment); keyword overrides win."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if not sep or key not in _KEYS:
            raise ParameterError(f"config line {lineno}: unknown or malformed entry {line!r}")
        name, conv = _KEYS[key]
        try:
            values[name] = conv(key, val)
        except ValueError as exc:
            raise ParameterError(f"config line {lineno}: {exc}") from None
    values.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig(**values)


def load_config(path, **overrides) -> ExperimentConfig:
    with open(path) as fh:
        return parse_config(fh.read(), **overrides)


def with_outputs(config: ExperimentConfig, out_dir) -> ExperimentConfig:
    return replace(
        config,
        records_path=os.path.join(out_dir, "records.csv"),
        summary_path=os.path.join(out_dir, "summary.csv"),
    )
