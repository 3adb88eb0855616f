"""Experiment orchestration: seeding, sweeps, rate fits, and CSV reports.

A run sweeps a grid of sequence lengths; for each n it draws R normalized
final sums from their exact law (per-replication seeds derived from the
master seed and the tag "xn<n>"), computes the pooled empirical Wasserstein
distance to N(0,1) with a batch standard error, evaluates the requested
bound right-hand sides from population quantities, and emits one CSV row
per (n, bound). Replications are split into fixed-size chunks assigned to
worker threads by chunk index, so results are bit-identical for any worker
count, and the CSV body is byte-identical across runs with equal configs
(only the leading '#' timestamp line varies).

Rates are quantified by ordinary least squares on (log n, log W): the
fitted slope estimates the decay exponent, with the usual residual-based
standard error. At R replications the pooled W1 estimate carries a sampling
floor of order R^{-1/2}, so fitted slopes flatten once the true distance
approaches that floor.
"""

from __future__ import annotations

import dataclasses
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from .bounds import BOUND_IDS, ModelAnalytics, evaluate_bound
from .errors import ConfigError, DataError, DomainError
from .mds import MODEL_KINDS, make_model, sample_final_sums
from .nfunc import NFunction, from_spec
from .rng import derive_seed_array
from .wasserstein import wr_vs_normal_batched

DEFAULT_N_GRID = tuple(2 ** k for k in range(6, 15))
DEFAULT_REPLICATIONS = 100_000

CSV_COLUMNS = ("model", "bound", "n", "r", "reps", "seed", "w_value", "w_stderr",
               "L_term", "v_term", "extra_terms", "rhs_value", "ratio")

_CHUNK = 16_384
_MODEL_MIN_N = {"example_5_1": 5, "example_5_2": 3}


@dataclass(frozen=True)
class ExperimentConfig:
    """A validated experiment description (JSON-serializable, snake_case)."""

    model: str
    n_grid: tuple = DEFAULT_N_GRID
    replications: int = DEFAULT_REPLICATIONS
    batches: int = 20
    r: float = 1.0
    nfunc: str = "power:3"
    bounds: tuple = ()
    master_seed: int = 0
    output: str = None
    threads: int = 1
    q: float = 1.0
    p: float = None

    def __post_init__(self):
        if self.model not in MODEL_KINDS:
            raise ConfigError(f"unknown model {self.model!r}")
        grid = tuple(int(n) for n in self.n_grid)
        object.__setattr__(self, "n_grid", grid)
        if len(grid) == 0 or any(b <= a for a, b in zip(grid, grid[1:])):
            raise ConfigError("n_grid must be non-empty and strictly increasing")
        if grid[0] < _MODEL_MIN_N.get(self.model, 1):
            raise ConfigError(f"n_grid starts below the minimum n for {self.model}")
        if self.batches < 2:
            raise ConfigError("batches must be >= 2")
        if self.replications < self.batches or self.replications % self.batches:
            raise ConfigError("replications must be a positive multiple of batches")
        if not 1.0 <= float(self.r) <= 3.0:
            raise ConfigError("distance order r must lie in [1, 3]")
        object.__setattr__(self, "bounds", tuple(self.bounds))
        unknown = [b for b in self.bounds if b not in BOUND_IDS]
        if unknown:
            raise ConfigError(f"unknown bound ids {unknown}")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        if not 0 <= int(self.master_seed) < 2 ** 64:
            raise ConfigError("master_seed must fit in 64 bits")

    @staticmethod
    def from_dict(data: dict) -> "ExperimentConfig":
        known = {f.name for f in dataclasses.fields(ExperimentConfig)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        return ExperimentConfig(**data)

    @staticmethod
    def from_json(path: str) -> "ExperimentConfig":
        try:
            with open(path) as handle:
                data = json.load(handle)
        except OSError as exc:
            raise DataError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"config {path} must hold a JSON object")
        return ExperimentConfig.from_dict(data)


def _sample_chunked(model, seeds: np.ndarray, threads: int) -> np.ndarray:
    """Sample final sums in fixed _CHUNK-sized pieces placed by index, so
    the result is independent of the worker count."""
    if threads <= 1 or len(seeds) <= _CHUNK:
        return sample_final_sums(model, seeds)
    out = np.empty(len(seeds))
    starts = list(range(0, len(seeds), _CHUNK))

    def work(start: int):
        return start, sample_final_sums(model, seeds[start:start + _CHUNK])

    with ThreadPoolExecutor(max_workers=threads) as pool:
        for start, values in pool.map(work, starts):
            out[start:start + len(values)] = values
    return out


def _bound_rows(config: ExperimentConfig, model, nf, estimate, n: int) -> list:
    base = {"model": config.model, "n": n, "r": config.r,
            "reps": config.replications, "seed": config.master_seed,
            "w_value": estimate.value, "w_stderr": estimate.stderr}
    if not config.bounds:
        row = dict(base)
        row.update({"bound": "none", "L_term": None, "v_term": None,
                    "extra_terms": None, "rhs_value": None, "ratio": None})
        return [row]
    analytics = ModelAnalytics(model, nf)
    family = int(config.r) if float(config.r).is_integer() else None
    rows = []
    for bound_id in config.bounds:
        if family is None and bound_id.startswith("cor33"):
            raise DomainError("corollary bounds need an integer distance order")
        report = evaluate_bound(bound_id, analytics,
                                family=family if family is not None else 1,
                                p=config.p, q=config.q,
                                reps=config.replications,
                                seed=config.master_seed)
        row = dict(base)
        row.update({"bound": bound_id,
                    "L_term": report.l_term(), "v_term": report.v_term(),
                    "extra_terms": report.extra_terms(),
                    "rhs_value": report.value,
                    "ratio": estimate.value / report.value
                    if report.value > 0 else math.inf})
        rows.append(row)
    return rows


def run_experiment(config: ExperimentConfig) -> list:
    """Execute the sweep; returns the report rows and writes the CSV when
    the config names an output path."""
    nf = from_spec(config.nfunc) if config.nfunc else None
    rows = []
    for n in config.n_grid:
        model = make_model(config.model, n)
        seeds = derive_seed_array(config.master_seed,
                                  np.arange(config.replications), f"xn{n}")
        samples = _sample_chunked(model, seeds, config.threads)
        estimate = wr_vs_normal_batched(samples, config.r, config.batches)
        rows.extend(_bound_rows(config, model, nf, estimate, n))
    if config.output:
        write_csv(rows, config.output)
    return rows


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


def write_csv(rows, path: str):
    """One '#' timestamp line, a header, then one line per row; floats are
    rendered with 17 significant digits so equal runs are byte-identical
    below the timestamp."""
    lines = ["# generated " + datetime.now(timezone.utc).isoformat()]
    lines.append(",".join(CSV_COLUMNS))
    for row in rows:
        lines.append(",".join(_format_cell(row[col]) for col in CSV_COLUMNS))
    try:
        with open(path, "w") as handle:
            handle.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise DataError(f"cannot write report {path}: {exc}") from exc


@dataclass(frozen=True)
class RateFit:
    """OLS fit of log W against log n."""

    slope: float
    intercept: float
    slope_stderr: float


def fit_rate(points) -> RateFit:
    """Least-squares decay exponent from (n, W) pairs; needs >= 3 points
    with positive W. The slope standard error uses the residual variance
    with k - 2 degrees of freedom."""
    pts = [(float(n), float(w)) for n, w in points]
    if len(pts) < 3:
        raise DomainError("rate fit needs at least 3 grid points")
    if any(w <= 0 for _, w in pts):
        raise DomainError("rate fit needs positive distance values")
    lx = np.log([n for n, _ in pts])
    ly = np.log([w for _, w in pts])
    dx = lx - lx.mean()
    sxx = float(np.sum(dx * dx))
    if sxx == 0.0:
        raise DomainError("rate fit needs distinct n values")
    slope = float(np.sum(dx * (ly - ly.mean())) / sxx)
    intercept = float(ly.mean() - slope * lx.mean())
    resid = ly - (intercept + slope * lx)
    dof = len(pts) - 2
    stderr = math.sqrt(float(np.sum(resid * resid)) / dof / sxx) if dof else 0.0
    return RateFit(slope, intercept, stderr)


def distance_points(rows) -> list:
    """Deduplicated (n, w_value) pairs from report rows, grid order."""
    seen = {}
    for row in rows:
        seen.setdefault(row["n"], row["w_value"])
    return sorted(seen.items())


def ratio_points(rows, bound_id: str) -> list:
    """(n, w_value/rhs_value) pairs for one bound id, grid order."""
    return sorted((row["n"], row["ratio"]) for row in rows
                  if row["bound"] == bound_id)


def plot_rates(rows, path: str):
    """Log-log SVG chart of the measured distance (and bound right-hand
    sides, when present) against n."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    pts = distance_points(rows)
    ax.loglog([n for n, _ in pts], [w for _, w in pts], "o-", label="measured")
    for bound_id in sorted({row["bound"] for row in rows if row["bound"] != "none"}):
        bound_rows = sorted((row["n"], row["rhs_value"]) for row in rows
                            if row["bound"] == bound_id)
        ax.loglog([n for n, _ in bound_rows], [v for _, v in bound_rows],
                  "s--", label=bound_id)
    ax.set_xlabel("n")
    ax.set_ylabel("distance")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    try:
        fig.savefig(path, format="svg")
    except OSError as exc:
        raise DataError(f"cannot write plot {path}: {exc}") from exc
    finally:
        plt.close(fig)
