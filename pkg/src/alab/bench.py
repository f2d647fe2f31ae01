"""Reproducible experiment runner: configs, sweeps, statistics, CSV output.

Every experiment is driven by a flat key=value configuration; reruns with
the same configuration produce byte-identical CSV files (floats are written
with repr, per-task seeds derive deterministically from the master seed,
and parallel execution merges results by task index).
"""

from __future__ import annotations

import concurrent.futures
import csv
import json
import math
import time
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np
from scipy.stats import binom

from . import __version__
from .bounds import (
    lemma1_experiment,
    s_diagnostic,
    theorem1_report,
    theorem2_experiment,
    write_s_diag_csv,
)
from .errors import AlabError, AlreadyAboveWindow, ConfigError, NotReached
from .evolve import required_run_time, schrodinger_evolve
from .hamiltonians import (
    adiabatic_interpolation,
    clause_beginning,
    problem_hamiltonian,
    projector_beginning,
    transverse_field_beginning,
)
from .problems import (
    canonicalize_for_theorem2,
    exact_cover_cost,
    generate_exact_cover_usa,
    grover_cost,
    hamming_cost,
)
from .qstate import TimeDependentHamiltonian, uniform_state
from .spectra import scrambled_curve_experiment, write_curve_csv
from .twolevel import (
    sqrt_n_scaling_experiment,
    theta as twolevel_theta,
    transition_envelope,
    transition_probabilities,
)

EXPERIMENT_KINDS = (
    "two-level",
    "decoupled",
    "exact-cover",
    "scramble-spectrum",
    "bounds-check",
    "s-diagnostic",
    "perm-ensemble",
)

# Per-kind defaults applied where the user left a field unset.
_KIND_DEFAULTS = {
    "two-level": {"t_min": 20.0, "t_max": 160.0, "num_samples": 141},
    "decoupled": {"n_values": (4, 8, 16, 32, 64)},
    "exact-cover": {"n_values": (6, 7, 8, 9, 10, 11, 12), "t_min": 0.1, "t_max": 1e4},
    "scramble-spectrum": {"n_values": (6, 8, 10), "instances": 5, "num_samples": 101},
    "bounds-check": {"n_values": (4, 6, 8, 10), "t_values": (0.5, 5.0, 50.0)},
    "s-diagnostic": {"n_values": (3,), "t_values": (1.0, 2.0, 4.0)},
    "perm-ensemble": {"n_values": (2,), "t_values": (0.5, 1.0, 2.0)},
}


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment's full parameterization.

    Unset optional fields resolve to kind-specific defaults at run time; the
    config round-trips through its text form unchanged.
    """

    kind: str
    n_values: tuple | None = None
    instances: int | None = None
    seed: int = 0
    E: float | None = None  # None -> n/2 for projector runs
    window: tuple = (0.2, 0.21)
    t_min: float | None = None
    t_max: float | None = None
    t_values: tuple | None = None
    steps_per_unit: float | None = None
    num_samples: int | None = None
    workers: int = 1
    out_dir: str = "runs"

    def __post_init__(self):
        if self.kind not in EXPERIMENT_KINDS:
            raise ConfigError(
                f"unknown experiment kind {self.kind!r}; choose from {EXPERIMENT_KINDS}"
            )
        if self.instances is not None and self.instances < 1:
            raise ConfigError(f"instances must be >= 1, got {self.instances}")
        if not (0.0 < self.window[0] < self.window[1] < 1.0):
            raise ConfigError(f"window must satisfy 0 < lo < hi < 1, got {self.window}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        if self.n_values is not None:
            vals = tuple(int(v) for v in self.n_values)
            if any(v < 1 for v in vals):
                raise ConfigError(f"qubit counts must be positive, got {vals}")
            object.__setattr__(self, "n_values", vals)
        if self.t_values is not None:
            object.__setattr__(self, "t_values", tuple(float(v) for v in self.t_values))
        object.__setattr__(self, "window", tuple(float(w) for w in self.window))

    def resolved(self) -> "ExperimentConfig":
        """Fill unset fields with this kind's defaults."""
        updates = {
            key: value
            for key, value in _KIND_DEFAULTS.get(self.kind, {}).items()
            if getattr(self, key) is None
        }
        if self.instances is None and "instances" not in updates:
            updates["instances"] = 50
        return replace(self, **updates) if updates else self

    # -- flat text form ----------------------------------------------------

    def to_text(self) -> str:
        lines = []
        for key, value in asdict(self).items():
            if value is None:
                continue
            if isinstance(value, tuple):
                value = ",".join(repr(v) if isinstance(v, float) else str(v) for v in value)
            lines.append(f"{key}={value}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text: str) -> "ExperimentConfig":
        return ExperimentConfig(**parse_config_pairs(text))


_INT_FIELDS = {"instances", "seed", "workers", "num_samples"}
_FLOAT_FIELDS = {"E", "t_min", "t_max", "steps_per_unit"}
_TUPLE_INT_FIELDS = {"n_values"}
_TUPLE_FLOAT_FIELDS = {"t_values", "window"}


def parse_config_pairs(text: str) -> dict:
    """Parse key=value lines ('#' starts a comment) into constructor kwargs."""
    out: dict = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"malformed config line: {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        try:
            if key in _INT_FIELDS:
                out[key] = int(value)
            elif key in _FLOAT_FIELDS:
                out[key] = float(value)
            elif key in _TUPLE_INT_FIELDS:
                out[key] = tuple(int(v) for v in value.split(",") if v)
            elif key in _TUPLE_FLOAT_FIELDS:
                out[key] = tuple(float(v) for v in value.split(",") if v)
            elif key in ("kind", "out_dir"):
                out[key] = value
            else:
                raise ConfigError(f"unknown config key {key!r}")
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {value!r}") from exc
    return out


@dataclass
class RunRecord:
    """Config snapshot plus everything needed to audit one run."""

    config: dict
    results: dict
    csv_files: list
    wall_clock_s: float
    seed: int
    version: str = __version__
    error_rows: int = 0

    def to_json(self) -> str:
        return json.dumps(
            {
                "config": self.config,
                "results": self.results,
                "csv_files": self.csv_files,
                "wall_clock_s": self.wall_clock_s,
                "seed": self.seed,
                "version": self.version,
                "error_rows": self.error_rows,
            },
            indent=2,
            sort_keys=True,
            default=str,
        )


# ---------------------------------------------------------------------------
# Statistics
# ---------------------------------------------------------------------------

def median_ci(samples, level: float = 0.95) -> tuple:
    """Distribution-free order-statistic confidence interval for the median.

    Picks the largest symmetric ranks (l, m+1-l) whose binomial(m, 1/2) tail
    keeps two-sided coverage >= level, then returns
    (sample median, x_(l), x_(m+1-l)). Raises for sample sizes where even
    the extreme ranks cannot reach the requested coverage (m=5 at the 0.95
    level: two-sided tail 2^-4 > 0.05).
    """
    data = sorted(float(x) for x in samples)
    m = len(data)
    if m < 2:
        raise ValueError("need at least two samples")
    alpha = (1.0 - level) / 2.0
    # largest l >= 1 with P(K <= l-1) <= alpha for K ~ Binom(m, 1/2)
    cdf = binom.cdf(np.arange(m + 1), m, 0.5)
    admissible = np.flatnonzero(cdf[:m] <= alpha + 1e-15)
    if admissible.size == 0:
        raise ValueError(
            f"{m} samples cannot support a level-{level} order-statistic interval"
        )
    l = int(admissible[-1]) + 1
    u = m + 1 - l
    median = data[m // 2] if m % 2 == 1 else 0.5 * (data[m // 2 - 1] + data[m // 2])
    return median, data[l - 1], data[u - 1]


def derive_seed(master_seed: int, *indices: int) -> int:
    """Per-task seed from (master_seed, task indices), stable and documented."""
    ss = np.random.SeedSequence([int(master_seed), *([int(i) for i in indices])])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


# ---------------------------------------------------------------------------
# CSV helpers
# ---------------------------------------------------------------------------

def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _parallel_map(fn, tasks, workers: int):
    if workers <= 1 or len(tasks) <= 1:
        return [fn(task) for task in tasks]
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))


# ---------------------------------------------------------------------------
# Experiment bodies
# ---------------------------------------------------------------------------

def _run_two_level(cfg: ExperimentConfig, out: Path):
    Ts = np.linspace(cfg.t_min, cfg.t_max, cfg.num_samples)
    qs = transition_probabilities(
        Ts, steps_per_unit=cfg.steps_per_unit or 400.0
    )
    env = transition_envelope(Ts, qs)
    window = 2.0 * math.pi / twolevel_theta(1.0)  # one oscillation period
    inner = (Ts >= cfg.t_min + window / 2) & (Ts <= cfg.t_max - window / 2)
    if np.count_nonzero(inner) >= 2:
        slope = float(np.polyfit(np.log(Ts[inner]), np.log(env[inner]), 1)[0])
    else:
        slope = float("nan")
    path = out / "twolevel.csv"
    _write_csv(path, ["T", "q", "envelope_q"], zip(Ts, qs, env))
    return {"fitted_slope": slope}, [path]


def _run_decoupled(cfg: ExperimentConfig, out: Path):
    result = sqrt_n_scaling_experiment(
        n_list=cfg.n_values,
        target=cfg.window[0],
        steps_per_unit=cfg.steps_per_unit or 400.0,
    )
    path = out / "decoupled.csv"
    _write_csv(path, ["n", "t_star"], zip(result.n_values, result.t_stars))
    return {"fitted_exponent": result.exponent, "target": result.target}, [path]


def _exact_cover_task(args):
    """One (n, instance, hb_kind) search; returns a required_t.csv row."""
    n, instance_id, inst_seed, hb_kind, E, window, t_min, t_max, steps_per_unit = args
    inst = generate_exact_cover_usa(n, inst_seed)
    cost = exact_cover_cost(inst)
    if hb_kind == "projector":
        begin = projector_beginning(n, E if E is not None else n / 2)
    else:
        begin = clause_beginning(inst)
    try:
        found = required_run_time(
            begin,
            cost,
            window=window,
            t_min=t_min,
            t_max=t_max,
            steps_per_unit=steps_per_unit or 400.0,
        )
        return [n, instance_id, inst_seed, hb_kind, found.required_T, found.achieved_b, "ok"]
    except AlreadyAboveWindow:
        return [n, instance_id, inst_seed, hb_kind, None, None, "already_above_window"]
    except NotReached:
        return [n, instance_id, inst_seed, hb_kind, None, None, "not_reached"]
    except AlabError as exc:
        return [n, instance_id, inst_seed, hb_kind, None, None, f"error:{type(exc).__name__}"]


def _run_exact_cover(cfg: ExperimentConfig, out: Path):
    tasks = []
    for n in cfg.n_values:
        for i in range(cfg.instances):
            inst_seed = derive_seed(cfg.seed, n, i)
            for hb_kind in ("projector", "clause"):
                tasks.append(
                    (n, i, inst_seed, hb_kind, cfg.E, cfg.window, cfg.t_min, cfg.t_max, cfg.steps_per_unit)
                )
    rows = _parallel_map(_exact_cover_task, tasks, cfg.workers)
    required_path = out / "required_t.csv"
    _write_csv(
        required_path,
        ["n", "instance_id", "seed", "hb_kind", "required_T", "achieved_b", "status"],
        rows,
    )

    median_rows = []
    for n in cfg.n_values:
        for hb_kind in ("projector", "clause"):
            ts = [r[4] for r in rows if r[0] == n and r[3] == hb_kind and r[6] == "ok"]
            if not ts:
                median_rows.append([n, hb_kind, None, None, None, 0])
                continue
            if len(ts) >= 6:
                med, lo, hi = median_ci(ts)
            else:
                med = sorted(ts)[len(ts) // 2] if len(ts) % 2 else 0.5 * (
                    sorted(ts)[len(ts) // 2 - 1] + sorted(ts)[len(ts) // 2]
                )
                lo = hi = None
            median_rows.append([n, hb_kind, med, lo, hi, len(ts)])
    medians_path = out / "medians.csv"
    _write_csv(
        medians_path,
        ["n", "hb_kind", "median_T", "ci_lo", "ci_hi", "successes"],
        median_rows,
    )
    errors = sum(1 for r in rows if str(r[6]).startswith("error:"))
    medians = {
        f"{r[0]}/{r[1]}": r[2] for r in median_rows if r[2] is not None
    }
    return {"medians": medians, "rows": len(rows)}, [required_path, medians_path], errors


def _run_scramble_spectrum(cfg: ExperimentConfig, out: Path):
    paths = []
    summary_rows = []
    for n in cfg.n_values:
        first_seed = derive_seed(cfg.seed, n, 0)
        decoupled, _ = scrambled_curve_experiment(n, first_seed, cfg.num_samples)
        dec_path = out / f"spectrum_decoupled_n{n}.csv"
        write_curve_csv(decoupled, n, dec_path)
        paths.append(dec_path)
        summary_rows.append([n, "", "decoupled", decoupled.min_gap()])
        for i in range(cfg.instances):
            seed = derive_seed(cfg.seed, n, i)
            _, scrambled = scrambled_curve_experiment(n, seed, cfg.num_samples)
            scr_path = out / f"spectrum_scrambled_n{n}_seed{i}.csv"
            write_curve_csv(scrambled, n, scr_path)
            paths.append(scr_path)
            summary_rows.append([n, i, "scrambled", scrambled.min_gap()])
    summary_path = out / "min_gaps.csv"
    _write_csv(summary_path, ["n", "seed_index", "curve", "min_gap"], summary_rows)
    paths.append(summary_path)
    return {"curves": len(paths) - 1}, paths


_BOUNDS_HEADER = [
    "theorem", "n", "N", "k", "E", "T", "b", "eps", "h_star",
    "bound", "measured_T", "measured_value", "satisfied",
]


def _run_bounds_check(cfg: ExperimentConfig, out: Path):
    rows = []
    for n in cfg.n_values:
        E = cfg.E if cfg.E is not None else n / 2
        begin = projector_beginning(n, E)
        costs = {
            "hamming": hamming_cost(n),
            "grover": grover_cost(n, derive_seed(cfg.seed, n, 1) % (1 << n)),
        }
        if n >= 4:
            inst = generate_exact_cover_usa(n, derive_seed(cfg.seed, n, 2))
            costs["exact-cover"] = exact_cover_cost(inst)
        for label, cost in costs.items():
            for T in cfg.t_values:
                H = adiabatic_interpolation(begin, problem_hamiltonian(cost), T)
                res = schrodinger_evolve(H, uniform_state(n), cost=cost)
                rep = theorem1_report(res.success_probability, E, cost.dim, cost.k, T)
                rows.append([
                    f"theorem1/{label}", n, cost.dim, cost.k, E, T,
                    rep.inputs["b"], None, None,
                    rep.bound_value, T, None, rep.satisfied,
                ])
    path = out / "bounds.csv"
    _write_csv(path, _BOUNDS_HEADER, rows)
    violations = sum(1 for r in rows if r[-1] is False)
    return {"rows": len(rows), "violations": violations}, [path]


def _run_s_diagnostic(cfg: ExperimentConfig, out: Path):
    n = cfg.n_values[0]
    E = cfg.E if cfg.E is not None else n / 2
    cost = hamming_cost(n)
    paths = []
    results = {}
    for T in cfg.t_values:
        diag = s_diagnostic(cost, E, T, t_samples=cfg.num_samples or 33)
        path = out / f"s_diag_T{_fmt(T)}.csv"
        write_s_diag_csv(diag, path)
        paths.append(path)
        results[f"T={_fmt(T)}"] = {"b": diag.b, "checks": diag.checks()}
    return results, paths


def _run_perm_ensemble(cfg: ExperimentConfig, out: Path):
    n = cfg.n_values[0]
    cost = canonicalize_for_theorem2(hamming_cost(n))
    rows = []
    for T in cfg.t_values:
        # Adiabatic algorithm in driver + c(t)*problem form: the driver is
        # the bare (1-t/T) H_B term and the scrambled cost enters with t/T.
        driver = TimeDependentHamiltonian(
            terms=((transverse_field_beginning(n), lambda t, T=T: 1.0 - t / T),),
            total_time=T,
        )
        lemma1 = lemma1_experiment(cost, driver, lambda t, T=T: t / T, T)
        rows.append([
            "lemma1", n, cost.dim, cost.k, None, T, None, None, lemma1.h_star,
            lemma1.bound, None, lemma1.pair_sum, lemma1.satisfied,
        ])
        t2 = theorem2_experiment(
            cost, driver, lambda t, T=T: t / T, T, b=cfg.window[0]
        )
        rows.append([
            "theorem2", n, cost.dim, cost.k, None, T, cfg.window[0],
            t2.eps, t2.report.inputs["h_star"],
            t2.report.bound_value, T, None, t2.report.satisfied,
        ])
    path = out / "bounds.csv"
    _write_csv(path, _BOUNDS_HEADER, rows)
    return {"rows": len(rows)}, [path]


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def run(config: ExperimentConfig) -> RunRecord:
    """Execute the configured experiment, writing CSVs and a run record."""
    cfg = config.resolved()
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    started = time.perf_counter()
    error_rows = 0

    if cfg.kind == "two-level":
        results, paths = _run_two_level(cfg, out)
    elif cfg.kind == "decoupled":
        results, paths = _run_decoupled(cfg, out)
    elif cfg.kind == "exact-cover":
        results, paths, error_rows = _run_exact_cover(cfg, out)
    elif cfg.kind == "scramble-spectrum":
        results, paths = _run_scramble_spectrum(cfg, out)
    elif cfg.kind == "bounds-check":
        results, paths = _run_bounds_check(cfg, out)
    elif cfg.kind == "s-diagnostic":
        results, paths = _run_s_diagnostic(cfg, out)
    elif cfg.kind == "perm-ensemble":
        results, paths = _run_perm_ensemble(cfg, out)
    else:  # pragma: no cover - guarded by ExperimentConfig
        raise ConfigError(f"unhandled kind {cfg.kind}")

    record = RunRecord(
        config=asdict(cfg),
        results=results,
        csv_files=[str(p) for p in paths],
        wall_clock_s=time.perf_counter() - started,
        seed=cfg.seed,
        error_rows=error_rows,
    )
    with open(out / "run_record.json", "w") as fh:
        fh.write(record.to_json())
    return record
