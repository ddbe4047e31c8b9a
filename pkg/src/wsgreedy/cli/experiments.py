"""Constellation experiments: budgeted MSE selection, threshold coverage, robust max-min.

Each experiment walks the horizon step by step; every (algorithm, r, B or F,
seed) cell keeps its own filter state. Scenario randomness (points, costs,
truth, noise) comes from named streams of the scenario seed, so the
algorithm seeds only change sampling inside the selectors.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..algorithms import (
    DrgConfig,
    MrgConfig,
    WssaConfig,
    drg,
    entire_set,
    mrg,
    random_wssa,
    top_k_baseline,
)
from ..core import CostModel
from ..dynest import UkfBelief, advance_truth, ukf_predict_many, ukf_update
from ..objectives import MseReductionObjective, MseSnapshot, NormalizedObjective, coverage_objective
from ..orbitsim import build_grid, build_walker_delta, eci_to_ecef, propagate_all, sample_sphere_points, visibility
from .config import ScenarioConfig, run_seed

log = logging.getLogger(__name__)

RUN_HEADER = ["step", "algorithm", "r", "B_or_A", "objective", "cost", "size", "oracle_calls", "wall_ms", "seed"]
SUMMARY_HEADER = ["algorithm", "r", "B_or_A", "mean_objective", "mean_cost", "mean_wall_ms"]
SELECTION_HEADER = ["step", "algorithm", "r", "B_or_A", "seed", "elements"]
TRAJECTORY_HEADER = [
    "step", "algorithm", "r", "B_or_A", "seed", "task", "point",
    "truth_x", "truth_y", "truth_z", "mean_x", "mean_y", "mean_z", "cov_trace",
]  # fmt: skip

# climatology-ish spread for initial truth states
_TRUTH_CENTER = np.array([0.0, 0.0, 25.0])
_TRUTH_SCALE = np.array([8.0, 9.0, 8.0])


@dataclass(frozen=True)
class Cell:
    algorithm: str
    r: int
    level: float  # budget B, coverage fraction F, or inf for the entire set
    seed: int


@dataclass
class Figure:
    name: str
    title: str
    ylabel: str
    steps: list
    series: dict  # label -> list of values aligned with steps
    window: int = 1


@dataclass
class RunReport:
    experiment: str
    rows: list = field(default_factory=list)
    selections: list = field(default_factory=list)
    details: list = field(default_factory=list)
    details_header: list = field(default_factory=list)
    trajectories: list = field(default_factory=list)
    figures: list = field(default_factory=list)
    costs: Optional[np.ndarray] = None
    config_text: str = ""
    alpha: float = 1.0  # budget relaxation used by the saturation runs

    def summary(self) -> list:
        groups: dict = {}
        for row in self.rows:
            groups.setdefault((row["algorithm"], row["r"], row["B_or_A"]), []).append(row)
        out = []
        for (alg, r, level), rows in groups.items():
            out.append(
                {
                    "algorithm": alg,
                    "r": r,
                    "B_or_A": level,
                    "mean_objective": math.fsum(x["objective"] for x in rows) / len(rows),
                    "mean_cost": math.fsum(x["cost"] for x in rows) / len(rows),
                    "mean_wall_ms": math.fsum(x["wall_ms"] for x in rows) / len(rows),
                }
            )
        return out

    def rows_for(self, algorithm=None, r=None, level=None) -> list:
        return [
            x
            for x in self.rows
            if (algorithm is None or x["algorithm"] == algorithm)
            and (r is None or x["r"] == r)
            and (level is None or x["B_or_A"] == level)
        ]


class Scenario:
    def __init__(self, cfg: ScenarioConfig):
        self.cfg = cfg
        self.ephemeris = build_walker_delta(cfg.walker)
        self.n = self.ephemeris.count
        c = cfg.raw["costs"]
        self.costs = CostModel(cfg.stream("costs", c["seed"]).uniform(c["low"], c["high"], self.n))
        self.dt = cfg.step_seconds

    def sat_ecef(self, step: int) -> np.ndarray:
        t = step * self.dt
        return eci_to_ecef(propagate_all(self.ephemeris, t), t)


class SensingTask:
    """Lorenz-63 points watched by the constellation, with pre-drawn truth and noise."""

    def __init__(self, cfg: ScenarioConfig, scenario: Scenario, name: str, n_points: int):
        self.name = name
        self.lorenz = cfg.lorenz
        self.meas_cov = cfg.meas_cov
        self.half_angle = cfg.half_angle
        H = cfg.horizon
        self.points = sample_sphere_points(cfg.stream(f"points/{name}", cfg.raw["points"]["seed"]), n_points)

        rng = cfg.stream(f"truth/{name}")
        truth = np.empty((H + 1, n_points, 3))
        truth[0] = _TRUTH_CENTER + _TRUTH_SCALE * rng.standard_normal((n_points, 3))
        for s in range(1, H + 1):
            truth[s] = advance_truth(truth[s - 1], self.lorenz, cfg.step_seconds, rng)
        self.truth = truth

        chol = np.linalg.cholesky(self.meas_cov)
        self.noise = cfg.stream(f"noise/{name}").standard_normal((H, n_points, scenario.n, 3)) @ chol.T
        init = cfg.stream(f"init/{name}").standard_normal((n_points, 3))
        self._init_means = truth[0] + init
        self._init_cov = cfg.raw["initial_cov"] * np.eye(3)
        self.sigma = cfg.sigma

    def initial_beliefs(self) -> list:
        return [UkfBelief(m.copy(), self._init_cov.copy(), self.sigma) for m in self._init_means]

    def visibility(self, sat_ecef: np.ndarray) -> np.ndarray:
        return visibility(sat_ecef, self.points, self.half_angle)

    def objective(self, beliefs, vis) -> MseReductionObjective:
        covs = np.stack([b.cov for b in beliefs])
        return MseReductionObjective(MseSnapshot(covs, vis, self.meas_cov))

    def update(self, beliefs, step: int, vis, selected) -> list:
        chosen = sorted(selected)
        out = []
        for p, b in enumerate(beliefs):
            zs = [self.truth[step, p] + self.noise[step - 1, p, n] for n in chosen if vis[n, p]]
            out.append(ukf_update(b, zs, self.meas_cov) if zs else b)
        return out

    def errors(self, beliefs, step: int) -> tuple:
        """(sum of covariance traces, realized squared error) over the points."""
        tr = math.fsum(float(np.trace(b.cov)) for b in beliefs)
        sq = math.fsum(float(np.sum((b.mean - self.truth[step, p]) ** 2)) for p, b in enumerate(beliefs))
        return tr, sq


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, 1000.0 * (time.perf_counter() - t0)


def _row(step, cell, objective, cost, size, calls, wall, timing):
    return {
        "step": step,
        "algorithm": cell.algorithm,
        "r": cell.r,
        "B_or_A": cell.level,
        "objective": float(objective),
        "cost": float(cost),
        "size": int(size),
        "oracle_calls": int(calls),
        "wall_ms": float(wall) if timing else 0.0,
        "seed": cell.seed,
    }


def _selection_row(step, cell, selected):
    return {
        "step": step,
        "algorithm": cell.algorithm,
        "r": cell.r,
        "B_or_A": cell.level,
        "seed": cell.seed,
        "elements": " ".join(str(j) for j in sorted(selected)),
    }


def _label(cell: Cell) -> str:
    return f"{cell.algorithm}/{cell.r}/{cell.level!r}"


def _mean_series(report: RunReport, cells, key, steps) -> dict:
    """Per-step mean of ``key`` over seeds, one series per (algorithm, r) at each level."""
    by_series: dict = {}
    for cell in cells:
        if cell.algorithm == "entire":
            label = "entire set"
        elif cell.algorithm in ("top_k", "ssa"):
            label = {"top_k": "Top-K", "ssa": "SSA"}[cell.algorithm]
        else:
            label = f"r={cell.r}"
        by_series.setdefault((cell.level, label), set()).add(cell)
    index = {}
    for row in report.rows:
        index.setdefault((row["algorithm"], row["r"], row["B_or_A"], row["seed"]), {})[row["step"]] = row[key]
    out: dict = {}
    for (level, label), group in by_series.items():
        vals = []
        for s in steps:
            xs = [index[(c.algorithm, c.r, c.level, c.seed)][s] for c in sorted(group, key=lambda c: c.seed)]
            vals.append(math.fsum(xs) / len(xs))
        out.setdefault(level, {})[label] = vals
    return out


def _sort_rows(report: RunReport, cells) -> None:
    order = {c: i for i, c in enumerate(cells)}

    def key(row):
        return order[Cell(row["algorithm"], row["r"], row["B_or_A"], row["seed"])], row["step"]

    report.rows.sort(key=key)
    report.selections.sort(key=key)
    if report.details and "algorithm" in report.details[0]:
        report.details.sort(key=key)
    if report.trajectories:
        report.trajectories.sort(key=lambda row: (*key(row), row["task"], row["point"]))


# -- experiment A: budgeted MSE reduction -----------------------------------


def _cells_a(cfg: ScenarioConfig, n: int) -> list:
    alg = cfg.algorithm
    cells = []
    for seed in alg.seeds:
        if "entire" in alg.baselines:
            cells.append(Cell("entire", n, math.inf, int(seed)))
        for B in alg.budgets:
            if "top_k" in alg.baselines:
                cells.append(Cell("top_k", n, float(B), int(seed)))
            for r in alg.rs:
                cells.append(Cell("mrg", min(int(r), n), float(B), int(seed)))
    return list(dict.fromkeys(cells))


def run_experiment_A(cfg: ScenarioConfig, trajectories: bool = True) -> RunReport:
    sc = Scenario(cfg)
    task = SensingTask(cfg, sc, "A", int(cfg.raw["points"]["count"]))
    alg = cfg.algorithm
    timing = bool(cfg.raw["timing"])
    cells = _cells_a(cfg, sc.n)
    report = RunReport("A", costs=sc.costs.costs.copy(), config_text=cfg.dump())
    report.details_header = ["step", "algorithm", "r", "B_or_A", "seed", "mse_trace", "squared_error",
                             "mse_reduction", "fallback_used"]  # fmt: skip
    beliefs = {c: task.initial_beliefs() for c in cells}

    for step in range(1, cfg.horizon + 1):
        vis = task.visibility(sc.sat_ecef(step))
        for cell in cells:
            prior = ukf_predict_many(beliefs[cell], task.lorenz, sc.dt)
            f = task.objective(prior, vis)
            seed = run_seed(cell.seed, step, _label(cell))
            if cell.algorithm == "entire":
                trace, wall = _timed(lambda: entire_set(f, sc.costs))
            elif cell.algorithm == "top_k":
                trace, wall = _timed(lambda: top_k_baseline(f, sc.costs, cell.level))
            else:
                config = MrgConfig(budget=cell.level, epsilon=alg.epsilon, r=cell.r, seed=seed)
                trace, wall = _timed(lambda: mrg(f, sc.costs, config))
            post = task.update(prior, step, vis, trace.selected)
            beliefs[cell] = post
            mse, sq = task.errors(post, step)
            report.rows.append(_row(step, cell, mse, trace.cost, trace.size, trace.oracle_call_count, wall, timing))
            report.selections.append(_selection_row(step, cell, trace.selected))
            report.details.append(
                {
                    "step": step, "algorithm": cell.algorithm, "r": cell.r, "B_or_A": cell.level,
                    "seed": cell.seed, "mse_trace": mse, "squared_error": sq, "mse_reduction": trace.value,
                    "fallback_used": int(trace.fallback_used),
                }  # fmt: skip
            )
            if trajectories:
                report.trajectories.extend(_trajectory_rows(step, cell, task, post))
        log.debug("experiment A step %d done", step)

    _sort_rows(report, cells)
    steps = list(range(1, cfg.horizon + 1))
    series = _mean_series(report, cells, "objective", steps)
    entire = series.pop(math.inf, {})
    for level, s in series.items():
        report.figures.append(
            Figure(
                f"mse_B{level:g}", f"Total MSE, B = {level:g}", "total MSE (covariance trace)", steps, {**s, **entire}
            )
        )
    return report


def _trajectory_rows(step, cell, task, beliefs):
    rows = []
    for p, b in enumerate(beliefs):
        t = task.truth[step, p]
        rows.append(
            {
                "step": step, "algorithm": cell.algorithm, "r": cell.r, "B_or_A": cell.level, "seed": cell.seed,
                "task": task.name, "point": p, "truth_x": t[0], "truth_y": t[1], "truth_z": t[2],
                "mean_x": b.mean[0], "mean_y": b.mean[1], "mean_z": b.mean[2], "cov_trace": float(np.trace(b.cov)),
            }  # fmt: skip
        )
    return rows


# -- experiment B: threshold coverage ---------------------------------------


def run_experiment_B(cfg: ScenarioConfig) -> RunReport:
    sc = Scenario(cfg)
    grid = build_grid(cfg.raw["grid_resolution_deg"])
    alg = cfg.algorithm
    timing = bool(cfg.raw["timing"])
    cells = list(
        dict.fromkeys(
            Cell("drg", min(int(r), sc.n), float(F), int(seed))
            for seed in alg.seeds
            for F in alg.fractions
            for r in alg.rs
        )
    )
    report = RunReport("B", costs=sc.costs.costs.copy(), config_text=cfg.dump())
    report.details_header = ["step", "algorithm", "r", "B_or_A", "seed", "threshold", "full_coverage", "coverage"]

    for step in range(1, cfg.horizon + 1):
        vis = visibility(sc.sat_ecef(step), grid.centroids, cfg.half_angle)
        for cell in cells:
            f = coverage_objective(grid.areas, vis)
            full = f(range(sc.n))
            A = cell.level * full
            config = DrgConfig(threshold=A, epsilon=alg.epsilon, r=cell.r, seed=run_seed(cell.seed, step, _label(cell)))
            trace, wall = _timed(lambda: drg(f, sc.costs, config))
            calls = trace.oracle_call_count
            report.rows.append(_row(step, cell, trace.value, trace.cost, trace.size, calls, wall, timing))
            report.selections.append(_selection_row(step, cell, trace.selected))
            report.details.append(
                {
                    "step": step, "algorithm": cell.algorithm, "r": cell.r, "B_or_A": cell.level,
                    "seed": cell.seed, "threshold": A, "full_coverage": full, "coverage": trace.value,
                }  # fmt: skip
            )
    _sort_rows(report, cells)
    steps = list(range(1, cfg.horizon + 1))
    for level, s in _mean_series(report, cells, "cost", steps).items():
        report.figures.append(Figure(f"cost_F{level:g}", f"Selection cost, F = {level:g}", "selection cost", steps, s))
    return report


# -- experiment C: robust max-min -------------------------------------------


def run_experiment_C(cfg: ScenarioConfig) -> RunReport:
    sc = Scenario(cfg)
    grid = build_grid(cfg.raw["grid_resolution_deg"])
    alg = cfg.algorithm
    timing = bool(cfg.raw["timing"])
    spec = cfg.raw["tasks"]
    tasks = [SensingTask(cfg, sc, f"task{i}", int(spec["points_per_task"])) for i in range(int(spec["sensing"]))]
    use_coverage = bool(spec["coverage"])
    labels = [t.name for t in tasks] + (["coverage"] if use_coverage else [])

    cells = []
    for seed in alg.seeds:
        for B in alg.budgets:
            if "ssa" in alg.baselines:
                cells.append(Cell("ssa", sc.n, float(B), int(seed)))
            for r in alg.rs:
                cells.append(Cell("random_wssa", min(int(r), sc.n), float(B), int(seed)))
    cells = list(dict.fromkeys(cells))

    report = RunReport("C", costs=sc.costs.costs.copy(), config_text=cfg.dump(), alpha=alg.alpha)
    report.details_header = ["step", "algorithm", "r", "B_or_A", "seed", "k_achieved", "outer_iterations",
                             "interval_width", "active_tasks"] + labels  # fmt: skip
    beliefs = {c: [t.initial_beliefs() for t in tasks] for c in cells}

    for step in range(1, cfg.horizon + 1):
        sat = sc.sat_ecef(step)
        vis = [t.visibility(sat) for t in tasks]
        cov_vis = visibility(sat, grid.centroids, cfg.half_angle) if use_coverage else None
        for cell in cells:
            priors = [ukf_predict_many(b, t.lorenz, sc.dt) for t, b in zip(tasks, beliefs[cell])]
            raw = [t.objective(p, v) for t, p, v in zip(tasks, priors, vis)]
            if use_coverage:
                raw.append(coverage_objective(grid.areas, cov_vis))
            # a task nobody can serve this step has no normalizer and is left out
            active = [(i, NormalizedObjective(f)) for i, f in enumerate(raw) if f(range(sc.n)) > 0]
            config = WssaConfig(
                budget=cell.level,
                alpha=alg.alpha,
                epsilon=alg.epsilon,
                r=cell.r,
                # ssa shares the r=|N| stream so the two are comparable run for run
                seed=run_seed(cell.seed, step, f"random_wssa/{cell.r}/{cell.level!r}"),
            )
            if active:
                result, wall = _timed(lambda: random_wssa([f for _, f in active], sc.costs, config))
                selected, k, P = result.selected, result.k_achieved, result.outer_iterations
                width = result.interval[1] - result.interval[0]
                value, calls = result.value, result.oracle_call_count
                per_task = {i: f(selected) for i, f in active}
            else:
                selected, k, P, width, value, calls, wall = frozenset(), 0.0, 0, 0.0, 0.0, 0, 0.0
                per_task = {}
            beliefs[cell] = [t.update(p, step, v, selected) for t, p, v in zip(tasks, priors, vis)]
            cost = sc.costs.total_cost(selected)
            report.rows.append(_row(step, cell, value, cost, len(selected), calls, wall, timing))
            report.selections.append(_selection_row(step, cell, selected))
            detail = {
                "step": step, "algorithm": cell.algorithm, "r": cell.r, "B_or_A": cell.level, "seed": cell.seed,
                "k_achieved": k, "outer_iterations": P, "interval_width": width, "active_tasks": len(active),
            }  # fmt: skip
            for i, name in enumerate(labels):
                detail[name] = per_task.get(i, math.nan)
            report.details.append(detail)
    _sort_rows(report, cells)
    steps = list(range(1, cfg.horizon + 1))
    for level, s in _mean_series(report, cells, "objective", steps).items():
        report.figures.append(
            Figure(
                f"utility_B{level:g}", f"Worst normalized utility, B = {level:g}", "min_i f^i(S)", steps, s, window=10
            )
        )
    return report


RUNNERS = {"A": run_experiment_A, "B": run_experiment_B, "C": run_experiment_C}
