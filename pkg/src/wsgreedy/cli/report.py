"""CSV emission and re-verification of experiment reports."""

from __future__ import annotations

import csv
import io
import math
from pathlib import Path

import numpy as np

from .experiments import RUN_HEADER, SELECTION_HEADER, SUMMARY_HEADER, TRAJECTORY_HEADER, RunReport

_INT_COLUMNS = {"step", "r", "size", "oracle_calls", "seed", "point", "outer_iterations", "active_tasks",
                "fallback_used"}  # fmt: skip
_STR_COLUMNS = {"algorithm", "elements", "task"}


class ConstraintViolation(AssertionError):
    pass


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _parse(column: str, text: str):
    if column in _STR_COLUMNS:
        return text
    if column in _INT_COLUMNS:
        return int(text)
    return float(text)


def write_csv(path: Path, header, rows) -> Path:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(row[h]) for h in header])
    path.write_text(buf.getvalue())
    return path


def read_csv(path) -> list:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        return [{k: _parse(k, v) for k, v in row.items()} for row in reader]


def smooth(values, window: int) -> list:
    """Trailing moving average; the first points average what is available."""
    if window <= 1:
        return list(values)
    out = []
    for i in range(len(values)):
        chunk = values[max(0, i - window + 1) : i + 1]
        out.append(math.fsum(chunk) / len(chunk))
    return out


def figure_rows(figure) -> tuple:
    labels = list(figure.series)
    header = ["step"] + labels
    smoothed = {k: smooth(v, figure.window) for k, v in figure.series.items()}
    rows = [{"step": s, **{k: smoothed[k][i] for k in labels}} for i, s in enumerate(figure.steps)]
    return header, rows


def verify_constraints(report: RunReport, tol: float = 1e-9) -> None:
    """Recheck every logged selection against its constraint from the raw sets."""
    costs = report.costs
    details = {
        (d["algorithm"], d["r"], d["B_or_A"], d["seed"], d["step"]): d for d in report.details if "algorithm" in d
    }
    for sel in report.selections:
        members = [int(x) for x in sel["elements"].split()] if sel["elements"] else []
        cost = math.fsum(costs[j] for j in sorted(members))
        alg, level = sel["algorithm"], sel["B_or_A"]
        key = (alg, sel["r"], level, sel["seed"], sel["step"])
        if alg in ("mrg", "top_k"):
            limit = level
        elif alg in ("random_wssa", "ssa"):
            limit = report.alpha * level
        else:
            limit = math.inf
        if cost > limit + tol * max(1.0, limit if math.isfinite(limit) else 1.0):
            raise ConstraintViolation(f"{key}: cost {cost} exceeds budget {limit}")
        if alg == "drg":
            d = details[key]
            if d["coverage"] < d["threshold"] - tol * max(1.0, d["threshold"]):
                raise ConstraintViolation(f"{key}: coverage {d['coverage']} below {d['threshold']}")


def emit_report(report: RunReport, out_dir, fmt: str = "csv", plots: bool = True) -> list:
    if fmt != "csv":
        raise ValueError(f"unsupported format '{fmt}'")
    verify_constraints(report)
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc}") from exc
    tag = f"exp{report.experiment}"
    paths = [
        write_csv(out / f"{tag}_runs.csv", RUN_HEADER, report.rows),
        write_csv(out / f"{tag}_summary.csv", SUMMARY_HEADER, report.summary()),
        write_csv(out / f"{tag}_selections.csv", SELECTION_HEADER, report.selections),
    ]
    if report.details_header:
        paths.append(write_csv(out / f"{tag}_details.csv", report.details_header, report.details))
    if report.trajectories:
        paths.append(write_csv(out / f"{tag}_trajectories.csv", TRAJECTORY_HEADER, report.trajectories))
    for fig in report.figures:
        header, rows = figure_rows(fig)
        paths.append(write_csv(out / f"{tag}_fig_{fig.name}.csv", header, rows))
    if plots and report.figures:
        from .plots import render_figures

        paths.extend(render_figures(report.figures, out, prefix=f"{tag}_fig_"))
    if report.config_text:
        cfg_path = out / f"{tag}_config.yaml"
        cfg_path.write_text(report.config_text)
        paths.append(cfg_path)
    return paths
