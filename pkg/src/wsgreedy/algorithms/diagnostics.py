"""Per-iteration quality ratios of randomized vs. full greedy choices."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from ..core import CostModel, RngStream
from .greedy import MrgConfig, budgeted_greedy, gain_cost_ratio


@dataclass
class EtaDiagnostic:
    runs: list = field(default_factory=list)  # one list of eta values per seed
    increments: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def etas(self) -> np.ndarray:
        return np.array([e for run in self.runs for e in run], dtype=float)

    @property
    def mean(self) -> float:
        e = self.etas
        return float(e.mean()) if e.size else math.nan

    @property
    def stderr(self) -> float:
        e = self.etas
        return float(e.std(ddof=1) / math.sqrt(e.size)) if e.size > 1 else 0.0

    @property
    def mu_estimate(self) -> float:
        """Conservative lower estimate of the mean ratio (mean minus one SE)."""
        return self.mean - self.stderr

    @property
    def increment_mean(self) -> float:
        return float(self.increments.mean()) if self.increments.size else 0.0

    @property
    def increment_stderr(self) -> float:
        d = self.increments
        return float(d.std(ddof=1) / math.sqrt(d.size)) if d.size > 1 else 0.0

    def drift_ok(self, n_se: float = 3.0) -> bool:
        return abs(self.increment_mean) <= n_se * self.increment_stderr


def _eta_run(oracle, costs: CostModel, budget: float, r: int, seed: int) -> list:
    etas = []

    def shadow(S, pool, ratio):
        fS = oracle(S)
        full = max(gain_cost_ratio(oracle(S | {j}) - fS, costs[j]) for j in pool)
        if full == 0.0 or (math.isinf(full) and math.isinf(ratio)):
            etas.append(1.0)
        else:
            etas.append(ratio / full)

    budgeted_greedy(oracle, costs, budget, r, RngStream(seed), shadow=shadow)
    return etas


def eta_diagnostic(
    oracle,
    costs: CostModel,
    config: MrgConfig,
    seeds: Optional[Iterable[int]] = None,
) -> EtaDiagnostic:
    """Run MRG with a shadow full scan on each accepted pass.

    The shadow compares the sampled best ratio with the best ratio over the
    whole remaining pool the sample was drawn from.
    """
    r = config.sample_size(costs)
    seeds = [config.seed] if seeds is None else list(seeds)
    diag = EtaDiagnostic()
    incs = []
    for s in seeds:
        run = _eta_run(oracle, costs, config.budget, r, s)
        diag.runs.append(run)
        incs.extend(np.diff(run))
    diag.increments = np.asarray(incs, dtype=float)
    return diag
