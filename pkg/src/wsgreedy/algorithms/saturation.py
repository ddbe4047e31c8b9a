"""Max-min selection by bisection over a saturation level.

For a level ``k`` the objectives are truncated at ``k`` and averaged; that
average reaches ``k`` exactly when every objective does, so a threshold
greedy on it either certifies ``k`` within the (relaxed) budget or not.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..core import CostModel, InfeasibleThreshold, RngStream, compute_sample_bound_U, sample_size
from ..objectives import truncated_average
from .greedy import threshold_greedy


@dataclass
class WssaConfig:
    budget: float
    alpha: float = 1.0
    epsilon: float = 0.01
    r: Optional[int] = None
    seed: int = 0
    # bisection stops once the interval is narrower than this; 1/n if unset
    floor: Optional[float] = None
    max_outer: int = 200
    tol: float = 1e-9

    def __post_init__(self):
        if self.alpha < 1:
            raise ValueError("alpha must be at least 1")
        if self.budget < 0:
            raise ValueError("budget must be nonnegative")
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must lie in (0, 1)")
        if self.floor is not None and self.floor <= 0:
            raise ValueError("bisection floor must be positive")


@dataclass
class BisectionStep:
    k: float
    cost: float
    feasible: bool
    selected: frozenset


@dataclass
class WssaResult:
    selected: frozenset
    k_achieved: float
    outer_iterations: int
    value: float  # min over objectives at the returned set
    cost: float
    interval: tuple
    steps: list = field(default_factory=list)
    oracle_call_count: int = 0
    r: int = 0


def random_wssa(oracles: Sequence, costs: CostModel, config: WssaConfig) -> WssaResult:
    oracles = list(oracles)
    if not oracles:
        raise ValueError("need at least one objective")
    n_obj = len(oracles)
    N = frozenset(range(oracles[0].n))
    if config.r is not None:
        r = min(config.r, len(N))
    elif config.budget > 0:
        r = sample_size(len(N), compute_sample_bound_U(costs, config.budget), config.epsilon)
    else:
        r = len(N)
    floor = config.floor if config.floor is not None else 1.0 / n_obj
    rng = RngStream(config.seed)

    k_lo, k_hi = 0.0, min(o(N) for o in oracles)
    calls = n_obj
    best = frozenset()
    steps = []
    cap = config.alpha * config.budget
    while k_hi - k_lo >= floor and len(steps) < config.max_outer:
        k = 0.5 * (k_lo + k_hi)
        fbar = truncated_average(oracles, k)
        try:
            inner = threshold_greedy(fbar, costs, k, r, rng, tol=config.tol / n_obj)
        except InfeasibleThreshold as exc:  # pragma: no cover - excluded by k <= min_i f^i(N)
            raise AssertionError(f"saturation level {k} unreachable on the full set") from exc
        calls += inner.oracle_call_count
        feasible = inner.cost <= cap
        steps.append(BisectionStep(k, inner.cost, feasible, inner.selected))
        if feasible:
            k_lo = k
            best = inner.selected
        else:
            k_hi = k

    value = min(o(best) for o in oracles) if best else 0.0
    return WssaResult(
        selected=best,
        k_achieved=k_lo,
        outer_iterations=len(steps),
        value=value,
        cost=costs.total_cost(best),
        interval=(k_lo, k_hi),
        steps=steps,
        oracle_call_count=calls,
        r=r,
    )


def ssa(
    oracles: Sequence,
    budget: float,
    alpha: float = 1.0,
    costs: Optional[CostModel] = None,
    floor: Optional[float] = None,
) -> WssaResult:
    """Deterministic saturation with full scans.

    Without ``costs`` this is the cardinality form (unit costs, ``budget`` = K).
    """
    n = oracles[0].n
    if costs is None:
        costs = CostModel.unit(n)
    return random_wssa(oracles, costs, WssaConfig(budget=budget, alpha=alpha, r=n, floor=floor))
