"""Budgeted and threshold greedy selection with optional random sampling.

Ties always go to the lowest element index, so runs with full sampling are
deterministic and comparable across algorithms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from ..core import (
    CostModel,
    CountingOracle,
    InfeasibleThreshold,
    IterationRecord,
    RngStream,
    SelectionTrace,
    compute_sample_bound_U,
    sample_size,
)


@dataclass
class MrgConfig:
    budget: float
    epsilon: float = 0.01
    r: Optional[int] = None
    seed: int = 0

    def __post_init__(self):
        if self.budget < 0:
            raise ValueError("budget must be nonnegative")
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must lie in (0, 1)")
        if self.r is not None and self.r < 1:
            raise ValueError("r must be at least 1")

    def sample_size(self, costs: CostModel) -> int:
        n = len(costs)
        if self.r is not None:
            return min(self.r, n)
        if self.budget <= 0:
            return n
        return sample_size(n, compute_sample_bound_U(costs, self.budget), self.epsilon)


@dataclass
class DrgConfig:
    threshold: float
    epsilon: float = 0.01
    r: Optional[int] = None
    seed: int = 0
    tol: Optional[float] = None
    # expected selection size used for the default r; the full ground set if unset
    size_hint: Optional[int] = None

    def __post_init__(self):
        if self.threshold < 0:
            raise ValueError("threshold must be nonnegative")
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must lie in (0, 1)")
        if self.r is not None and self.r < 1:
            raise ValueError("r must be at least 1")
        if self.tol is None:
            self.tol = 1e-9 * max(1.0, self.threshold)
        if self.tol < 0:
            raise ValueError("tolerance must be nonnegative")

    def sample_size(self, n: int) -> int:
        if self.r is not None:
            return min(self.r, n)
        U = min(max(self.size_hint or n, 1), n)
        return sample_size(n, U, self.epsilon)


def gain_cost_ratio(gain: float, cost: float) -> float:
    if cost > 0:
        return gain / cost
    return math.inf if gain > 0 else 0.0


def _best_in_sample(f, costs, S, fS, sample):
    best_j, best_gain, best_ratio = -1, 0.0, -math.inf
    for j in sorted(sample):
        gain = f(S | {j}) - fS
        ratio = gain_cost_ratio(gain, costs[j])
        if ratio > best_ratio:
            best_j, best_gain, best_ratio = j, gain, ratio
    return best_j, best_gain, best_ratio


def budgeted_greedy(
    oracle,
    costs: CostModel,
    budget: float,
    r: int,
    rng: Optional[RngStream] = None,
    shadow: Optional[Callable] = None,
) -> SelectionTrace:
    """Shared loop of the modified greedy and its randomized variant.

    Every pass examines the best sampled element and drops it from the pool,
    whether or not it fit in the remaining budget. ``shadow`` (diagnostics
    only) is called on accepted passes with ``(S, pool, best_ratio)`` before
    the pool shrinks.
    """
    n = oracle.n
    if len(costs) != n:
        raise ValueError("cost vector and oracle disagree on ground set size")
    f = CountingOracle(oracle)
    pool = list(range(n))
    S, fS, cS = frozenset(), 0.0, 0.0
    records = []
    while pool:
        # nothing left can fit: remaining passes would all be rejected
        if budget - cS < min(costs[j] for j in pool):
            break
        sample = pool if (rng is None or r >= len(pool)) else rng.sample(pool, r)
        j, gain, ratio = _best_in_sample(f, costs, S, fS, sample)
        accepted = cS + costs[j] <= budget
        if accepted:
            if shadow is not None:
                shadow(S, pool, ratio)
            S = S | {j}
            fS = f(S)
            cS = costs.total_cost(S)
        records.append(IterationRecord(tuple(sorted(sample)), j, gain, ratio, cS, accepted))
        pool.remove(j)

    feasible = [j for j in range(n) if costs[j] <= budget]
    trace = SelectionTrace(S, fS, cS, records, rng.seed if rng is not None else None)
    if not feasible:
        trace.selected, trace.value, trace.cost = frozenset(), 0.0, 0.0
        trace.infeasible = True
    else:
        singles = [f(frozenset({j})) for j in feasible]
        best = max(range(len(feasible)), key=lambda i: (singles[i], -feasible[i]))
        if singles[best] > fS:
            j_max = feasible[best]
            trace.selected = frozenset({j_max})
            trace.value = singles[best]
            trace.cost = costs[j_max]
            trace.fallback_used = True
    trace.oracle_call_count = f.calls
    return trace


def modified_greedy(oracle, costs: CostModel, budget: float) -> SelectionTrace:
    """Full-scan gain/cost greedy under a budget, with the best-singleton fallback."""
    return budgeted_greedy(oracle, costs, budget, r=oracle.n)


def mrg(oracle, costs: CostModel, config: MrgConfig) -> SelectionTrace:
    """Modified randomized greedy: each pass scans only a uniform sample of the pool."""
    r = config.sample_size(costs)
    return budgeted_greedy(oracle, costs, config.budget, r, RngStream(config.seed))


def threshold_greedy(
    oracle,
    costs: CostModel,
    threshold: float,
    r: int,
    rng: Optional[RngStream] = None,
    tol: float = 0.0,
) -> SelectionTrace:
    """Add the best sampled gain/cost element until ``f(S) >= threshold - tol``."""
    n = oracle.n
    f = CountingOracle(oracle)
    pool = list(range(n))
    S, fS, cS = frozenset(), 0.0, 0.0
    records = []
    while fS < threshold - tol:
        if not pool:
            raise InfeasibleThreshold(
                f"pool exhausted at f(S)={fS:.6g} below threshold {threshold:.6g}"
            )
        sample = pool if (rng is None or r >= len(pool)) else rng.sample(pool, r)
        j, gain, ratio = _best_in_sample(f, costs, S, fS, sample)
        S = S | {j}
        fS = f(S)
        cS = costs.total_cost(S)
        records.append(IterationRecord(tuple(sorted(sample)), j, gain, ratio, cS))
        pool.remove(j)
    return SelectionTrace(S, fS, cS, records, rng.seed if rng is not None else None, f.calls)


def drg(oracle, costs: CostModel, config: DrgConfig) -> SelectionTrace:
    """Dual randomized greedy: cheapest-looking selection meeting a value threshold."""
    r = config.sample_size(oracle.n)
    return threshold_greedy(oracle, costs, config.threshold, r, RngStream(config.seed), config.tol)


def top_k_baseline(oracle, costs: CostModel, budget: float) -> SelectionTrace:
    """Rank by singleton gain/cost once, then add in order while the budget allows."""
    f = CountingOracle(oracle)
    n = oracle.n
    ratios = [gain_cost_ratio(f(frozenset({j})), costs[j]) for j in range(n)]
    order = sorted(range(n), key=lambda j: (-ratios[j], j))
    S, cS = frozenset(), 0.0
    records = []
    for j in order:
        if cS + costs[j] <= budget:
            S = S | {j}
            cS = costs.total_cost(S)
            records.append(IterationRecord((j,), j, ratios[j] * costs[j], ratios[j], cS))
    value = f(S)
    return SelectionTrace(S, value, cS, records, None, f.calls)


def entire_set(oracle, costs: CostModel) -> SelectionTrace:
    S = frozenset(range(oracle.n))
    return SelectionTrace(S, oracle(S), costs.total_cost(S), [], None, 1)
