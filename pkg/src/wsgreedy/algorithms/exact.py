"""Exhaustive oracles for small ground sets (test references, not solvers)."""

from __future__ import annotations

import math

import numpy as np

from ..core import CostModel, InfeasibleThreshold

MAX_BRUTE_FORCE = 22
MAX_WSC = 12


def mask_to_set(mask: int) -> frozenset:
    return frozenset(j for j in range(mask.bit_length()) if mask >> j & 1)


def all_subset_values(oracle) -> np.ndarray:
    """``vals[mask]`` = f of the subset encoded by ``mask``."""
    n = oracle.n
    return np.array([oracle(mask_to_set(m)) for m in range(1 << n)], dtype=float)


def all_subset_costs(costs: CostModel) -> np.ndarray:
    n = len(costs)
    masks = np.arange(1 << n)
    total = np.zeros(1 << n)
    for j in range(n):
        total += costs[j] * ((masks >> j) & 1)
    return total


def _guard(n, limit):
    if n > limit:
        raise ValueError(f"ground set of size {n} is too large for enumeration (limit {limit})")


def brute_force_budget_opt(oracle, costs: CostModel, budget: float):
    """Exact ``max f(S) s.t. c(S) <= B``; returns ``(set, value)``."""
    _guard(oracle.n, MAX_BRUTE_FORCE)
    vals = all_subset_values(oracle)
    cost = all_subset_costs(costs)
    vals = np.where(cost <= budget + 1e-12, vals, -np.inf)
    best = int(np.argmax(vals))
    return mask_to_set(best), float(vals[best])


def brute_force_min_cost(oracle, costs: CostModel, threshold: float, tol: float = 1e-9):
    """Exact ``min c(S) s.t. f(S) >= A``; returns ``(set, cost)``."""
    _guard(oracle.n, MAX_BRUTE_FORCE)
    vals = all_subset_values(oracle)
    cost = np.where(vals >= threshold - tol, all_subset_costs(costs), np.inf)
    best = int(np.argmin(cost))
    if not math.isfinite(cost[best]):
        raise InfeasibleThreshold(f"no subset reaches {threshold}")
    return mask_to_set(best), float(cost[best])


def brute_force_max_min(oracles, costs: CostModel, budget: float):
    """Exact ``max_S min_i f^i(S) s.t. c(S) <= B``."""
    n = oracles[0].n
    _guard(n, MAX_BRUTE_FORCE)
    worst = np.min([all_subset_values(o) for o in oracles], axis=0)
    worst = np.where(all_subset_costs(costs) <= budget + 1e-12, worst, -np.inf)
    best = int(np.argmax(worst))
    return mask_to_set(best), float(worst[best])


def estimate_wsc(oracle, ground=None, rtol: float = 1e-12) -> float:
    """Exact weak-submodularity constant by enumeration.

    Max over S ⊆ T ⊂ N, j ∉ T of gain_j(T) / gain_j(S), with 0/0 -> 0 and
    x/0 -> inf. For a fixed (T, j) the worst S is the submask of T with the
    smallest gain, found by a subset-minimum sweep over the bits.
    Gains within ``rtol * max|f|`` of zero count as zero.
    """
    n = oracle.n if ground is None else ground.size
    _guard(n, MAX_WSC)
    vals = all_subset_values(oracle)
    atol = rtol * max(1.0, float(np.abs(vals).max()))
    masks = np.arange(1 << n)
    worst = 0.0
    for j in range(n):
        bit = 1 << j
        outside = masks[(masks & bit) == 0]
        gain = np.full(1 << n, np.inf)
        gain[outside] = vals[outside | bit] - vals[outside]
        gain[outside] = np.where(gain[outside] <= atol, 0.0, gain[outside])
        sub_min = gain.copy()
        for b in range(n):
            if b == j:
                continue
            with_b = outside[(outside & (1 << b)) != 0]
            sub_min[with_b] = np.minimum(sub_min[with_b], sub_min[with_b ^ (1 << b)])
        g, m = gain[outside], sub_min[outside]
        pos = g > 0
        if np.any(pos & (m == 0)):
            return math.inf
        if np.any(pos):
            worst = max(worst, float(np.max(g[pos] / m[pos])))
    return worst
