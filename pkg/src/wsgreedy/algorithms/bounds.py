"""Closed-form approximation guarantees for the randomized greedy family.

None of these clamp: a nonpositive MRG factor simply means no guarantee at
that confidence level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional


@dataclass
class BoundInputs:
    mu: float = 1.0
    w_f: float = 1.0
    delta: float = 1.0
    U: Optional[int] = None
    c_max: Optional[float] = None
    budget: Optional[float] = None
    L: int = 1
    M: Optional[float] = None
    m: Optional[float] = None
    opt_cost: float = 1.0  # lower bound on c(S*)
    sq_cost: float = 0.0  # sum of squared costs of the returned set

    def _check_common(self):
        if not 0.0 < self.delta <= 1.0:
            raise ValueError("delta must lie in (0, 1]")
        if self.w_f < 0:
            raise ValueError("w_f must be nonnegative")


def mrg_approximation_bound(inputs: BoundInputs) -> float:
    """High-probability lower bound on ``f(S_mrg) / f(S*)``."""
    inputs._check_common()
    if inputs.budget is None or inputs.budget <= 0:
        raise ValueError("budget must be positive")
    if inputs.U is None or inputs.c_max is None:
        raise ValueError("U and c_max are required")
    if inputs.w_f <= 0:
        raise ValueError("w_f must be positive")
    penalty = (inputs.c_max / inputs.budget) * math.sqrt(0.5 * inputs.U * math.log(1.0 / inputs.delta))
    return (1.0 - math.exp(-(inputs.mu - penalty) / inputs.w_f)) / (2.0 * inputs.w_f**2)


def mrg_zero_guarantee_delta(mu: float, budget: float, c_max: float, U: int) -> float:
    """Confidence level at and below which the MRG bound is vacuous."""
    return math.exp(-(2.0 / U) * (mu * budget / c_max) ** 2)


def drg_cost_ratio_bound(inputs: BoundInputs) -> float:
    """High-probability upper bound on ``c(S_drg) / c(S*)``."""
    inputs._check_common()
    if inputs.m is None or inputs.m <= 0:
        raise ValueError("undefined: smallest final marginal gain m must be positive")
    if inputs.M is None or inputs.M < inputs.m:
        raise ValueError("M must be at least m")
    if inputs.mu <= 0 or inputs.opt_cost <= 0:
        raise ValueError("mu and c(S*) must be positive")
    w = inputs.w_f
    log_w = math.log(w) if w > 0 else 0.0
    main = (w / inputs.mu) * (1.0 + (inputs.L - 1) * log_w + math.log(inputs.M / inputs.m))
    spread = math.sqrt(0.5 * math.log(1.0 / inputs.delta) * inputs.sq_cost) / (inputs.mu * inputs.opt_cost)
    return main + spread


def wssa_relaxation_alpha(inputs: BoundInputs, P: int) -> tuple:
    """Relaxation factor and its success probability ``(1 - delta) ** P``.

    ``inputs.w_f`` should be the WSC of the truncated average; ``L`` the
    longest inner run; ``M``/``m`` taken across all objectives.
    """
    if P < 0:
        raise ValueError("P must be nonnegative")
    alpha = drg_cost_ratio_bound(inputs)
    return alpha, (1.0 - inputs.delta) ** P


def dual_gain_extremes(oracle, trace) -> tuple:
    """``(M, m, L)`` for a threshold-greedy trace.

    ``M`` is the largest singleton value, ``m`` the smallest gain over the
    elements outside the set held before the final addition, ``L`` the number
    of additions.
    """
    L = len(trace.iterations)
    if L == 0:
        raise ValueError("undefined: the selection is empty")
    before = frozenset(rec.chosen_element for rec in trace.iterations[:-1])
    f_before = oracle(before)
    M = max(oracle(frozenset({j})) for j in range(oracle.n))
    m = min(oracle(before | {j}) - f_before for j in range(oracle.n) if j not in before)
    return M, m, L
