from .bounds import (
    BoundInputs,
    drg_cost_ratio_bound,
    dual_gain_extremes,
    mrg_approximation_bound,
    mrg_zero_guarantee_delta,
    wssa_relaxation_alpha,
)
from .diagnostics import EtaDiagnostic, eta_diagnostic
from .exact import (
    brute_force_budget_opt,
    brute_force_max_min,
    brute_force_min_cost,
    estimate_wsc,
)
from .greedy import (
    DrgConfig,
    MrgConfig,
    budgeted_greedy,
    drg,
    entire_set,
    modified_greedy,
    mrg,
    threshold_greedy,
    top_k_baseline,
)
from .saturation import WssaConfig, WssaResult, random_wssa, ssa

__all__ = [
    "BoundInputs",
    "DrgConfig",
    "EtaDiagnostic",
    "MrgConfig",
    "WssaConfig",
    "WssaResult",
    "brute_force_budget_opt",
    "brute_force_max_min",
    "brute_force_min_cost",
    "budgeted_greedy",
    "drg",
    "drg_cost_ratio_bound",
    "dual_gain_extremes",
    "entire_set",
    "estimate_wsc",
    "eta_diagnostic",
    "modified_greedy",
    "mrg",
    "mrg_approximation_bound",
    "mrg_zero_guarantee_delta",
    "random_wssa",
    "ssa",
    "threshold_greedy",
    "top_k_baseline",
    "wssa_relaxation_alpha",
]
