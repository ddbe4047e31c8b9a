"""Ground sets, costs, set-function oracles, sampling, and selection traces.

Elements are dense integer indices ``0..n-1``. Subsets are passed around as
``frozenset`` of ints; anything iterable is accepted at the API boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np


class InfeasibleThreshold(RuntimeError):
    """Raised when a threshold cannot be met by any subset reachable from the pool."""


def as_subset(subset: Iterable[int]) -> frozenset:
    return subset if isinstance(subset, frozenset) else frozenset(int(j) for j in subset)


@dataclass(frozen=True)
class GroundSet:
    size: int

    def __post_init__(self):
        if self.size < 1:
            raise ValueError(f"ground set must be nonempty, got size {self.size}")

    @property
    def elements(self) -> range:
        return range(self.size)

    @property
    def full(self) -> frozenset:
        return frozenset(range(self.size))


class CostModel:
    """Additive nonnegative per-element costs."""

    def __init__(self, costs: Sequence[float]):
        arr = np.asarray(costs, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("costs must be a nonempty 1-d sequence")
        if np.any(arr < 0) or not np.all(np.isfinite(arr)):
            raise ValueError("costs must be finite and nonnegative")
        self.costs = arr
        self.costs.setflags(write=False)

    @classmethod
    def unit(cls, n: int) -> "CostModel":
        return cls(np.ones(n))

    def __len__(self) -> int:
        return self.costs.size

    def __getitem__(self, j: int) -> float:
        return float(self.costs[j])

    def _check(self, subset: frozenset) -> None:
        for j in subset:
            if not 0 <= j < self.costs.size:
                raise IndexError(f"element {j} outside ground set of size {self.costs.size}")

    def total_cost(self, subset: Iterable[int]) -> float:
        s = as_subset(subset)
        self._check(s)
        # sorted summation keeps the result independent of set iteration order
        return float(math.fsum(self.costs[j] for j in sorted(s)))

    def squared_cost(self, subset: Iterable[int]) -> float:
        """``sum_j c_j**2`` over the subset."""
        s = as_subset(subset)
        self._check(s)
        return float(math.fsum(self.costs[j] ** 2 for j in sorted(s)))

    @property
    def sorted_costs(self) -> np.ndarray:
        # multiset view: duplicates are kept
        return np.sort(self.costs)

    @property
    def c_max(self) -> float:
        return float(self.costs.max())

    @property
    def c_min(self) -> float:
        return float(self.costs.min())

    def scaled(self, factor: float) -> "CostModel":
        return CostModel(self.costs * factor)


def total_cost(subset: Iterable[int], costs: CostModel) -> float:
    return costs.total_cost(subset)


class SetFunctionOracle:
    """A normalized, monotone nondecreasing set function over ``range(n)``.

    Subclasses implement :meth:`_evaluate`. Values are memoized on the
    canonical frozenset, which is safe because oracles are pure.
    """

    is_submodular: bool = False
    wsc_upper_bound: Optional[float] = None

    def __init__(self, n: int, cache: bool = True):
        if n < 1:
            raise ValueError("oracle needs a nonempty ground set")
        self.n = int(n)
        self._cache: Optional[dict] = {} if cache else None

    def _evaluate(self, subset: frozenset) -> float:
        raise NotImplementedError

    def evaluate(self, subset: Iterable[int]) -> float:
        s = as_subset(subset)
        if not s:
            return 0.0
        if self._cache is None:
            return float(self._evaluate(s))
        try:
            return self._cache[s]
        except KeyError:
            v = float(self._evaluate(s))
            self._cache[s] = v
            return v

    __call__ = evaluate

    @property
    def ground(self) -> GroundSet:
        return GroundSet(self.n)


class CallableOracle(SetFunctionOracle):
    """Wrap a plain function ``frozenset -> float``."""

    def __init__(self, n: int, func, is_submodular: bool = False, wsc_upper_bound=None):
        super().__init__(n)
        self._func = func
        self.is_submodular = is_submodular
        self.wsc_upper_bound = wsc_upper_bound

    def _evaluate(self, subset):
        return self._func(subset)


class CountingOracle:
    """Per-run view of an oracle that counts evaluations it had to request.

    Each algorithm run memoizes locally, so ``calls`` is the number of
    distinct subsets the run asked about.
    """

    def __init__(self, oracle: SetFunctionOracle):
        self.oracle = oracle
        self.n = oracle.n
        self.calls = 0
        self._seen: dict = {frozenset(): 0.0}

    def __call__(self, subset: Iterable[int]) -> float:
        s = as_subset(subset)
        try:
            return self._seen[s]
        except KeyError:
            self.calls += 1
            v = self.oracle.evaluate(s)
            self._seen[s] = v
            return v


def marginal_gain(oracle, subset: Iterable[int], j: int) -> float:
    s = as_subset(subset)
    if j in s:
        raise ValueError(f"element {j} is already in the subset")
    return oracle(s | {j}) - oracle(s)


def compute_sample_bound_U(costs: CostModel, B: float) -> int:
    """Smallest U with the sum of the U cheapest costs reaching ``B``.

    Clamped to ``len(costs)`` when even the full set costs less than ``B``.
    """
    if B <= 0:
        raise ValueError("budget must be positive")
    prefix = np.cumsum(costs.sorted_costs)
    idx = int(np.searchsorted(prefix, B, side="left"))
    return min(idx + 1, len(costs))


def sample_size(n_ground: int, U: int, epsilon: float) -> int:
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    if not 1 <= U <= n_ground:
        raise ValueError("U must lie in [1, n_ground]")
    r = math.ceil((n_ground / U) * math.log(1.0 / epsilon))
    return int(min(max(r, 1), n_ground))


class RngStream:
    """Seeded, replayable random stream (one per algorithm run)."""

    def __init__(self, seed: int):
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self._gen = np.random.Generator(np.random.PCG64(self.seed))

    def sample(self, candidates: Sequence[int], r: int) -> list:
        """``min(r, len(candidates))`` distinct draws, uniformly without replacement."""
        if r >= len(candidates):
            return list(candidates)
        idx = self._gen.choice(len(candidates), size=r, replace=False)
        return [candidates[i] for i in idx]

    def uniform(self, low: float = 0.0, high: float = 1.0, size=None):
        return self._gen.uniform(low, high, size)


def sample_without_replacement(candidates: Iterable[int], r: int, rng: RngStream) -> frozenset:
    pool = sorted(as_subset(candidates))
    if not pool:
        raise ValueError("cannot sample from an empty candidate set")
    if r < 1:
        raise ValueError("sample size must be at least 1")
    return frozenset(rng.sample(pool, r))


@dataclass
class IterationRecord:
    sampled_candidates: tuple
    chosen_element: int
    marginal_gain: float
    gain_cost_ratio: float
    running_cost: float
    accepted: bool = True


@dataclass
class SelectionTrace:
    selected: frozenset
    value: float
    cost: float
    iterations: list = field(default_factory=list)
    rng_seed: Optional[int] = None
    oracle_call_count: int = 0
    # set when no feasible singleton exists (every c_j > B)
    infeasible: bool = False
    fallback_used: bool = False

    @property
    def size(self) -> int:
        return len(self.selected)
