"""Concrete set-function oracles and weak-submodularity preserving combinators."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import SetFunctionOracle, as_subset


def _index(subset: frozenset) -> np.ndarray:
    return np.fromiter(sorted(subset), dtype=np.intp, count=len(subset))


class ModularObjective(SetFunctionOracle):
    """``f(S) = sum of w_j``; gains are context free."""

    is_submodular = True
    wsc_upper_bound = 1.0

    def __init__(self, weights: Sequence[float]):
        w = np.asarray(weights, dtype=float)
        if np.any(w < 0):
            raise ValueError("modular weights must be nonnegative")
        super().__init__(w.size)
        self.weights = w

    def _evaluate(self, subset):
        return float(np.sum(self.weights[_index(subset)]))


class SquaredModularObjective(SetFunctionOracle):
    """``f(S) = (sum of w_j)**2``; supermodular, so its WSC exceeds one."""

    def __init__(self, weights: Sequence[float]):
        w = np.asarray(weights, dtype=float)
        if np.any(w <= 0):
            raise ValueError("weights must be positive")
        super().__init__(w.size)
        self.weights = w

    def _evaluate(self, subset):
        return float(np.sum(self.weights[_index(subset)])) ** 2


class WeightedCoverageObjective(SetFunctionOracle):
    """Total weight of the union of per-element covered items.

    ``covers`` is either a boolean matrix (elements x items) or a list of
    item-index collections.
    """

    is_submodular = True
    wsc_upper_bound = 1.0

    def __init__(self, covers, weights: Optional[Sequence[float]] = None, n_items: Optional[int] = None):
        if isinstance(covers, np.ndarray) and covers.ndim == 2:
            matrix = covers.astype(bool)
        else:
            covers = [list(c) for c in covers]
            if n_items is None:
                n_items = 1 + max((max(c) for c in covers if c), default=-1)
            matrix = np.zeros((len(covers), n_items), dtype=bool)
            for e, items in enumerate(covers):
                matrix[e, items] = True
        super().__init__(matrix.shape[0])
        if weights is None:
            weights = np.ones(matrix.shape[1])
        weights = np.asarray(weights, dtype=float)
        if weights.shape != (matrix.shape[1],):
            raise ValueError("one weight per item is required")
        if np.any(weights < 0):
            raise ValueError("item weights must be nonnegative")
        self.matrix = matrix
        self.weights = weights

    def covered(self, subset) -> np.ndarray:
        s = as_subset(subset)
        if not s:
            return np.zeros(self.matrix.shape[1], dtype=bool)
        return self.matrix[_index(s)].any(axis=0)

    def _evaluate(self, subset):
        return float(self.weights[self.covered(subset)].sum())


class TruncatedObjective(SetFunctionOracle):
    def __init__(self, inner: SetFunctionOracle, k: float):
        if k < 0:
            raise ValueError("truncation level must be nonnegative")
        super().__init__(inner.n)
        self.inner = inner
        self.k = float(k)
        self.is_submodular = inner.is_submodular

    def _evaluate(self, subset):
        return min(self.inner.evaluate(subset), self.k)


class AveragedObjective(SetFunctionOracle):
    """Nonnegative weighted sum of oracles (plain mean by default)."""

    def __init__(self, oracles: Sequence[SetFunctionOracle], weights: Optional[Sequence[float]] = None):
        oracles = list(oracles)
        if not oracles:
            raise ValueError("need at least one oracle")
        n = oracles[0].n
        if any(o.n != n for o in oracles):
            raise ValueError("all oracles must share the ground set")
        if weights is None:
            weights = [1.0 / len(oracles)] * len(oracles)
        weights = [float(w) for w in weights]
        if len(weights) != len(oracles):
            raise ValueError("one weight per oracle is required")
        if any(w < 0 for w in weights):
            raise ValueError("weights must be nonnegative")
        super().__init__(n)
        self.oracles = oracles
        self.weights = weights
        self.is_submodular = all(o.is_submodular for o in oracles)

    def _evaluate(self, subset):
        return sum(w * o.evaluate(subset) for w, o in zip(self.weights, self.oracles))


class NormalizedObjective(SetFunctionOracle):
    """``inner(S) / inner(N)``, the divisor captured once at construction."""

    def __init__(self, inner: SetFunctionOracle):
        super().__init__(inner.n)
        d = inner.evaluate(range(inner.n))
        if d <= 0:
            raise ValueError("cannot normalize an oracle with inner(N) <= 0")
        self.inner = inner
        self.divisor = d
        self.is_submodular = inner.is_submodular

    def _evaluate(self, subset):
        return self.inner.evaluate(subset) / self.divisor


def truncate(oracle: SetFunctionOracle, k: float) -> TruncatedObjective:
    return TruncatedObjective(oracle, k)


def average(oracles, weights=None) -> AveragedObjective:
    return AveragedObjective(oracles, weights)


def normalize(oracle: SetFunctionOracle) -> NormalizedObjective:
    return NormalizedObjective(oracle)


def truncated_average(oracles, k: float) -> AveragedObjective:
    """Mean of the oracles each truncated at ``k``.

    Equals ``k`` exactly when every oracle reaches ``k``.
    """
    return AveragedObjective([TruncatedObjective(o, k) for o in oracles])


# -- estimation error objective ----------------------------------------------


@dataclass
class MseSnapshot:
    """Frozen predicted beliefs for one time step.

    prior_covs: (points, d, d) predicted covariances.
    visibility: (satellites, points) boolean; ``visibility[n, p]`` is the
        indicator that satellite ``n`` sees point ``p``.
    meas_cov: (d, d) measurement noise of a single observation.
    """

    prior_covs: np.ndarray
    visibility: np.ndarray
    meas_cov: np.ndarray

    def __post_init__(self):
        self.prior_covs = np.asarray(self.prior_covs, dtype=float)
        self.visibility = np.asarray(self.visibility, dtype=bool)
        self.meas_cov = np.asarray(self.meas_cov, dtype=float)
        if self.prior_covs.ndim != 3 or self.visibility.shape[1] != self.prior_covs.shape[0]:
            raise ValueError("visibility must be (satellites, points) matching prior_covs")

    def reduction_table(self) -> np.ndarray:
        """``table[p, m]``: trace reduction at point p with m fused observers."""
        n_points, d, _ = self.prior_covs.shape
        max_m = int(self.visibility.sum(axis=0).max(initial=0))
        try:
            prior_info = np.linalg.inv(self.prior_covs)
        except np.linalg.LinAlgError as exc:
            raise np.linalg.LinAlgError("singular prior covariance") from exc
        meas_info = np.linalg.inv(self.meas_cov)
        prior_trace = np.trace(self.prior_covs, axis1=1, axis2=2)
        table = np.zeros((n_points, max_m + 1))
        for m in range(1, max_m + 1):
            post = np.linalg.inv(prior_info + m * meas_info)
            table[:, m] = prior_trace - np.trace(post, axis1=1, axis2=2)
        return table


class MseReductionObjective(SetFunctionOracle):
    """Sum over points of the covariance-trace reduction from fused observations."""

    def __init__(self, snapshot: MseSnapshot):
        super().__init__(snapshot.visibility.shape[0])
        self.snapshot = snapshot
        self._vis = snapshot.visibility.astype(np.intp)
        self._table = snapshot.reduction_table()
        self._rows = np.arange(self._table.shape[0])

    def observer_counts(self, subset) -> np.ndarray:
        s = as_subset(subset)
        if not s:
            return np.zeros(self._vis.shape[1], dtype=np.intp)
        return self._vis[_index(s)].sum(axis=0)

    def _evaluate(self, subset):
        counts = self.observer_counts(subset)
        return float(self._table[self._rows, counts].sum())


def mse_reduction_value(snapshot: MseSnapshot, selection) -> float:
    return MseReductionObjective(snapshot).evaluate(selection)


def coverage_objective(cell_areas: np.ndarray, visible_cells: np.ndarray) -> WeightedCoverageObjective:
    """Area-weighted coverage oracle.

    ``visible_cells`` is (satellites, cells) boolean. Cells no satellite sees
    are dropped up front since they never contribute.
    """
    visible_cells = np.asarray(visible_cells, dtype=bool)
    live = visible_cells.any(axis=0)
    return WeightedCoverageObjective(visible_cells[:, live], np.asarray(cell_areas, dtype=float)[live])


def coverage_objective_value(cell_areas, visible_cells, selection) -> float:
    """Area (km^2) of the union of the selected satellites' covered cells."""
    s = as_subset(selection)
    if not s:
        return 0.0
    visible_cells = np.asarray(visible_cells, dtype=bool)
    covered = visible_cells[_index(s)].any(axis=0)
    return float(np.asarray(cell_areas, dtype=float)[covered].sum())
