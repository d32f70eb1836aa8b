"""Predictor families f_theta mapping a k-lag window to a forecast.

Every family is linear in theta (the aggregation estimators average
parameters, which is only meaningful for linear families) and carries an
l1 constraint radius for its parameter set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .series import TimeSeries

__all__ = [
    "PredictorFamily",
    "LinearAR",
    "Dictionary",
    "BasisFunction",
    "GDPClimate",
    "SparseAR",
    "fourier_dictionary",
]


class PredictorFamily:
    """Shared surface: k, param_dim, features/forecast, lip_coefficient, radius."""

    k: int
    radius: float

    @property
    def param_dim(self) -> int:
        raise NotImplementedError

    def features(self, window: np.ndarray) -> np.ndarray:
        """Feature matrix A of shape (p_out, d) with f_theta(window) = A @ theta."""
        raise NotImplementedError

    def lip_coefficient(self, theta) -> float:
        """Sum of the per-lag Lipschitz coefficients a_j(theta) of f_theta."""
        raise NotImplementedError

    def target(self, x: np.ndarray) -> np.ndarray:
        """Component of an observation that the family forecasts (default: all of it)."""
        return x

    # ---- shared helpers -------------------------------------------------

    def _check_radius(self):
        if not self.radius > 0:
            raise ValueError("constraint radius must be > 0")

    def _window(self, window) -> np.ndarray:
        w = np.asarray(window, dtype=float)
        if w.ndim == 1:
            w = w[:, None]
        if w.shape[0] != self.k:
            raise ValueError(f"window has {w.shape[0]} lags, family needs k={self.k}")
        return w

    def _theta(self, theta) -> np.ndarray:
        t = np.asarray(theta, dtype=float).ravel()
        if t.size != self.param_dim:
            raise ValueError(f"theta has dimension {t.size}, family needs {self.param_dim}")
        return t

    def forecast(self, theta, window) -> np.ndarray:
        """Prediction f_theta(X_{t-1}, ..., X_{t-k}); window is most-recent-first."""
        return self.features(self._window(window)) @ self._theta(theta)

    def check_params(self, theta, tol: float = 1e-12) -> bool:
        """Whether theta satisfies the family's l1 constraint."""
        return float(np.abs(self._theta(theta)).sum()) <= self.radius + tol

    def design(self, series: TimeSeries):
        """Stacked features and targets over t = k+1..n.

        Returns (F, y) with F of shape (m, d) and y of shape (m,) when the
        forecast is scalar, else (m, p_out, d) and (m, p_out); m = n - k.
        """
        if series.n <= self.k:
            raise ValueError(f"need n > k, got n={series.n}, k={self.k}")
        rows = []
        targets = []
        vals = series.values
        for t in range(self.k + 1, series.n + 1):
            w = vals[t - 1 - self.k: t - 1][::-1]
            rows.append(self.features(w))
            targets.append(self.target(vals[t - 1]))
        F = np.stack(rows)
        y = np.stack(targets)
        if F.shape[1] == 1:
            return F[:, 0, :], y[:, 0]
        return F, y


@dataclass(frozen=True)
class LinearAR(PredictorFamily):
    """Linear autoregressive predictors theta_0 + sum_j theta_j X_{t-j}.

    The intercept is excluded from the Lipschitz coefficient sum but counts
    toward the l1 radius.
    """

    k: int
    intercept: bool = True
    radius: float = 100.0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("lag count k must be >= 1")
        self._check_radius()

    @property
    def param_dim(self) -> int:
        return self.k + 1 if self.intercept else self.k

    def features(self, window) -> np.ndarray:
        w = self._window(window)
        cols = [np.ones((w.shape[1], 1))] if self.intercept else []
        cols.extend(w[j][:, None] for j in range(self.k))
        return np.hstack(cols)

    def lip_coefficient(self, theta) -> float:
        t = self._theta(theta)
        lags = t[1:] if self.intercept else t
        return float(np.abs(lags).sum())

    def design(self, series: TimeSeries):
        if series.p != 1:
            return super().design(series)
        if series.n <= self.k:
            raise ValueError(f"need n > k, got n={series.n}, k={self.k}")
        x = series.scalar()
        n, k = series.n, self.k
        cols = [np.ones(n - k)] if self.intercept else []
        cols.extend(x[k - j: n - j] for j in range(1, k + 1))
        return np.column_stack(cols), x[k:]


@dataclass(frozen=True)
class BasisFunction:
    """Named basis function with a user-declared Lipschitz constant.

    lipschitz is the constant of phi as a function of the stacked window
    under the summed per-lag norm; None means undeclared (lip_coefficient
    will refuse to produce a budget).
    """

    name: str
    fn: Callable[[np.ndarray], np.ndarray]
    lipschitz: float | None = None


@dataclass(frozen=True)
class Dictionary(PredictorFamily):
    """Predictors sum_i theta_i phi_i(window) over a dictionary of basis functions."""

    k: int
    basis: tuple[BasisFunction, ...]
    radius: float = 100.0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("lag count k must be >= 1")
        if not self.basis:
            raise ValueError("dictionary needs at least one basis function")
        object.__setattr__(self, "basis", tuple(self.basis))
        self._check_radius()

    @property
    def param_dim(self) -> int:
        return len(self.basis)

    def features(self, window) -> np.ndarray:
        w = self._window(window)
        cols = [np.atleast_1d(np.asarray(b.fn(w), dtype=float)) for b in self.basis]
        return np.column_stack(cols)

    def lip_coefficient(self, theta) -> float:
        t = self._theta(theta)
        total = 0.0
        for coef, b in zip(t, self.basis):
            if b.lipschitz is None:
                raise ValueError(f"basis function {b.name!r} has no declared Lipschitz constant")
            total += abs(coef) * b.lipschitz
        return total


def fourier_dictionary(k: int, size: int) -> tuple[BasisFunction, ...]:
    """sin(m * x_lag)/m basis over (lag, frequency) pairs, for scalar series.

    Each entry is 1-Lipschitz in its lag, so the declared constants are 1.
    """
    if size < 1:
        raise ValueError("dictionary size must be >= 1")
    entries = []
    for i in range(size):
        lag = i % k
        freq = i // k + 1
        fn = _SinBasis(lag, freq)
        entries.append(BasisFunction(f"sin{freq}_lag{lag + 1}", fn, 1.0))
    return tuple(entries)


class _SinBasis:
    """Picklable sin(freq * x)/freq of one window lag."""

    def __init__(self, lag, freq):
        self.lag = lag
        self.freq = freq

    def __call__(self, w):
        return np.sin(self.freq * w[self.lag]) / self.freq


@dataclass(frozen=True)
class GDPClimate(PredictorFamily):
    """Growth forecasters from lagged growth and a business-climate indicator.

    Observations are pairs (growth, indicator); the forecast of the growth
    component at time t is
        theta_0 + theta_1 * growth_{t-1} + theta_2 * I_{t-1}
        + theta_3 * (I_{t-1} - I_{t-2}) * |I_{t-1} - I_{t-2}|.

    indicator_bound (max |I| over the data) is needed by lip_coefficient:
    the quadratic term is Lipschitz only on bounded indicator ranges.
    """

    radius: float = 100.0
    indicator_bound: float | None = None
    k: int = field(default=2, init=False)

    def __post_init__(self):
        self._check_radius()

    @property
    def param_dim(self) -> int:
        return 4

    def target(self, x):
        return np.asarray(x, dtype=float)[:1]

    def features(self, window) -> np.ndarray:
        w = self._window(window)
        if w.shape[1] != 2:
            raise ValueError("observations must be (growth, indicator) pairs")
        g1, i1 = w[0]
        i2 = w[1, 1]
        d = i1 - i2
        return np.array([[1.0, g1, i1, d * abs(d)]])

    def lip_coefficient(self, theta) -> float:
        t = self._theta(theta)
        if self.indicator_bound is None:
            raise ValueError("lip_coefficient needs indicator_bound (max |I| over the data)")
        return float(abs(t[1]) + abs(t[2]) + 4.0 * abs(t[3]) * self.indicator_bound)

    def design(self, series: TimeSeries):
        if series.p != 2:
            raise ValueError("series must have the two columns (growth, indicator)")
        if series.n <= 2:
            raise ValueError(f"need n > 2, got n={series.n}")
        g = series.values[:, 0]
        ind = series.values[:, 1]
        n = series.n
        d = ind[1: n - 1] - ind[: n - 2]
        F = np.column_stack([np.ones(n - 2), g[1: n - 1], ind[1: n - 1], d * np.abs(d)])
        return F, g[2:]


@dataclass(frozen=True)
class SparseAR(PredictorFamily):
    """Interceptless autoregression sum_{j in support} theta_j X_{t-j}.

    support is the set of active lags within 1..p_lags; the parameter vector
    has one coordinate per support element, in increasing lag order.
    """

    p_lags: int
    support: tuple[int, ...]
    radius: float = 1.0

    def __post_init__(self):
        if self.p_lags < 1:
            raise ValueError("p_lags must be >= 1")
        sup = tuple(sorted(set(int(j) for j in self.support)))
        if any(not 1 <= j <= self.p_lags for j in sup):
            raise ValueError(f"support must be within 1..{self.p_lags}")
        object.__setattr__(self, "support", sup)
        self._check_radius()

    @property
    def k(self) -> int:
        return self.p_lags

    @property
    def param_dim(self) -> int:
        return len(self.support)

    def features(self, window) -> np.ndarray:
        w = self._window(window)
        if not self.support:
            return np.zeros((w.shape[1], 0))
        return np.column_stack([w[j - 1][:, None] for j in self.support])

    def lip_coefficient(self, theta) -> float:
        return float(np.abs(self._theta(theta)).sum())

    def design(self, series: TimeSeries):
        if series.p != 1:
            return super().design(series)
        if series.n <= self.k:
            raise ValueError(f"need n > k, got n={series.n}, k={self.k}")
        x = series.scalar()
        n, k = series.n, self.k
        if not self.support:
            return np.zeros((n - k, 0)), x[k:]
        return np.column_stack([x[k - j: n - j] for j in self.support]), x[k:]
