"""Empirical risk and l1-constrained empirical risk minimization."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .losses import LossSpec, evaluate_path
from .predictors import PredictorFamily
from .series import TimeSeries

__all__ = [
    "RiskReport",
    "empirical_risk",
    "l1_project",
    "ErmConfig",
    "ErmInfo",
    "ErmNotConverged",
    "erm_fit",
]


@dataclass(frozen=True)
class RiskReport:
    """In-sample average loss and its per-step decomposition."""

    empirical_risk: float
    per_step_losses: np.ndarray
    n_effective: int


def empirical_risk(series: TimeSeries, family: PredictorFamily,
                   theta, loss: LossSpec) -> RiskReport:
    """Average loss of f_theta one-step forecasts over t = k+1..n."""
    F, y = family.design(series)
    theta = family._theta(theta)
    preds = F @ theta
    losses = evaluate_path(loss, preds, y)
    return RiskReport(float(losses.mean()), losses, losses.size)


def l1_project(theta, radius: float) -> np.ndarray:
    """Euclidean projection onto the l1 ball of the given radius.

    Sort-based soft thresholding; returns theta unchanged when already
    feasible.
    """
    if radius <= 0:
        raise ValueError("radius must be > 0")
    v = np.asarray(theta, dtype=float).ravel()
    mags = np.abs(v)
    if mags.sum() <= radius:
        return v.copy()
    u = np.sort(mags)[::-1]
    cumsum = np.cumsum(u)
    rho = np.nonzero(u * np.arange(1, v.size + 1) > cumsum - radius)[0][-1]
    shift = (cumsum[rho] - radius) / (rho + 1.0)
    return np.sign(v) * np.maximum(mags - shift, 0.0)


@dataclass(frozen=True)
class ErmConfig:
    """Solver settings for erm_fit.

    starts overrides the five deterministic restart points (least-squares
    anchor and scalings of it) with explicit vectors, e.g. for warm starts.
    """

    max_iter: int = 2000
    restarts: int = 5
    plateau_tol: float = 1e-10
    starts: tuple | None = None

    def __post_init__(self):
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")


@dataclass(frozen=True)
class ErmInfo:
    objective: float
    converged: bool
    gap_estimate: float
    best_history: np.ndarray
    restarts_run: int


class ErmNotConverged(RuntimeError):
    """Raised when no restart reaches an objective plateau within max_iter."""

    def __init__(self, best_theta, objective, gap_estimate):
        super().__init__(
            f"ERM solver did not converge: objective {objective:.6g}, "
            f"gap estimate {gap_estimate:.3g}"
        )
        self.best_theta = best_theta
        self.objective = objective
        self.gap_estimate = gap_estimate


def _loss_weights(loss: LossSpec, u: np.ndarray) -> np.ndarray:
    """dg/du of the per-step loss at residuals u (scalar-forecast case)."""
    if loss.kind == "absolute":
        return np.sign(u)
    if loss.kind == "quadratic":
        return 2.0 * u
    # kink at u = 0 resolved as tau (any value in [-(1-tau), tau] is a subgradient)
    return np.where(u > 0, loss.tau, -(1.0 - loss.tau))


def _objective_scalar(loss, F, y, theta):
    return float(evaluate_path(loss, F @ theta, y).mean())


def _subgrad_scalar(loss, F, y, theta):
    u = F @ theta - y
    return F.T @ _loss_weights(loss, u) / u.size


def _objective_vector(loss, F, y, theta):
    preds = np.einsum("tpd,d->tp", F, theta)
    return float(evaluate_path(loss, preds, y).mean())


def _subgrad_vector(loss, F, y, theta):
    e = np.einsum("tpd,d->tp", F, theta) - y
    if loss.kind == "quadratic":
        w = 2.0 * e
    else:
        norms = np.linalg.norm(e, axis=1, keepdims=True)
        w = np.divide(e, norms, out=np.zeros_like(e), where=norms > 0)
    return np.einsum("tpd,tp->d", F, w) / e.shape[0]


def _tie_key(objective, theta):
    return (objective, float(np.abs(theta).sum()), tuple(theta))


def _default_starts(F, y, scalar, radius, d):
    if scalar:
        base, *_ = np.linalg.lstsq(F, y, rcond=None)
    else:
        m, p, _ = F.shape
        base, *_ = np.linalg.lstsq(F.reshape(m * p, d), y.reshape(m * p), rcond=None)
    return base, [
        l1_project(base, radius),
        np.zeros(d),
        l1_project(0.5 * base, radius),
        l1_project(2.0 * base, radius),
        np.full(d, radius / (2.0 * d)),
    ]


def erm_fit(series: TimeSeries, family: PredictorFamily, loss: LossSpec,
            config: ErmConfig | None = None, candidates=None,
            return_info: bool = False):
    """Empirical risk minimizer over the family's l1 ball (or a finite set).

    Continuous case: projected subgradient descent with Polyak-style decaying
    steps and iterate averaging, restarted from deterministic start points.
    Ties (equal objectives) resolve by smallest l1 norm, then lexicographic
    coordinate order. With `candidates`, picks the best of the given finite
    parameter set instead.

    Raises ErmNotConverged (carrying the best iterate and a gap estimate)
    when no restart plateaus within the iteration budget.
    """
    cfg = config or ErmConfig()
    if candidates is not None:
        cands = [family._theta(c) for c in candidates]
        if not cands:
            raise ValueError("empty candidate set")
        reports = [empirical_risk(series, family, c, loss).empirical_risk for c in cands]
        best = min(range(len(cands)), key=lambda i: _tie_key(reports[i], cands[i]))
        theta = cands[best]
        if return_info:
            info = ErmInfo(reports[best], True, 0.0, np.array([reports[best]]), 0)
            return theta, info
        return theta

    F, y = family.design(series)
    d = family.param_dim
    radius = family.radius
    scalar = F.ndim == 2
    objective = _objective_scalar if scalar else _objective_vector
    subgrad = _subgrad_scalar if scalar else _subgrad_vector

    ls_base, starts = _default_starts(F, y, scalar, radius, d)
    if cfg.starts is not None:
        starts = [l1_project(np.asarray(s, dtype=float), radius) for s in cfg.starts]
    else:
        starts = starts[: max(1, cfg.restarts)]

    # a feasible unconstrained least-squares point is the certified optimum
    # of the quadratic problem
    if loss.kind == "quadratic" and np.abs(ls_base).sum() <= radius:
        f_ls = objective(loss, F, y, ls_base)
        if return_info:
            return ls_base, ErmInfo(f_ls, True, 0.0, np.array([f_ls]), 0)
        return ls_base

    best_theta = None
    best_f = np.inf
    best_key = None
    histories = []
    any_converged = False
    gap = np.inf

    for start in starts:
        theta = start.copy()
        f = objective(loss, F, y, theta)
        local_best_f, local_best = f, theta.copy()
        delta0 = 0.5 * max(f, 1e-8)
        avg = np.zeros(d)
        n_avg = 0
        history = np.empty(cfg.max_iter)
        stationary = False
        for t in range(cfg.max_iter):
            g = subgrad(loss, F, y, theta)
            gnorm2 = float(g @ g)
            if gnorm2 <= 1e-30:
                # zero subgradient of a convex objective: global minimum
                stationary = True
                history[t:] = local_best_f
                break
            delta = delta0 / np.sqrt(t + 1.0)
            step = (f - (local_best_f - delta)) / gnorm2
            if step <= 0:
                step = delta / gnorm2
            theta = l1_project(theta - step * g, radius)
            f = objective(loss, F, y, theta)
            if f < local_best_f:
                local_best_f, local_best = f, theta.copy()
            avg += theta
            n_avg += 1
            history[t] = local_best_f
        if n_avg:
            theta_avg = l1_project(avg / n_avg, radius)
            f_avg = objective(loss, F, y, theta_avg)
            if f_avg < local_best_f:
                local_best_f, local_best = f_avg, theta_avg
        histories.append(history)
        half = cfg.max_iter // 2
        local_gap = float(history[half] - history[-1])
        converged = stationary or (
            cfg.max_iter >= 10
            and local_gap <= cfg.plateau_tol * (1.0 + abs(local_best_f))
        )
        any_converged = any_converged or converged
        gap = min(gap, local_gap)
        key = _tie_key(local_best_f, local_best)
        if best_key is None or key < best_key:
            best_key, best_f, best_theta = key, local_best_f, local_best

    if not any_converged:
        raise ErmNotConverged(best_theta, best_f, gap)
    if return_info:
        info = ErmInfo(best_f, True, gap, np.minimum.reduce(histories), len(starts))
        return best_theta, info
    return best_theta
