"""Loss functions of the form l(x, x') = g(x - x') with known Lipschitz constants."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["LossSpec", "evaluate", "evaluate_path", "lipschitz_constant"]

KINDS = ("absolute", "quadratic", "quantile")


@dataclass(frozen=True)
class LossSpec:
    """One of absolute / quadratic / quantile(tau); g is convex with g(0)=0, g >= 0."""

    kind: str
    tau: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown loss kind {self.kind!r}")
        if self.kind == "quantile":
            if self.tau is None or not 0.0 < self.tau < 1.0:
                raise ValueError("quantile loss needs tau strictly inside (0, 1)")
        elif self.tau is not None:
            raise ValueError(f"{self.kind} loss takes no tau")

    @classmethod
    def absolute(cls) -> "LossSpec":
        return cls("absolute")

    @classmethod
    def quadratic(cls) -> "LossSpec":
        return cls("quadratic")

    @classmethod
    def quantile(cls, tau: float) -> "LossSpec":
        return cls("quantile", tau)


def evaluate(loss: LossSpec, forecast, actual) -> float:
    """Loss of a single forecast against the realized value.

    absolute -> ||forecast - actual||, quadratic -> ||forecast - actual||^2,
    quantile(tau) with u = forecast - actual -> tau*u if u > 0 else -(1-tau)*u.
    Quantile is defined for scalars only.
    """
    f = np.atleast_1d(np.asarray(forecast, dtype=float))
    a = np.atleast_1d(np.asarray(actual, dtype=float))
    if f.shape != a.shape:
        raise ValueError(f"dimension mismatch: forecast {f.shape} vs actual {a.shape}")
    if loss.kind == "quantile":
        if f.size != 1:
            raise ValueError("quantile loss is defined for scalar series only")
        u = float(f[0] - a[0])
        return loss.tau * u if u > 0 else -(1.0 - loss.tau) * u
    d = f - a
    if loss.kind == "absolute":
        return float(np.linalg.norm(d))
    return float(np.dot(d, d))


def evaluate_path(loss: LossSpec, forecasts: np.ndarray, actuals: np.ndarray) -> np.ndarray:
    """Vectorized per-step losses for stacked (m, p) forecasts and actuals."""
    f = np.asarray(forecasts, dtype=float)
    a = np.asarray(actuals, dtype=float)
    if f.ndim == 1:
        f = f[:, None]
    if a.ndim == 1:
        a = a[:, None]
    if f.shape != a.shape:
        raise ValueError(f"dimension mismatch: forecasts {f.shape} vs actuals {a.shape}")
    if loss.kind == "quantile":
        if f.shape[1] != 1:
            raise ValueError("quantile loss is defined for scalar series only")
        u = f[:, 0] - a[:, 0]
        return np.where(u > 0, loss.tau * u, -(1.0 - loss.tau) * u)
    d = f - a
    sq = np.einsum("ij,ij->i", d, d)
    if loss.kind == "absolute":
        return np.sqrt(sq)
    return sq


def lipschitz_constant(loss: LossSpec, bound: float | None = None) -> float:
    """Lipschitz constant K of g on the relevant domain.

    absolute -> 1; quadratic -> 4*bound for series bounded by `bound`
    (required > 0); quantile(tau) -> max(tau, 1-tau).
    """
    if loss.kind == "absolute":
        return 1.0
    if loss.kind == "quantile":
        return max(loss.tau, 1.0 - loss.tau)
    if bound is None or bound <= 0:
        raise ValueError("quadratic loss needs a positive series bound")
    return 4.0 * bound
