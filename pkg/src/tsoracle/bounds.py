"""Closed-form and numerically optimized excess-risk bound calculators.

Every calculator is pure arithmetic over user-supplied constants: the sample
size n, lag count k, loss Lipschitz constant K, predictor Lipschitz budget L,
the a.s. series bound B, the dependence constant C (weak-dependence sum for
the slow-rate family, square-root phi-mixing sum for the fast-rate family),
confidence level eps, and per-model complexity/diameter/weight data. Nothing
here touches data, so the dependence constants stay honest inputs.

For the growth/climate predictor family, two Lipschitz budgets are sensible
inputs for L: the data-dependent one from lip_coefficient (|t1|+|t2|+
4|t3|*max|I|) or the radius-based D+1; both are accepted, the choice is the
caller's.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

__all__ = [
    "BoundInputs",
    "ModelComplexity",
    "OracleBound",
    "kappa",
    "slow_bound_finite_gibbs",
    "slow_bound_finite_erm",
    "slow_bound_parametric_gibbs",
    "slow_bound_parametric_erm",
    "model_selection_lambda",
    "select_bound",
    "fast_bound",
    "sparse_bound",
    "minimize_on_log_grid",
]

_LOG_BRACKET = (1e-6, 1e9)


@dataclass(frozen=True)
class ModelComplexity:
    """Per-model constants for multi-model bounds.

    d: complexity (dimension-like); D: diameter-like constant; weight: prior
    mass p_j; gap: excess risk of the model's best predictor over the overall
    best (a population quantity, supplied by the caller, 0 for the oracle's
    model); kappa: per-model slow-rate constant where needed.
    """

    d: float
    D: float
    weight: float = 1.0
    gap: float = 0.0
    kappa: float | None = None

    def __post_init__(self):
        if self.d < 0:
            raise ValueError("model complexity d must be >= 0")
        if self.D <= 0:
            raise ValueError("model diameter D must be > 0")
        if not 0 < self.weight <= 1:
            raise ValueError("model weight must be in (0, 1]")
        if self.gap < 0:
            raise ValueError("model gap must be >= 0")


@dataclass(frozen=True)
class BoundInputs:
    """Constants shared by the bound calculators; unused fields may stay None."""

    n: int
    eps: float
    k: int = 0
    K: float | None = None
    L: float | None = None
    B: float | None = None
    C: float | None = None
    lam: float | None = None
    M: int | None = None
    d: float | None = None
    D: float | None = None
    psi: float | None = None
    p_j: float | None = None
    p_lags: int | None = None
    kappa: float | None = None
    models: tuple[ModelComplexity, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not 0 <= self.k < self.n:
            raise ValueError("need 0 <= k < n")
        if not 0 < self.eps < 1:
            raise ValueError("eps must be in (0, 1)")
        for name in ("K", "L", "B", "C", "lam", "D", "psi", "kappa"):
            v = getattr(self, name)
            if v is not None and v <= 0 and not (name == "L" and v == 0):
                raise ValueError(f"{name} must be > 0")


@dataclass(frozen=True)
class OracleBound:
    """Remainder term Delta of R(theta_hat) <= inf R + Delta, with the lambda used."""

    delta: float
    lambda_used: float
    regime: str
    theorem: str


def _require(inputs: BoundInputs, *names):
    missing = [m for m in names if getattr(inputs, m) is None]
    if missing:
        raise ValueError(f"missing bound inputs: {', '.join(missing)}")


def kappa(inputs: BoundInputs) -> float:
    """Slow-rate constant K(1+L)(B+C)/sqrt(2); a preset inputs.kappa wins."""
    if inputs.kappa is not None:
        return inputs.kappa
    _require(inputs, "K", "L", "B", "C")
    return inputs.K * (1.0 + inputs.L) * (inputs.B + inputs.C) / math.sqrt(2.0)


def _shrink(inputs: BoundInputs) -> float:
    """n (1 - k/n)^2, the effective-sample deflation of the slow-rate term."""
    return inputs.n * (1.0 - inputs.k / inputs.n) ** 2


def minimize_on_log_grid(fn, lo: float = _LOG_BRACKET[0], hi: float = _LOG_BRACKET[1],
                         iters: int = 200):
    """Golden-section minimization of fn over [lo, hi] on the log scale."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = math.log(lo), math.log(hi)
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fn(math.exp(c)), fn(math.exp(d))
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fn(math.exp(c))
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fn(math.exp(d))
    x = math.exp((a + b) / 2.0)
    return x, fn(x)


def _check_delta(delta: float, theorem: str) -> float:
    if not math.isfinite(delta) or delta <= 0:
        raise ValueError(f"{theorem}: degenerate bound value {delta!r} for these inputs")
    return delta


def slow_bound_finite_gibbs(inputs: BoundInputs) -> OracleBound:
    """Gibbs bound for a finite class of M predictors at a fixed temperature.

    Delta = 2 lam kappa^2 / (n (1-k/n)^2) + 2 log(2M/eps) / lam.
    """
    _require(inputs, "lam", "M")
    kap = kappa(inputs)
    delta = (2.0 * inputs.lam * kap ** 2 / _shrink(inputs)
             + 2.0 * math.log(2.0 * inputs.M / inputs.eps) / inputs.lam)
    return OracleBound(_check_delta(delta, "finite-gibbs"), inputs.lam, "slow", "finite-gibbs")


def slow_bound_finite_erm(inputs: BoundInputs) -> OracleBound:
    """ERM bound for a finite class: the temperature-optimized finite-Gibbs bound.

    Closed form Delta = 4 kappa / (1-k/n) * sqrt(log(2M/eps) / n), attained at
    lam* = (1-k/n) sqrt(n log(2M/eps)) / kappa.
    """
    _require(inputs, "M")
    kap = kappa(inputs)
    shrink_frac = 1.0 - inputs.k / inputs.n
    logterm = math.log(2.0 * inputs.M / inputs.eps)
    delta = 4.0 * kap / shrink_frac * math.sqrt(logterm / inputs.n)
    lam_star = shrink_frac * math.sqrt(inputs.n * logterm) / kap
    return OracleBound(_check_delta(delta, "finite-erm"), lam_star, "slow", "finite-erm")


def slow_bound_parametric_gibbs(inputs: BoundInputs) -> OracleBound:
    """Gibbs bound for a d-dimensional class with diameter constant D.

    Delta = 2 lam kappa^2 / (n (1-k/n)^2)
            + 2 (d log(D sqrt(e) lam / d) + log(2/eps)) / lam.
    """
    _require(inputs, "lam", "d", "D")
    kap = kappa(inputs)
    delta = (2.0 * inputs.lam * kap ** 2 / _shrink(inputs)
             + 2.0 * (inputs.d * math.log(inputs.D * math.sqrt(math.e) * inputs.lam / inputs.d)
                      + math.log(2.0 / inputs.eps)) / inputs.lam)
    return OracleBound(_check_delta(delta, "param-gibbs"), inputs.lam, "slow", "param-gibbs")


def slow_bound_parametric_erm(inputs: BoundInputs) -> OracleBound:
    """ERM bound on the l1 ball of radius D, optimized over lam >= 2 K psi / d.

    Minimizes 2 lam kappa^2 / (n (1-k/n)^2)
              + (d log(2 e K psi (D+1) lam / d) + 2 log(2/eps)) / lam.
    """
    _require(inputs, "K", "d", "D", "psi")
    kap = kappa(inputs)
    shrink = _shrink(inputs)
    arg = 2.0 * math.e * inputs.K * inputs.psi * (inputs.D + 1.0) / inputs.d
    logeps = 2.0 * math.log(2.0 / inputs.eps)

    def obj(lam):
        return (2.0 * lam * kap ** 2 / shrink
                + (inputs.d * math.log(arg * lam) + logeps) / lam)

    lo = max(_LOG_BRACKET[0], 2.0 * inputs.K * inputs.psi / inputs.d)
    lam_star, delta = minimize_on_log_grid(obj, lo, _LOG_BRACKET[1])
    if obj(lo) < delta:
        lam_star, delta = lo, obj(lo)
    if lam_star >= _LOG_BRACKET[1] * 0.99:
        raise ValueError("param-erm: temperature minimization ran into the bracket edge")
    return OracleBound(_check_delta(delta, "param-erm"), lam_star, "slow", "param-erm")


def _selection_objective(inputs: BoundInputs, kap, d, D, weight):
    shrink = _shrink(inputs)
    logterm = math.log(2.0 / (inputs.eps * weight))

    def obj(lam):
        return (2.0 * lam * kap ** 2 / shrink
                + 2.0 * (d * math.log(D * math.e * lam / d) + logterm) / lam)

    return obj


def model_selection_lambda(inputs: BoundInputs) -> float:
    """Per-model temperature for the aggregation-selection rule.

    Minimizes 2 lam kappa_j^2/(n(1-k/n)^2)
              + 2 (d_j log(D_j e lam / d_j) + log(2/(eps p_j))) / lam
    by golden section on log lam. Reads kappa, d, D and the prior model
    weight p_j (default 1) from inputs.
    """
    _require(inputs, "d", "D")
    kap = kappa(inputs)
    weight = inputs.p_j if inputs.p_j is not None else 1.0
    if not 0 < weight <= 1:
        raise ValueError("p_j must be in (0, 1]")
    obj = _selection_objective(inputs, kap, inputs.d, inputs.D, weight)
    lam, _ = minimize_on_log_grid(obj)
    return lam


def select_bound(inputs: BoundInputs) -> OracleBound:
    """Model-selection aggregation bound over the models list.

    Delta = inf_j [ gap_j + 2 kappa_j/(1-k/n) ( sqrt(d_j/n)
            log(D_j e^2 sqrt(n/d_j)/kappa_j) + log(2/(eps p_j))/sqrt(n d_j) ) ].
    """
    if not inputs.models:
        raise ValueError("select bound needs a models list")
    shrink_frac = 1.0 - inputs.k / inputs.n
    best = None
    best_model = None
    for m in inputs.models:
        kap = m.kappa if m.kappa is not None else kappa(inputs)
        if m.d <= 0:
            raise ValueError("select bound needs d_j > 0 for every model")
        term = 2.0 * kap / shrink_frac * (
            math.sqrt(m.d / inputs.n)
            * math.log(m.D * math.e ** 2 / kap * math.sqrt(inputs.n / m.d))
            + math.log(2.0 / (inputs.eps * m.weight)) / math.sqrt(inputs.n * m.d)
        )
        value = m.gap + term
        if best is None or value < best:
            best, best_model = value, m
    kap = best_model.kappa if best_model.kappa is not None else kappa(inputs)
    lam = model_selection_lambda(BoundInputs(
        n=inputs.n, eps=inputs.eps, k=inputs.k, kappa=kap,
        d=best_model.d, D=best_model.D, p_j=best_model.weight,
    ))
    return OracleBound(_check_delta(best, "select"), lam, "slow", "select")


def fast_lambda(inputs: BoundInputs) -> float:
    """(n-k)/(4 k K L B C) ^ (n-k)/(16 k C), the fast-rate temperature."""
    _require(inputs, "K", "L", "B", "C")
    if inputs.k < 1:
        raise ValueError("fast-rate bounds need k >= 1")
    nk = inputs.n - inputs.k
    return min(nk / (4.0 * inputs.k * inputs.K * inputs.L * inputs.B * inputs.C),
               nk / (16.0 * inputs.k * inputs.C))


def fast_bound(inputs: BoundInputs) -> OracleBound:
    """Fast-rate aggregation bound over the models list.

    Delta = 4 inf_j [ gap_j + 4 k C (4 v K L B)
            (d_j log(D_j e (n-k)/(16 k C d_j)) + log(2/(eps p_j))) / (n-k) ],
    at temperature (n-k)/(4kKLBC) ^ (n-k)/(16kC). A model with d_j = 0
    contributes no complexity term (the d log(. / d) limit).
    """
    _require(inputs, "K", "L", "B", "C")
    if not inputs.models:
        raise ValueError("fast bound needs a models list")
    lam = fast_lambda(inputs)
    nk = inputs.n - inputs.k
    klb = inputs.K * inputs.L * inputs.B
    front = 4.0 * inputs.k * inputs.C * max(4.0, klb)
    best = None
    for m in inputs.models:
        if m.d > 0:
            complexity = m.d * math.log(m.D * math.e * nk / (16.0 * inputs.k * inputs.C * m.d))
        else:
            complexity = 0.0
        value = m.gap + front * (complexity + math.log(2.0 / (inputs.eps * m.weight))) / nk
        if best is None or value < best:
            best = value
    return OracleBound(_check_delta(4.0 * best, "fast"), lam, "fast", "fast")


def sparse_mixture_weight(p_lags: int, size: int) -> float:
    """Prior mass 2^(-|J|-1) C(p, |J|)^(-1) of one support of the given size."""
    if not 0 <= size <= p_lags:
        raise ValueError("support size out of range")
    return 2.0 ** (-(size + 1)) / math.comb(p_lags, size)


def sparse_bound(inputs: BoundInputs, supports, gaps=None) -> OracleBound:
    """Sparse-autoregression instance of the fast-rate bound.

    Each support J becomes a model with d_J = |J|, D_J = L, weight
    2^(-|J|-1) C(p,|J|)^(-1); the loss constant is K = 2B. Per-support gaps
    default to 0.
    """
    _require(inputs, "L", "B", "C")
    if inputs.p_lags is None:
        raise ValueError("sparse bound needs p_lags")
    supports = list(supports)
    if gaps is None:
        gaps = [0.0] * len(supports)
    if len(gaps) != len(supports):
        raise ValueError("gaps must align with supports")
    models = []
    for support, gap in zip(supports, gaps):
        size = len(set(support))
        models.append(ModelComplexity(
            d=size, D=inputs.L, weight=sparse_mixture_weight(inputs.p_lags, size), gap=gap,
        ))
    fast_inputs = BoundInputs(
        n=inputs.n, eps=inputs.eps, k=inputs.k, K=2.0 * inputs.B, L=inputs.L,
        B=inputs.B, C=inputs.C, models=tuple(models),
    )
    bound = fast_bound(fast_inputs)
    return OracleBound(bound.delta, bound.lambda_used, "fast", "sparse")
