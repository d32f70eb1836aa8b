"""Time-series containers, synthetic generators and CSV ingestion."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "TimeSeries",
    "GeneratorSpec",
    "generate",
    "load_csv",
    "save_csv",
    "lag_window",
    "empirical_variance",
    "subseries",
]

MODELS = ("ar1", "sinar1", "ar2", "sparse48", "cossin")
INNOVATIONS = ("uniform", "gaussian")

# largest autoregressive lag each recursion looks back to
_MODEL_LAGS = {"ar1": 1, "sinar1": 1, "ar2": 2, "sparse48": 8, "cossin": 2}


@dataclass(frozen=True)
class TimeSeries:
    """Ordered real-valued observations, shape (n, p), immutable after construction.

    Parameters
    ----------
    values : array-like
        Observations in chronological order; 1-d input is treated as p=1.
    columns : tuple of str, optional
        Column labels; generated as x1..xp when omitted at CSV export time.
    """

    values: np.ndarray
    columns: tuple[str, ...] | None = None

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=float)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.ndim != 2:
            raise ValueError(f"series values must be 1-d or 2-d, got ndim={arr.ndim}")
        if arr.shape[0] < 1:
            raise ValueError("empty series")
        if arr.shape[1] < 1:
            raise ValueError("series needs at least one column")
        if not np.all(np.isfinite(arr)):
            raise ValueError("series contains non-finite entries")
        if self.columns is not None:
            cols = tuple(str(c) for c in self.columns)
            if len(cols) != arr.shape[1]:
                raise ValueError(
                    f"{len(cols)} column labels for {arr.shape[1]} columns"
                )
            object.__setattr__(self, "columns", cols)
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]

    def scalar(self) -> np.ndarray:
        """The single column of a p=1 series as a 1-d array."""
        if self.p != 1:
            raise ValueError(f"series has p={self.p}, expected p=1")
        return self.values[:, 0]

    def column(self, name: str) -> np.ndarray:
        if self.columns is None or name not in self.columns:
            raise KeyError(f"no column named {name!r}")
        return self.values[:, self.columns.index(name)]


@dataclass(frozen=True)
class GeneratorSpec:
    """Recipe for a synthetic autoregressive series.

    model: one of ar1 (X_t = 0.5 X_{t-1} + e_t), sinar1 (0.5 sin X_{t-1} + e_t),
    ar2 (0.5 X_{t-1} + 0.1 X_{t-2} + e_t), sparse48 (0.6 X_{t-4} + 0.1 X_{t-8} + e_t),
    cossin (cos(X_{t-1}) sin(X_{t-2}) + e_t).
    innovation: "uniform" on [-scale, scale] or "gaussian" with sd scale.
    """

    model: str
    innovation: str
    scale: float
    n: int
    burn_in: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}")
        if self.innovation not in INNOVATIONS:
            raise ValueError(f"unknown innovation {self.innovation!r}")
        if self.scale < 0:
            raise ValueError("innovation scale must be >= 0")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.burn_in < 0:
            raise ValueError("burn_in must be >= 0")

    def with_seed(self, seed: int) -> "GeneratorSpec":
        return replace(self, seed=seed)


def _innovations(rng: np.random.Generator, law: str, scale: float, size: int) -> np.ndarray:
    if law == "uniform":
        return rng.uniform(-scale, scale, size)
    # Box-Muller on uniforms; 1 - U keeps the log argument in (0, 1]
    u1 = 1.0 - rng.random(size)
    u2 = rng.random(size)
    return scale * np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)


def generate(spec: GeneratorSpec) -> TimeSeries:
    """Iterate the model recursion from a zero state, discarding burn-in.

    Deterministic given spec.seed; innovation scale 0 yields the noise-free
    fixed point (the all-zero series for every model).
    """
    lag = _MODEL_LAGS[spec.model]
    total = spec.burn_in + spec.n
    rng = np.random.default_rng(spec.seed)
    eps = _innovations(rng, spec.innovation, spec.scale, total)
    buf = np.zeros(lag + total)
    model = spec.model
    for t in range(lag, lag + total):
        if model == "ar1":
            drift = 0.5 * buf[t - 1]
        elif model == "sinar1":
            drift = 0.5 * math.sin(buf[t - 1])
        elif model == "ar2":
            drift = 0.5 * buf[t - 1] + 0.1 * buf[t - 2]
        elif model == "sparse48":
            drift = 0.6 * buf[t - 4] + 0.1 * buf[t - 8]
        else:  # cossin
            drift = math.cos(buf[t - 1]) * math.sin(buf[t - 2])
        buf[t] = drift + eps[t - lag]
    return TimeSeries(buf[lag + spec.burn_in:])


def lag_window(series: TimeSeries, t: int, k: int) -> np.ndarray:
    """The k observations preceding time t (1-based), most recent first.

    Returns the (k, p) array (X_{t-1}, ..., X_{t-k}); requires k < t <= n.
    """
    if k < 1:
        raise ValueError("window length k must be >= 1")
    if not k < t <= series.n:
        raise ValueError(f"lag window out of range: need k < t <= n, got t={t}, k={k}, n={series.n}")
    return series.values[t - 1 - k: t - 1][::-1]


def empirical_variance(series: TimeSeries) -> float:
    """Sample variance (divisor n) of a scalar series; requires n >= 2."""
    if series.p != 1:
        raise ValueError(f"empirical variance needs p=1, got p={series.p}")
    if series.n < 2:
        raise ValueError("empirical variance needs n >= 2")
    return float(np.var(series.scalar()))


def subseries(series: TimeSeries, start: int, stop: int) -> TimeSeries:
    """Observations start..stop (1-based, inclusive) as a new series."""
    if not 1 <= start <= stop <= series.n:
        raise ValueError(f"invalid range {start}..{stop} for n={series.n}")
    return TimeSeries(series.values[start - 1: stop], columns=series.columns)


def _open_text(source):
    if hasattr(source, "read"):
        data = source.read()
        if isinstance(data, bytes):
            data = data.decode("utf-8")
        return io.StringIO(data)
    return open(source, "r", newline="")


def load_csv(source, columns=None) -> TimeSeries:
    """Read a TimeSeries from RFC-4180-style CSV with a header row.

    Parameters
    ----------
    source : path, text or byte stream
    columns : sequence of str, optional
        Column names to keep, in the given order; all columns when omitted.

    Raises
    ------
    ValueError
        Missing mapped column, header-only file ("empty series"), or a cell
        that does not parse as a decimal (named by data row and column).
    """
    with _open_text(source) as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError("empty series: no header row") from None
        header = [h.strip() for h in header]
        if columns is None:
            picked = list(range(len(header)))
            names = tuple(header)
        else:
            names = tuple(columns)
            missing = [c for c in names if c not in header]
            if missing:
                raise ValueError(f"missing mapped column(s): {', '.join(missing)}")
            picked = [header.index(c) for c in names]
        rows = []
        for i, row in enumerate(reader, start=1):
            if not row or all(not c.strip() for c in row):
                continue
            values = []
            for j in picked:
                if j >= len(row):
                    raise ValueError(f"row {i}: missing column {header[j]!r}")
                cell = row[j].strip()
                try:
                    values.append(float(cell))
                except ValueError:
                    raise ValueError(
                        f"row {i}, column {header[j]!r}: cannot parse {cell!r} as a number"
                    ) from None
            rows.append(values)
    if not rows:
        raise ValueError("empty series")
    return TimeSeries(np.array(rows), columns=names)


def save_csv(series: TimeSeries, sink) -> None:
    """Write the series as CSV (header row, one observation per row).

    Floats are written with shortest round-tripping repr so that
    load_csv(save_csv(s)) == s exactly.
    """
    names = series.columns or tuple(f"x{i + 1}" for i in range(series.p))
    own = not hasattr(sink, "write")
    fh = open(sink, "w", newline="") if own else sink
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(names)
        for row in series.values:
            writer.writerow([str(float(v)) for v in row])
    finally:
        if own:
            fh.close()
