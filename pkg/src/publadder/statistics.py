"""Deterministic summaries of numeric series."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .stochastic_core import InvalidParameterError

__all__ = ["SummaryStats", "Histogram", "summarize", "histogram"]


@dataclass(frozen=True)
class SummaryStats:
    """Mean, median, sample SD and range. ``n == 0`` marks an empty series
    and leaves the other fields as ``None``."""

    n: int
    mean: float | None = None
    median: float | None = None
    sd: float | None = None
    min: float | None = None
    max: float | None = None

    @property
    def empty(self) -> bool:
        return self.n == 0

    @property
    def sem(self) -> float | None:
        """Standard error of the mean."""
        if self.n == 0:
            return None
        return self.sd / math.sqrt(self.n)


def summarize(values) -> SummaryStats:
    x = np.sort(np.asarray(values, dtype=float).ravel())
    n = x.size
    if n == 0:
        return SummaryStats(0)
    # fsum makes the result independent of input order
    mean = math.fsum(x) / n
    mid = n // 2
    median = float(x[mid]) if n % 2 else 0.5 * (float(x[mid - 1]) + float(x[mid]))
    sd = math.sqrt(math.fsum((x - mean) ** 2) / (n - 1)) if n > 1 else 0.0
    return SummaryStats(n, mean, median, sd, float(x[0]), float(x[-1]))


@dataclass(frozen=True)
class Histogram:
    bin_width: float
    bins: tuple  # ((lower_edge, count), ...), contiguous
    origin: float = 0.0

    @property
    def n(self) -> int:
        return sum(c for _, c in self.bins)


def histogram(values, bin_width: float) -> Histogram:
    """Half-open bins ``[k*w, (k+1)*w)`` spanning the data, empty bins included."""
    if not (bin_width > 0) or not math.isfinite(bin_width):
        raise InvalidParameterError(f"bin_width must be positive, got {bin_width!r}")
    x = np.asarray(values, dtype=float).ravel()
    if x.size == 0:
        return Histogram(bin_width, ())
    k = np.floor(x / bin_width).astype(np.int64)
    lo = int(k.min())
    counts = np.bincount(k - lo)
    return Histogram(bin_width, tuple(((lo + i) * bin_width, int(c)) for i, c in enumerate(counts)))
