"""Replicate fan-out and order-independent aggregation for Monte Carlo runs."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np


@dataclass(frozen=True)
class MCEstimate:
    estimate: float
    stderr: float
    replicates: int

    def zscore(self, target: float) -> float:
        if self.stderr == 0:
            return 0.0 if self.estimate == target else math.inf
        return (self.estimate - target) / self.stderr


def chunked(replicates: Sequence[int], chunk: int):
    return [tuple(replicates[i:i + chunk]) for i in range(0, len(replicates), chunk)]


def map_replicates(func: Callable[[tuple], np.ndarray], replicates: int, chunk: int = 64,
                   workers: int = 1) -> np.ndarray:
    """Apply ``func`` to consecutive chunks of replicate indices and stack the rows.

    Chunks are fixed by ``chunk`` alone and results are reassembled in
    replicate order, so the output does not depend on ``workers``.
    """
    chunks = chunked(list(range(replicates)), chunk)
    if workers <= 1 or len(chunks) == 1:
        parts = [func(c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(func, chunks))
    return np.concatenate(parts, axis=0)


def fsum_mean(values: np.ndarray) -> float:
    """Mean with compensated summation (independent of summation order)."""
    values = np.asarray(values, dtype=float).ravel()
    return math.fsum(values.tolist()) / values.size


def mean_with_jackknife(values: np.ndarray) -> MCEstimate:
    """Sample mean and its jackknife standard error.

    For the mean the leave-one-out pseudo-values are the samples themselves,
    so the jackknife error equals std(ddof=1)/sqrt(M).
    """
    values = np.asarray(values, dtype=float).ravel()
    M = values.size
    if M < 2:
        raise ValueError("need at least two replicates")
    mean = fsum_mean(values)
    loo = (mean * M - values) / (M - 1)
    loo_mean = fsum_mean(loo)
    var = (M - 1) / M * math.fsum(((loo - loo_mean) ** 2).tolist())
    return MCEstimate(mean, math.sqrt(var), M)


def covariance_with_jackknife(x: np.ndarray, y: np.ndarray, centered: bool = False) -> MCEstimate:
    """E[XY] (or Cov(X, Y) if ``centered``) with a jackknife standard error."""
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if not centered:
        return mean_with_jackknife(x * y)
    M = x.size
    sx, sy, sxy = math.fsum(x.tolist()), math.fsum(y.tolist()), math.fsum((x * y).tolist())
    est = (sxy - sx * sy / M) / (M - 1)
    # leave-one-out estimates in O(M)
    lx, ly, lxy = sx - x, sy - y, sxy - x * y
    loo = (lxy - lx * ly / (M - 1)) / (M - 2)
    loo_mean = fsum_mean(loo)
    var = (M - 1) / M * math.fsum(((loo - loo_mean) ** 2).tolist())
    return MCEstimate(est, math.sqrt(var), M)
