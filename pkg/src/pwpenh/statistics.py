"""Histograms, Gaussian fits, NMSE goodness-of-fit and KL divergences."""

from dataclasses import dataclass
from math import sqrt

import numpy as np
from scipy.special import ndtr

from .errors import AllBinsExcluded, BadBinCount, DegenerateData, EmptyInput, ShapeMismatch

DEFAULT_BINS = 50
EPS_KL = 1e-12
EPS_BIN = 1e-12


@dataclass(frozen=True)
class Histogram:
    edges: np.ndarray
    counts: np.ndarray
    probs: np.ndarray

    @property
    def n_bins(self):
        return self.counts.size

    @property
    def total(self):
        return int(self.counts.sum())

    @property
    def centers(self):
        return 0.5 * (self.edges[:-1] + self.edges[1:])


@dataclass(frozen=True)
class GaussianParams:
    mean: float
    std: float

    def cdf(self, x):
        return ndtr((np.asarray(x, dtype=np.float64) - self.mean) / self.std)

    def pdf(self, x):
        z = (np.asarray(x, dtype=np.float64) - self.mean) / self.std
        return np.exp(-0.5 * z * z) / (self.std * sqrt(2.0 * np.pi))

    def bin_probs(self, edges):
        """Probability mass the Gaussian assigns to each bin."""
        return np.diff(self.cdf(edges))


def histogram(values, bins=DEFAULT_BINS, range=None):
    """Equal-width histogram over ``[min, max]`` (or an explicit ``range``).

    ``probs[i] = counts[i] / N_c`` where ``N_c`` is the number of values.
    A zero-width range is widened by +-0.5 so the edges stay strictly
    increasing.
    """
    x = np.asarray(values, dtype=np.float64).ravel()
    if x.size == 0:
        raise EmptyInput("histogram of an empty sequence")
    if int(bins) != bins or bins < 2:
        raise BadBinCount(f"need an integer bin count >= 2, got {bins}")
    counts, edges = np.histogram(x, bins=int(bins), range=range)
    probs = counts / x.size
    return Histogram(edges=edges, counts=counts, probs=probs)


def gaussian_fit(values):
    """Maximum-likelihood (population) mean and standard deviation."""
    x = np.asarray(values, dtype=np.float64).ravel()
    if x.size < 2:
        raise DegenerateData("need at least two values to fit a Gaussian")
    std = float(x.std())
    if std == 0.0:
        raise DegenerateData("all values are identical")
    return GaussianParams(mean=float(x.mean()), std=std)


def nmse(fitted, empirical, eps=EPS_BIN):
    """Root-mean-square of the relative error ``(y - x) / y``.

    Bins whose fitted value is below ``eps`` in magnitude are left out of
    the mean.
    """
    y = np.asarray(fitted, dtype=np.float64).ravel()
    x = np.asarray(empirical, dtype=np.float64).ravel()
    if y.shape != x.shape:
        raise ShapeMismatch(f"length mismatch: {y.size} vs {x.size}")
    if y.size == 0:
        raise EmptyInput("nmse of empty sequences")
    keep = np.abs(y) >= eps
    if not keep.any():
        raise AllBinsExcluded("every fitted value is below the zero guard")
    rel = (y[keep] - x[keep]) / y[keep]
    return float(np.sqrt(np.mean(rel * rel)))


def _smooth(p, eps):
    p = np.asarray(p, dtype=np.float64).ravel()
    if np.any(p == 0.0):
        p = np.where(p == 0.0, eps, p)
        p = p / p.sum()
    return p


def kl_divergence(p, q, eps=EPS_KL):
    """``sum p_i ln(p_i / q_i)``; empty q-bins are smoothed to ``eps``.

    Empty p-bins contribute nothing (``p ln p -> 0``).
    """
    p = np.asarray(p, dtype=np.float64).ravel()
    q = np.asarray(q, dtype=np.float64).ravel()
    if p.shape != q.shape:
        raise ShapeMismatch(f"bin count mismatch: {p.size} vs {q.size}")
    q = _smooth(q, eps)
    nz = p > 0
    return float(np.sum(p[nz] * (np.log(p[nz]) - np.log(q[nz]))))


def symmetric_kl(p, q, eps=EPS_KL):
    return 0.5 * (kl_divergence(p, q, eps) + kl_divergence(q, p, eps))


def predicted_probs(values, hist):
    """Fit a Gaussian to ``values`` and return (params, per-bin masses)."""
    params = gaussian_fit(values)
    return params, params.bin_probs(hist.edges)


def shared_histograms(a, b, bins=DEFAULT_BINS):
    """Histogram two samples on common edges spanning both."""
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.size == 0 or b.size == 0:
        raise EmptyInput("shared histogram needs two non-empty samples")
    lo = min(a.min(), b.min())
    hi = max(a.max(), b.max())
    rng = (lo, hi) if hi > lo else None
    return histogram(a, bins, range=rng), histogram(b, bins, range=rng)
