"""Custom thresholding function and its two limit cases.

All three functions broadcast over numpy arrays. Boundary points
``|Y| == lambda1`` and ``|Y| == lambda2`` fall in the middle branch; the
function is continuous there, so the choice is not observable.
"""

import numpy as np

from .errors import BadThresholds


def _check(lambda1, lambda2=None):
    l1 = np.asarray(lambda1, dtype=np.float64)
    if np.any(~(l1 > 0)):
        raise BadThresholds("lambda1 must be positive")
    if lambda2 is None:
        return l1, None
    l2 = np.asarray(lambda2, dtype=np.float64)
    if np.any(~(l2 > l1)):
        raise BadThresholds("lambda2 must exceed lambda1")
    return l1, l2


def _power_law(y, lambda1, beta):
    # sgn(Y) |Y|^beta / lambda1^(beta-1)
    a = np.abs(y)
    return np.sign(y) * a * (a / lambda1) ** (beta - 1.0)


def _ramp(y, lambda1, lambda2):
    return np.sign(y) * lambda2 * (np.abs(y) - lambda1) / (lambda2 - lambda1)


def custom_threshold(y, lambda1, lambda2=None, alpha=1.0, beta=1.0):
    """Blend of modified-hard and semisoft shrinkage.

    Below ``lambda1`` the coefficient is attenuated as
    ``alpha * sgn(Y) |Y|^beta / lambda1^(beta-1)``; above ``lambda2`` it passes
    unchanged; in between it is ``(1-alpha) * ramp + alpha * Y``.
    ``lambda2`` defaults to ``2 * lambda1``.
    """
    if lambda2 is None:
        lambda2 = 2.0 * np.asarray(lambda1, dtype=np.float64)
    l1, l2 = _check(lambda1, lambda2)
    beta = np.asarray(beta, dtype=np.float64)
    if np.any(beta < 1.0):
        raise BadThresholds("beta must be >= 1")
    y = np.asarray(y, dtype=np.float64)
    alpha = np.asarray(alpha, dtype=np.float64)
    a = np.abs(y)
    with np.errstate(invalid="ignore", divide="ignore"):
        low = alpha * _power_law(y, l1, beta)
        mid = (1.0 - alpha) * _ramp(y, l1, l2) + alpha * y
    out = np.where(a < l1, low, np.where(a > l2, y, mid))
    return out if out.ndim else float(out)


def semisoft(y, lambda1, lambda2=None):
    if lambda2 is None:
        lambda2 = 2.0 * np.asarray(lambda1, dtype=np.float64)
    l1, l2 = _check(lambda1, lambda2)
    y = np.asarray(y, dtype=np.float64)
    a = np.abs(y)
    out = np.where(a < l1, 0.0, np.where(a > l2, y, _ramp(y, l1, l2)))
    return out if out.ndim else float(out)


def modified_hard(y, lambda1, beta=1.0):
    l1, _ = _check(lambda1)
    beta = np.asarray(beta, dtype=np.float64)
    if np.any(beta < 1.0):
        raise BadThresholds("beta must be >= 1")
    y = np.asarray(y, dtype=np.float64)
    out = np.where(np.abs(y) < l1, _power_law(y, l1, beta), y)
    return out if out.ndim else float(out)


def soft(y, lam):
    """Classical soft shrinkage ``sgn(Y) max(|Y| - lam, 0)``."""
    y = np.asarray(y, dtype=np.float64)
    out = np.sign(y) * np.maximum(np.abs(y) - lam, 0.0)
    return out if out.ndim else float(out)
