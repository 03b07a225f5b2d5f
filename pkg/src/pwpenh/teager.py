"""Discrete Teager energy operator."""

import numpy as np

from .errors import TooShort


def teager(coeffs):
    """Kaiser's discrete operator ``x[m]**2 - x[m-1]*x[m+1]`` along the last axis.

    The two endpoints copy their nearest interior value so the output has the
    same length as the input. Values may be negative for non-sinusoidal data.
    """
    x = np.asarray(coeffs, dtype=np.float64)
    if x.shape[-1] < 3:
        raise TooShort(f"teager needs at least 3 samples, got {x.shape[-1]}")
    out = np.empty_like(x)
    out[..., 1:-1] = x[..., 1:-1] ** 2 - x[..., :-2] * x[..., 2:]
    out[..., 0] = out[..., 1]
    out[..., -1] = out[..., -2]
    return out


def teager_subbands(subbands):
    """Apply ``teager`` to every leaf of a SubbandSet, returning a list."""
    return [teager(c) for c in subbands.coeffs]
