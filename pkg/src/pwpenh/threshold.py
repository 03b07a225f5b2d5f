"""Subband noise/signal power estimation and the adaptive threshold."""

from dataclasses import dataclass
from math import log, sqrt

import numpy as np

from .errors import InsufficientFrames

EPS_POW = 1e-12
GAMMA_FLOOR = 1e-6
N_INIT = 6


@dataclass
class NoiseEstimate:
    """Per-subband noise power, floored at ``EPS_POW``.

    With ``update_rate`` set, ``update`` tracks slow drift by recursive
    averaging in subbands that look speech-free.
    """
    sigma_n_sq: np.ndarray
    update_rate: float = 0.98
    update_q: float = 0.9

    def update(self, sigma_y_sq, q_mean):
        """Blend the current frame's power into subbands with mean Q above ``update_q``."""
        mask = np.asarray(q_mean) > self.update_q
        if mask.any():
            r = self.update_rate
            blended = r * self.sigma_n_sq + (1.0 - r) * np.asarray(sigma_y_sq)
            self.sigma_n_sq = np.where(mask, np.maximum(blended, EPS_POW), self.sigma_n_sq)
        return self


@dataclass(frozen=True)
class SubbandStats:
    sigma_y_sq: float
    sigma_r_sq: float
    gamma: float


@dataclass(frozen=True)
class ThresholdPair:
    lambda1: float

    @property
    def lambda2(self):
        return 2.0 * self.lambda1


def estimate_noise(subband_frames, n_init=N_INIT, **kwargs):
    """Noise power per subband from the leading, assumed speech-free frames.

    ``subband_frames`` is a sequence of SubbandSets (or one batched
    SubbandSet); only the first ``n_init`` frames are used.
    """
    frames = _as_frame_list(subband_frames)
    if len(frames) < n_init:
        raise InsufficientFrames(f"need {n_init} leading frames, got {len(frames)}")
    lead = frames[:n_init]
    n_sub = len(lead[0])
    power = np.array([np.mean([np.mean(fr[k] ** 2) for fr in lead]) for k in range(n_sub)])
    return NoiseEstimate(np.maximum(power, EPS_POW), **kwargs)


def _as_frame_list(subband_frames):
    from .wavelet import SubbandSet

    if isinstance(subband_frames, SubbandSet):
        if subband_frames.packed.ndim == 1:
            return [subband_frames]
        return [SubbandSet(row, subband_frames.tree) for row in subband_frames.packed]
    return list(subband_frames)


def subband_snr(sigma_y_sq, sigma_n_sq, gamma_floor=GAMMA_FLOOR):
    sigma_r_sq = max(sigma_y_sq - sigma_n_sq, 0.0)
    return SubbandStats(sigma_y_sq, sigma_r_sq, max(sigma_r_sq / sigma_n_sq, gamma_floor))


def subband_gamma(sigma_y_sq, sigma_n_sq, gamma_floor=GAMMA_FLOOR):
    """Vectorised ``subband_snr(...).gamma``."""
    sigma_r_sq = np.maximum(np.asarray(sigma_y_sq) - sigma_n_sq, 0.0)
    return np.maximum(sigma_r_sq / sigma_n_sq, gamma_floor)


def universal_bound(sigma_n, n_coeffs):
    return sigma_n * sqrt(2.0 * log(n_coeffs))


def adaptive_threshold(sigma_n, gamma, n_coeffs=None):
    """Subband threshold from the noise level and segmental SNR ``gamma``.

    ``sigma_n / sqrt(gamma) * sqrt(2 (gamma + gamma**2)) * ln(sqrt(1 + 1/gamma))``,
    which grows without bound as ``gamma -> 0``; when ``n_coeffs`` is given
    the result is capped at ``sigma_n * sqrt(2 ln n_coeffs)``.
    Works elementwise on arrays.
    """
    s = np.asarray(sigma_n, dtype=np.float64)
    g = np.asarray(gamma, dtype=np.float64)
    lam = s / np.sqrt(g) * np.sqrt(2.0 * (g + g * g)) * np.log(np.sqrt(1.0 + 1.0 / g))
    if n_coeffs is not None:
        lam = np.minimum(lam, s * np.sqrt(2.0 * np.log(np.asarray(n_coeffs, dtype=np.float64))))
    return lam if lam.ndim else float(lam)


def threshold_pair(sigma_n, gamma, n_coeffs=None):
    return ThresholdPair(float(adaptive_threshold(sigma_n, gamma, n_coeffs)))
