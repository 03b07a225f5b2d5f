"""Comparison enhancers sharing the proposed method's framing and transform.

``universal`` soft-thresholds every subband at ``sigma_n * sqrt(2 ln M)``.
``semisoft`` and ``modified_hard`` keep the adaptive per-frame threshold but
swap in the corresponding fixed shrinkage rule, isolating the contribution
of the probability-driven shape parameters.
"""

from dataclasses import dataclass, field
from math import log, sqrt

import numpy as np

from .pipeline import EnhancerConfig, _prepare, analyze_signal, overlap_add
from .threshold import adaptive_threshold, estimate_noise, subband_gamma
from .thresholding import modified_hard, semisoft, soft
from .wavelet import SubbandSet, pwp_synthesize

METHODS = ("universal", "semisoft", "modified_hard")


def universal_threshold(sigma_n, n_coeffs):
    if n_coeffs < 2:
        raise ValueError("universal threshold needs at least 2 coefficients")
    return sigma_n * sqrt(2.0 * log(n_coeffs))


@dataclass(frozen=True)
class BaselineConfig:
    method: str = "universal"
    enhancer: EnhancerConfig = field(default_factory=EnhancerConfig)
    mh_beta: float = 2.0

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown baseline {self.method!r}; choose from {', '.join(METHODS)}")


def enhance_baseline(noisy, config=BaselineConfig()):
    cfg = config.enhancer
    x = _prepare(noisy, cfg)
    tree = cfg.tree
    coeffs = analyze_signal(x, cfg)
    sigma_n_sq = estimate_noise(coeffs, n_init=cfg.noise.n_init).sigma_n_sq
    sigma_n = np.sqrt(sigma_n_sq)
    lengths = tree.lengths
    out = np.empty_like(coeffs.packed)
    for k in range(len(tree)):
        band = coeffs[k]
        if config.method == "universal":
            lam = universal_threshold(sigma_n[k], lengths[k])
            shrunk = soft(band, lam)
        else:
            sig_y = np.mean(band ** 2, axis=1)
            gamma = subband_gamma(sig_y, sigma_n_sq[k], cfg.noise.gamma_floor)
            lam = adaptive_threshold(sigma_n[k], gamma, lengths[k])[:, None]
            if config.method == "semisoft":
                shrunk = semisoft(band, lam, 2.0 * lam)
            else:
                shrunk = modified_hard(band, lam, config.mh_beta)
        off = tree.offsets
        out[:, off[k]:off[k + 1]] = shrunk
    frames = pwp_synthesize(SubbandSet(out, tree))
    return overlap_add(frames, cfg.frame_spec, length=x.size)
