"""Perceptual wavelet packet speech enhancement.

Noisy 8 kHz speech is split into 24 critical-band-like subbands, each
subband gets a threshold derived from its segmental SNR, and every
coefficient is shrunk by a rule whose shape follows the estimated speech
presence probability.
"""

from .audio import AudioBuffer, read_wav, write_wav
from .baselines import BaselineConfig, enhance_baseline, universal_threshold
from .errors import PwpError
from .metrics import QualityReport, mix_at_snr, quality_report, snrseg, snrseg_improvement, wss
from .pipeline import EnhancerConfig, FrameSpec, NoiseConfig, enhance, enhance_detailed
from .presence import PresenceConfig
from .wavelet import build_perceptual_tree, pwp_analyze, pwp_synthesize, qmf_filters

__version__ = "0.1.0"

__all__ = [
    "AudioBuffer", "BaselineConfig", "EnhancerConfig", "FrameSpec", "NoiseConfig",
    "PresenceConfig", "PwpError", "QualityReport", "build_perceptual_tree", "enhance",
    "enhance_baseline", "enhance_detailed", "mix_at_snr", "pwp_analyze", "pwp_synthesize",
    "qmf_filters", "quality_report", "read_wav", "snrseg", "snrseg_improvement",
    "universal_threshold", "write_wav", "wss",
]
