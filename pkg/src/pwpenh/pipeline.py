"""Framing, per-frame enhancement and overlap-add resynthesis."""

from dataclasses import asdict, dataclass, field, fields

import numpy as np

from . import kernels
from .audio import SAMPLE_RATE, AudioBuffer, as_samples
from .errors import BadSampleRate, EmptySignal, ShapeMismatch, SignalTooShort
from .presence import PresenceConfig, PresenceState
from .threshold import EPS_POW, GAMMA_FLOOR, N_INIT, estimate_noise
from .wavelet import FRAME_LEN, SubbandSet, build_perceptual_tree, pwp_analyze, pwp_synthesize


@dataclass(frozen=True)
class FrameSpec:
    frame_len: int = FRAME_LEN
    hop: int = FRAME_LEN // 2

    def __post_init__(self):
        if self.frame_len != FRAME_LEN or self.hop != self.frame_len // 2:
            raise ValueError("only 512-sample frames with 50% overlap are supported")

    @property
    def window(self):
        return np.hamming(self.frame_len)


@dataclass(frozen=True)
class NoiseConfig:
    n_init: int = N_INIT
    update: bool = True
    update_rate: float = 0.98
    update_q: float = 0.9
    gamma_floor: float = GAMMA_FLOOR
    eps_pow: float = EPS_POW


@dataclass(frozen=True)
class EnhancerConfig:
    frame_spec: FrameSpec = field(default_factory=FrameSpec)
    tree_leaves: tuple = None  # None selects the default perceptual tree
    presence: PresenceConfig = field(default_factory=PresenceConfig)
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    hist_bins: int = 50
    window_profile: bool = True

    @property
    def tree(self):
        return build_perceptual_tree(self.tree_leaves)

    def kernel_params(self):
        p = np.zeros(kernels.N_PARAMS)
        pc, nc = self.presence, self.noise
        p[kernels.P_KAPPA] = pc.kappa
        p[kernels.P_KAPPA_DD] = pc.kappa_dd
        p[kernels.P_ETA_MIN] = pc.eta_min
        p[kernels.P_XI_MIN] = pc.xi_min
        p[kernels.P_XI_MAX] = pc.xi_max
        p[kernels.P_XI_PEAK] = pc.xi_peak
        p[kernels.P_Q_MAX] = pc.q_max
        p[kernels.P_GAMMA_FLOOR] = nc.gamma_floor
        p[kernels.P_EPS_POW] = nc.eps_pow
        p[kernels.P_UPDATE] = 1.0 if nc.update else 0.0
        p[kernels.P_UPDATE_RATE] = nc.update_rate
        p[kernels.P_UPDATE_Q] = nc.update_q
        return p

    def to_flat(self):
        """Flat ``key -> value`` view used by config files and manifests."""
        flat = {}
        flat.update(asdict(self.presence))
        flat.update({_noise_key(k): v for k, v in asdict(self.noise).items()})
        flat["hist_bins"] = self.hist_bins
        flat["window_profile"] = self.window_profile
        flat["tree"] = "default" if self.tree_leaves is None else \
            ";".join(f"{d}:{n}" for d, n in self.tree_leaves)
        return flat

    @classmethod
    def from_flat(cls, flat):
        """Inverse of ``to_flat``; unknown keys raise ``KeyError``."""
        flat = dict(flat)
        pres_names = {f.name: f.type for f in fields(PresenceConfig)}
        noise_keys = {_noise_key(f.name): f.name for f in fields(NoiseConfig)}
        pres, noise, kw = {}, {}, {}
        for key, val in flat.items():
            if key in pres_names:
                pres[key] = val
            elif key in noise_keys:
                noise[noise_keys[key]] = val
            elif key == "hist_bins":
                kw["hist_bins"] = int(val)
            elif key == "window_profile":
                kw["window_profile"] = _coerce(cls, "window_profile", val)
            elif key == "tree":
                kw["tree_leaves"] = _parse_tree(val)
            else:
                raise KeyError(key)
        pres = {k: _coerce(PresenceConfig, k, v) for k, v in pres.items()}
        noise = {k: _coerce(NoiseConfig, k, v) for k, v in noise.items()}
        return cls(presence=PresenceConfig(**pres), noise=NoiseConfig(**noise), **kw)


def _noise_key(name):
    # n_init and the floors keep their names; the update knobs get a prefix
    return name if name.startswith(("n_init", "gamma", "eps")) else "noise_" + name


def _coerce(cls, name, value):
    default = getattr(cls(), name)
    if isinstance(default, bool):
        if isinstance(value, str):
            low = value.strip().lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(f"{name}: expected a boolean, got {value!r}")
        return bool(value)
    if isinstance(default, int):
        return int(value)
    return float(value)


def _parse_tree(value):
    if value is None or value == "default":
        return None
    if isinstance(value, str):
        pairs = [item.split(":") for item in value.replace(",", ";").split(";") if item.strip()]
        return tuple((int(d), int(n)) for d, n in pairs)
    return tuple((int(d), int(n)) for d, n in value)


def _check_rate(audio):
    if isinstance(audio, AudioBuffer) and audio.sample_rate_hz != SAMPLE_RATE:
        raise BadSampleRate(f"BadSampleRate: expected {SAMPLE_RATE} Hz, got {audio.sample_rate_hz} Hz")


def n_frames_for(length, spec=FrameSpec()):
    padded = max(-(-length // spec.hop) * spec.hop, spec.frame_len)
    return (padded - spec.frame_len) // spec.hop + 1


def frame_signal(signal, spec=FrameSpec()):
    """Split into Hamming-windowed 512-sample frames with 50% overlap.

    The tail is zero-padded up to a multiple of the hop (and to at least one
    full frame). Returns an array of shape ``(n_frames, 512)``.
    """
    _check_rate(signal)
    x = as_samples(signal, require_rate=None)
    if x.size == 0:
        raise EmptySignal("cannot frame an empty signal")
    n = n_frames_for(x.size, spec)
    padded = np.zeros((n - 1) * spec.hop + spec.frame_len)
    padded[:x.size] = x
    idx = np.arange(n)[:, None] * spec.hop + np.arange(spec.frame_len)[None, :]
    return padded[idx] * spec.window


def window_envelope(n_frames, spec=FrameSpec()):
    env = np.zeros((n_frames - 1) * spec.hop + spec.frame_len)
    w = spec.window
    for i in range(n_frames):
        env[i * spec.hop:i * spec.hop + spec.frame_len] += w
    return env


def overlap_add(frames, spec=FrameSpec(), length=None):
    """Hop-shifted sum divided by the overlapped analysis-window envelope.

    The result has ``(n_frames - 1) * hop + frame_len`` samples, or is
    trimmed to ``length`` when given.
    """
    frames = np.asarray(frames, dtype=np.float64)
    if frames.ndim != 2 or frames.shape[1] != spec.frame_len:
        raise ShapeMismatch(f"frames must have shape (n, {spec.frame_len}), got {frames.shape}")
    n = frames.shape[0]
    out = np.zeros((n - 1) * spec.hop + spec.frame_len)
    for i in range(n):
        out[i * spec.hop:i * spec.hop + spec.frame_len] += frames[i]
    out /= window_envelope(n, spec)
    if length is not None:
        out = out[:length]
    return out


@dataclass
class EnhanceResult:
    signal: np.ndarray
    q_mean: np.ndarray        # (n_frames, n_subbands) mean absence probability
    lambda1: np.ndarray       # (n_frames, n_subbands) adaptive thresholds
    noise_power: np.ndarray   # (n_frames, n_subbands) noise power used per frame


def noise_profile(config=EnhancerConfig()):
    """Relative white-noise variance of each packed coefficient after windowing.

    The analysis window scales the noise seen by each basis function, so
    coefficients near the frame centre are noisier than those near its
    edges. Each subband's profile has unit mean.
    """
    tree = config.tree
    basis = pwp_analyze(np.diag(config.frame_spec.window), tree).packed
    var = np.sum(basis * basis, axis=0)
    off = tree.offsets
    for k in range(len(tree)):
        var[off[k]:off[k + 1]] /= var[off[k]:off[k + 1]].mean()
    return var


def min_length(config=EnhancerConfig()):
    spec = config.frame_spec
    return config.noise.n_init * spec.hop + spec.frame_len


def _prepare(noisy, config):
    _check_rate(noisy)
    x = as_samples(noisy, require_rate=None)
    if x.size == 0:
        raise EmptySignal("empty input signal")
    need = min_length(config)
    if x.size < need:
        raise SignalTooShort(f"input has {x.size} samples, need at least {need}")
    if not np.all(np.isfinite(x)):
        raise ValueError("input contains non-finite samples")
    return x


def analyze_signal(x, config=EnhancerConfig()):
    """Frame, window and PWP-analyse a whole signal; returns a batched SubbandSet."""
    frames = frame_signal(x, config.frame_spec)
    return pwp_analyze(frames, config.tree)


def enhance_detailed(noisy, config=EnhancerConfig()):
    """Run the full enhancement and keep the per-frame diagnostics."""
    x = _prepare(noisy, config)
    tree = config.tree
    coeffs = analyze_signal(x, config)
    noise = estimate_noise(coeffs, n_init=config.noise.n_init)
    n_sub = len(tree)
    state = PresenceState.initial(n_sub, config.presence)
    sigma_n_sq = noise.sigma_n_sq.copy()
    out, q_mean, lam1, noise_track = kernels.enhance_frames(
        coeffs.packed, tree.offsets, tree.lengths, sigma_n_sq,
        state.xi, state.prev_amp_sq, state.prev_eta, state.xi_subband,
        config.presence.w_local, config.presence.w_global, config.kernel_params(),
        noise_profile(config) if config.window_profile else None)
    frames = pwp_synthesize(SubbandSet(out, tree))
    y = overlap_add(frames, config.frame_spec, length=x.size)
    return EnhanceResult(y, q_mean, lam1, noise_track)


def enhance(noisy, config=EnhancerConfig()):
    """Enhance 8 kHz mono speech; output has the input's length."""
    result = enhance_detailed(noisy, config)
    if isinstance(noisy, AudioBuffer):
        return AudioBuffer(result.signal, noisy.sample_rate_hz)
    return result.signal
