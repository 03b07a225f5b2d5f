"""Synthetic test material: speech-like utterances and stationary noises.

Nothing here is used by the enhancer itself; the generators give the test
suite, the benchmark and the CLI demo reproducible 8 kHz fixtures.
"""

import numpy as np
from scipy import signal as sps

FS = 8000

# (F1, F2, F3) in Hz for a handful of vowels
_VOWELS = (
    (730, 1090, 2440),
    (270, 2290, 3010),
    (300, 870, 2240),
    (530, 1840, 2480),
    (570, 840, 2410),
    (660, 1720, 2410),
)


def _resonator(freq, bw, fs=FS):
    r = np.exp(-np.pi * bw / fs)
    theta = 2.0 * np.pi * freq / fs
    a = [1.0, -2.0 * r * np.cos(theta), r * r]
    return [1.0 - r], a


def _voiced(n, f0_start, f0_end, formants, rng, fs=FS):
    f0 = np.linspace(f0_start, f0_end, n) * (1.0 + 0.01 * rng.standard_normal())
    phase = np.cumsum(f0 / fs)
    pulses = np.zeros(n)
    pulses[np.flatnonzero(np.diff(np.floor(phase), prepend=0.0) > 0)] = 1.0
    # glottal shaping: two real poles
    src = sps.lfilter([1.0], [1.0, -1.9, 0.9025], pulses)
    src -= src.mean()
    out = src
    for k, fc in enumerate(formants):
        b, a = _resonator(fc, 60.0 + 40.0 * k, fs)
        out = sps.lfilter(b, a, out)
    return out / (np.max(np.abs(out)) + 1e-12)


def _fricative(n, rng, fs=FS):
    b, a = sps.butter(4, [2200.0, 3800.0], btype="band", fs=fs)
    x = sps.lfilter(b, a, rng.standard_normal(n))
    return x / (np.max(np.abs(x)) + 1e-12)


def speech_like(duration=3.0, seed=0, lead_silence=0.3, fs=FS, peak=0.5):
    """A voiced/unvoiced syllable sequence with pauses and a silent lead-in.

    The lead-in keeps the first frames speech-free, as the noise estimator
    expects.
    """
    rng = np.random.default_rng(seed)
    n = int(round(duration * fs))
    out = np.zeros(n)
    pos = int(round(lead_silence * fs))
    f0 = rng.uniform(100.0, 180.0)
    while pos < n - int(0.12 * fs):
        if rng.random() < 0.25:
            seg = int(rng.uniform(0.06, 0.12) * fs)
            seg = min(seg, n - pos)
            env = np.hanning(seg)
            out[pos:pos + seg] += 0.3 * env * _fricative(seg, rng, fs)
            pos += seg
        seg = int(rng.uniform(0.15, 0.32) * fs)
        seg = min(seg, n - pos)
        if seg < 64:
            break
        formants = _VOWELS[rng.integers(len(_VOWELS))]
        f_end = f0 * rng.uniform(0.85, 1.1)
        env = np.sin(np.pi * np.arange(seg) / seg) ** 0.6
        out[pos:pos + seg] += rng.uniform(0.6, 1.0) * env * _voiced(seg, f0, f_end, formants, rng, fs)
        f0 = float(np.clip(f_end, 90.0, 220.0))
        pos += seg + int(rng.uniform(0.04, 0.15) * fs)
    return peak * out / (np.max(np.abs(out)) + 1e-12)


def white_noise(n, seed=0):
    return np.random.default_rng(seed).standard_normal(n)


def car_noise(n, seed=0, cutoff_hz=500.0, fs=FS):
    """Low-pass filtered white noise with most energy below ``cutoff_hz``."""
    rng = np.random.default_rng(seed)
    b, a = sps.butter(2, cutoff_hz, fs=fs)
    x = sps.lfilter(b, a, rng.standard_normal(n + 1024))[1024:]
    return x / np.std(x)
