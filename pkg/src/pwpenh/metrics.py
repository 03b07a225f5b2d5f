"""Objective quality measures and controlled noise mixing.

SNRSeg and WSS follow the usual textbook formulations: 32 ms frames,
segment SNRs clamped to [-10, 35] dB, and 25 Gaussian-shaped critical-band
filters for the spectral slope distance.
"""

from dataclasses import dataclass

import numpy as np

from .audio import SAMPLE_RATE, as_samples
from .errors import AllSilent, LengthMismatch, SilentInput

SEG_LEN = 256
SNR_FLOOR_DB = -10.0
SNR_CEIL_DB = 35.0
SILENT_FRAME_ENERGY = 1e-10

# critical band centre frequencies and bandwidths (Hz)
WSS_CENTER_HZ = np.array([
    50.0000, 120.000, 190.000, 260.000, 330.000, 400.000, 470.000, 540.000, 617.372,
    703.378, 798.717, 904.128, 1020.38, 1148.30, 1288.72, 1442.54, 1610.70, 1794.16,
    1993.93, 2211.08, 2446.71, 2701.97, 2978.04, 3276.17, 3597.63])
WSS_BANDWIDTH_HZ = np.array([
    70.0000, 70.0000, 70.0000, 70.0000, 70.0000, 70.0000, 70.0000, 77.3724, 86.0056,
    95.3398, 105.411, 116.256, 127.914, 140.423, 153.823, 168.154, 183.457, 199.776,
    217.153, 235.631, 255.255, 276.072, 298.126, 321.465, 346.136])
WSS_KMAX = 20.0
WSS_KLOCMAX = 1.0


@dataclass(frozen=True)
class QualityReport:
    snrseg_noisy: float
    snrseg_enhanced: float
    snrseg_improvement: float
    wss_noisy: float
    wss_enhanced: float


def _pair(clean, test):
    s = as_samples(clean)
    t = as_samples(test)
    if s.size != t.size:
        raise LengthMismatch(f"signals differ in length: {s.size} vs {t.size}")
    return s, t


def segment_snrs(clean, test, seg_len=SEG_LEN):
    """Clamped per-segment SNRs (dB) of the non-silent clean segments."""
    s, t = _pair(clean, test)
    n_seg = s.size // seg_len
    if n_seg == 0:
        raise AllSilent("signal shorter than one scoring segment")
    s = s[:n_seg * seg_len].reshape(n_seg, seg_len)
    e = t[:n_seg * seg_len].reshape(n_seg, seg_len) - s
    sig = np.sum(s * s, axis=1)
    err = np.sum(e * e, axis=1)
    keep = sig >= SILENT_FRAME_ENERGY
    if not keep.any():
        raise AllSilent("every clean segment is silent")
    with np.errstate(divide="ignore"):
        snr = 10.0 * np.log10(sig[keep] / err[keep])
    return np.clip(snr, SNR_FLOOR_DB, SNR_CEIL_DB)


def snrseg(clean, test):
    """Mean clamped segmental SNR in dB over 32 ms non-overlapping segments."""
    return float(np.mean(segment_snrs(clean, test)))


def snrseg_improvement(clean, noisy, enhanced):
    return snrseg(clean, enhanced) - snrseg(clean, noisy)


def _critical_filters(n_fft, fs):
    half = n_fft // 2
    max_freq = fs / 2.0
    bw_min = WSS_BANDWIDTH_HZ[0]
    min_factor = np.exp(-30.0 / (2.0 * 2.303))  # -30 dB point of the filters
    j = np.arange(half)
    filt = np.empty((WSS_CENTER_HZ.size, half))
    for i, (fc, bw_hz) in enumerate(zip(WSS_CENTER_HZ, WSS_BANDWIDTH_HZ)):
        f0 = fc / max_freq * half
        bw = bw_hz / max_freq * half
        norm = np.log(bw_min) - np.log(bw_hz)
        row = np.exp(-11.0 * ((j - np.floor(f0)) / bw) ** 2 + norm)
        filt[i] = row * (row > min_factor)
    return filt


def _band_energies_db(frames, filt, n_fft):
    spec = np.abs(np.fft.fft(frames, n_fft, axis=1)) ** 2
    energy = spec[:, :n_fft // 2] @ filt.T
    return 10.0 * np.log10(np.maximum(energy, 1e-10))


def _nearest_peaks(energy, slope):
    # Walks each band to its nearest spectral peak, as in the reference code.
    n_frames, n_slope = slope.shape
    peaks = np.empty_like(slope)
    for f in range(n_frames):
        s, e = slope[f], energy[f]
        for i in range(n_slope):
            n = i
            if s[i] > 0:
                while n < n_slope and s[n] > 0:
                    n += 1
                peaks[f, i] = e[n - 1]
            else:
                while n >= 0 and s[n] <= 0:
                    n -= 1
                peaks[f, i] = e[n + 1]
    return peaks


def wss(clean, test, fs=SAMPLE_RATE):
    """Weighted spectral slope distance; 0 for identical spectra, lower is better."""
    s, t = _pair(clean, test)
    win_len = int(round(0.032 * fs))
    hop = win_len // 2
    if s.size < win_len:
        raise LengthMismatch(f"signals need at least {win_len} samples for WSS")
    n_fft = 1 << int(np.ceil(np.log2(2 * win_len)))
    window = 0.5 * (1.0 - np.cos(2.0 * np.pi * np.arange(1, win_len + 1) / (win_len + 1)))
    n_frames = (s.size - win_len) // hop + 1
    idx = np.arange(n_frames)[:, None] * hop + np.arange(win_len)[None, :]
    filt = _critical_filters(n_fft, fs)

    e_c = _band_energies_db(s[idx] * window, filt, n_fft)
    e_t = _band_energies_db(t[idx] * window, filt, n_fft)
    slope_c = np.diff(e_c, axis=1)
    slope_t = np.diff(e_t, axis=1)
    peak_c = _nearest_peaks(e_c, slope_c)
    peak_t = _nearest_peaks(e_t, slope_t)

    def weights(e, peak):
        wmax = WSS_KMAX / (WSS_KMAX + e.max(axis=1, keepdims=True) - e[:, :-1])
        wloc = WSS_KLOCMAX / (WSS_KLOCMAX + peak - e[:, :-1])
        return wmax * wloc

    w = 0.5 * (weights(e_c, peak_c) + weights(e_t, peak_t))
    dist = np.sum(w * (slope_c - slope_t) ** 2, axis=1) / np.sum(w, axis=1)
    return float(np.mean(dist))


def mix_at_snr(clean, noise, target_snr_db):
    """Add ``noise`` (looped or truncated to fit) at the requested overall SNR."""
    s = as_samples(clean)
    v = as_samples(noise)
    p_s = np.mean(s * s) if s.size else 0.0
    if p_s <= 0.0:
        raise SilentInput("clean signal is silent")
    if v.size == 0 or not np.any(v):
        raise SilentInput("noise signal is silent")
    reps = -(-s.size // v.size)
    v = np.tile(v, reps)[:s.size]
    p_v = np.mean(v * v)
    if p_v <= 0.0:
        raise SilentInput("noise is silent over the clean signal's span")
    corr = np.dot(s, v) / np.sqrt(np.dot(s, s) * np.dot(v, v))
    if abs(corr) > 1.0 - 1e-9:
        raise SilentInput("noise is a scaled copy of the clean signal; no independent noise component")
    gain = np.sqrt(p_s / (p_v * 10.0 ** (target_snr_db / 10.0)))
    return s + gain * v


def quality_report(clean, noisy, enhanced, fs=SAMPLE_RATE):
    a = snrseg(clean, noisy)
    b = snrseg(clean, enhanced)
    return QualityReport(snrseg_noisy=a, snrseg_enhanced=b, snrseg_improvement=b - a,
                         wss_noisy=wss(clean, noisy, fs), wss_enhanced=wss(clean, enhanced, fs))
