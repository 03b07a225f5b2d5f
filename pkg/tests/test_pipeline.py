import numpy as np
import pytest

from pwpenh import metrics, synth
from pwpenh.audio import AudioBuffer
from pwpenh.errors import BadSampleRate, EmptySignal, ShapeMismatch, SignalTooShort
from pwpenh.pipeline import (EnhancerConfig, FrameSpec, NoiseConfig, enhance, enhance_detailed,
                             frame_signal, min_length, n_frames_for, noise_profile, overlap_add,
                             window_envelope)
from pwpenh.presence import PresenceConfig


def test_frame_spec_defaults():
    spec = FrameSpec()
    assert (spec.frame_len, spec.hop) == (512, 256)
    np.testing.assert_array_equal(spec.window, np.hamming(512))
    with pytest.raises(ValueError):
        FrameSpec(frame_len=256)


def test_envelope_strictly_positive():
    assert window_envelope(10).min() > 0


@pytest.mark.parametrize("length, frames", [(1024, 3), (512, 1), (100, 1), (1025, 4)])
def test_frame_count(length, frames):
    assert n_frames_for(length) == frames
    assert frame_signal(np.ones(length)).shape == (frames, 512)


def test_frames_are_windowed():
    np.testing.assert_array_equal(frame_signal(np.ones(1024))[1], np.hamming(512))
    assert not np.any(frame_signal(np.zeros(3000)))


def test_empty_signal():
    with pytest.raises(EmptySignal):
        frame_signal(np.zeros(0))


def test_ola_round_trip(rng):
    x = rng.standard_normal(24_000)
    y = overlap_add(frame_signal(x), length=x.size)
    assert np.linalg.norm(y - x) / np.linalg.norm(x) < 1e-6


def test_ola_lengths_and_zeros():
    assert overlap_add(np.zeros((3, 512))).size == 1024
    assert not np.any(overlap_add(np.zeros((3, 512))))
    with pytest.raises(ShapeMismatch):
        overlap_add(np.zeros((3, 500)))


def test_flat_config_round_trip():
    cfg = EnhancerConfig(presence=PresenceConfig(kappa=0.5, w_global=4),
                         noise=NoiseConfig(n_init=8, update=False), hist_bins=30,
                         window_profile=False, tree_leaves=tuple((6, n) for n in range(10))
                         + tuple((5, n) for n in range(5, 12)) + tuple((4, n) for n in range(6, 10))
                         + tuple((3, n) for n in range(5, 8)))
    flat = {k: str(v) for k, v in cfg.to_flat().items()}
    assert EnhancerConfig.from_flat(flat) == cfg
    with pytest.raises(KeyError):
        EnhancerConfig.from_flat({"no_such_key": 1})


def test_noise_profile_unit_mean():
    cfg = EnhancerConfig()
    prof = noise_profile(cfg)
    off = cfg.tree.offsets
    for k in range(24):
        assert prof[off[k]:off[k + 1]].mean() == pytest.approx(1.0, abs=1e-12)
    assert prof.min() > 0


def test_zero_in_zero_out(backend):
    assert not np.any(enhance(np.zeros(8000)))


def test_length_preserved_and_finite(backend, rng):
    for n in (min_length(), min_length() + 1, 9999):
        y = enhance(0.1 * rng.standard_normal(n))
        assert y.size == n and np.all(np.isfinite(y))


def test_too_short():
    assert min_length() == 6 * 256 + 512
    with pytest.raises(SignalTooShort):
        enhance(np.zeros(min_length() - 1))


def test_sample_rate_checked():
    with pytest.raises(BadSampleRate):
        enhance(AudioBuffer(np.zeros(8000), 16000))


def test_audio_buffer_in_audio_buffer_out():
    out = enhance(AudioBuffer(np.zeros(4000)))
    assert isinstance(out, AudioBuffer) and out.sample_rate_hz == 8000


def test_deterministic(speech):
    noisy = metrics.mix_at_snr(speech, synth.white_noise(speech.size, 2), 5.0)
    np.testing.assert_array_equal(enhance(noisy), enhance(noisy))


def test_energy_sanity(rng):
    for x in (rng.standard_normal(10_000), np.sign(rng.standard_normal(10_000))):
        assert np.sum(enhance(x) ** 2) <= 4.0 * np.sum(x ** 2)


def test_snrseg_improves_white_5db(speech):
    noisy = metrics.mix_at_snr(speech, synth.white_noise(speech.size, 1), 5.0)
    assert metrics.snrseg(speech, enhance(noisy)) > metrics.snrseg(speech, noisy)


def test_diagnostics_shapes(speech):
    res = enhance_detailed(speech)
    n = n_frames_for(speech.size)
    assert res.q_mean.shape == res.lambda1.shape == res.noise_power.shape == (n, 24)
    assert np.all((res.q_mean >= 0) & (res.q_mean <= 0.99 + 1e-12))


def test_without_noise_update_noise_power_is_constant(speech):
    cfg = EnhancerConfig(noise=NoiseConfig(update=False))
    res = enhance_detailed(metrics.mix_at_snr(speech, synth.white_noise(speech.size, 1), 5.0), cfg)
    assert np.all(res.noise_power == res.noise_power[0])
