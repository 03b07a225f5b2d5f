"""Audio buffers and 16-bit PCM WAV I/O."""

import wave
from dataclasses import dataclass

import numpy as np

from .errors import AudioFormatError, BadSampleRate

SAMPLE_RATE = 8000
PCM_SCALE = 32768.0


@dataclass(frozen=True)
class AudioBuffer:
    samples: np.ndarray
    sample_rate_hz: int = SAMPLE_RATE

    def __post_init__(self):
        x = np.asarray(self.samples, dtype=np.float64)
        if x.ndim != 1:
            raise AudioFormatError(f"audio must be mono (1-D), got shape {x.shape}")
        if not np.all(np.isfinite(x)):
            raise AudioFormatError("audio contains non-finite samples")
        object.__setattr__(self, "samples", x)

    def __len__(self):
        return self.samples.size

    @property
    def duration(self):
        return self.samples.size / self.sample_rate_hz


def as_samples(audio, require_rate=SAMPLE_RATE):
    """Return a float64 sample array from an AudioBuffer or array-like."""
    if isinstance(audio, AudioBuffer):
        if require_rate is not None and audio.sample_rate_hz != require_rate:
            raise BadSampleRate(f"BadSampleRate: expected {require_rate} Hz, got {audio.sample_rate_hz} Hz")
        return audio.samples
    x = np.asarray(audio, dtype=np.float64)
    if x.ndim != 1:
        raise AudioFormatError(f"audio must be mono (1-D), got shape {x.shape}")
    return x


def read_wav(path, require_rate=SAMPLE_RATE):
    """Read a 16-bit PCM mono WAV into an AudioBuffer scaled to [-1, 1)."""
    try:
        with wave.open(str(path), "rb") as wf:
            n_channels = wf.getnchannels()
            width = wf.getsampwidth()
            rate = wf.getframerate()
            raw = wf.readframes(wf.getnframes())
    except wave.Error as exc:
        raise AudioFormatError(f"{path}: not a PCM WAV file ({exc})") from None
    except EOFError:
        raise AudioFormatError(f"{path}: truncated WAV file") from None
    if require_rate is not None and rate != require_rate:
        raise BadSampleRate(f"BadSampleRate: {path} is {rate} Hz, only {require_rate} Hz is accepted")
    if n_channels != 1:
        raise AudioFormatError(f"{path}: {n_channels} channels, only mono is accepted")
    if width != 2:
        raise AudioFormatError(f"{path}: {8 * width}-bit samples, only 16-bit PCM is accepted")
    pcm = np.frombuffer(raw, dtype="<i2")
    return AudioBuffer(pcm.astype(np.float64) / PCM_SCALE, rate)


def to_pcm16(samples):
    x = np.asarray(samples, dtype=np.float64)
    return np.clip(np.round(x * PCM_SCALE), -32768, 32767).astype("<i2")


def write_wav(path, audio, sample_rate=SAMPLE_RATE):
    if isinstance(audio, AudioBuffer):
        sample_rate = audio.sample_rate_hz
        audio = audio.samples
    pcm = to_pcm16(audio)
    with wave.open(str(path), "wb") as wf:
        wf.setnchannels(1)
        wf.setsampwidth(2)
        wf.setframerate(int(sample_rate))
        wf.writeframes(pcm.tobytes())
