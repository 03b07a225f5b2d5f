"""Time the numba and numpy kernel backends against each other.

Run with ``python benchmarks/bench_kernels.py``. Each backend is warmed up
once before timing so numba compilation is not counted.
"""

import argparse
import time

import numpy as np

from pwpenh import synth
from pwpenh._accel import HAVE_NUMBA, set_backend
from pwpenh.pipeline import enhance
from pwpenh.wavelet import FRAME_LEN, pwp_analyze, pwp_synthesize


def _best_of(fn, repeats):
    fn()  # warm-up (JIT compile, caches)
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def _transform_round_trips(frames):
    for frame in frames:
        pwp_synthesize(pwp_analyze(frame))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--frames", type=int, default=1000)
    ap.add_argument("--seconds", type=float, default=3.0)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args(argv)

    frames = np.random.default_rng(0).standard_normal((args.frames, FRAME_LEN))
    clean = synth.speech_like(args.seconds, seed=0)
    noisy = clean + 0.05 * synth.white_noise(clean.size, 1)

    backends = ["numpy"] + (["numba"] if HAVE_NUMBA else [])
    results = {}
    for name in backends:
        previous = set_backend(name)
        try:
            results[name] = (
                _best_of(lambda: _transform_round_trips(frames), args.repeats),
                _best_of(lambda: enhance(noisy), args.repeats),
            )
        finally:
            set_backend(previous)

    print(f"{'backend':<8} {'analysis+synthesis':>20} {'enhance':>12}")
    for name, (t_tr, t_en) in results.items():
        print(f"{name:<8} {t_tr:>19.3f}s {t_en:>11.3f}s")
    if len(results) == 2:
        (a, b), (c, d) = results["numpy"], results["numba"]
        print(f"speed-up numba/numpy: transform x{a / c:.2f}, enhance x{b / d:.2f}")


if __name__ == "__main__":
    main()
