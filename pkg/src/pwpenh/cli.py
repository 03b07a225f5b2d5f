"""Command-line front end.

    pwpenh enhance IN.wav OUT.wav [--config F]
    pwpenh evaluate CLEAN.wav NOISE.wav --snrs 15,10,5 --out DIR [--methods ...]
    pwpenh analyze IN.wav [--noise N.wav --snr S] --subbands 1,5,12 --out DIR
    pwpenh replay OUT.wav.manifest.json
    pwpenh --print-config [--config F]

Exit codes: 0 success, 2 usage, 3 I/O or format, 4 numeric or precondition.
"""

import argparse
import csv
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .audio import AudioBuffer, read_wav, write_wav
from .baselines import METHODS as BASELINE_METHODS
from .baselines import BaselineConfig, enhance_baseline
from .errors import ConfigError, PwpError
from .metrics import mix_at_snr, quality_report
from .pipeline import EnhancerConfig, analyze_signal, enhance_detailed
from .statistics import gaussian_fit, histogram, nmse, shared_histograms, symmetric_kl
from .teager import teager
from .wavelet import N_SUBBANDS

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_NUMERIC = 0, 2, 3, 4
ALL_METHODS = ("proposed",) + BASELINE_METHODS
MANIFEST_SUFFIX = ".manifest.json"


# config files ---------------------------------------------------------------

def parse_config_text(text):
    """Parse flat ``key = value`` lines; ``#`` starts a comment."""
    flat = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"config line {lineno}: empty key")
        flat[key] = value
    return config_from_flat(flat)


def config_from_flat(flat):
    try:
        return EnhancerConfig.from_flat(flat)
    except KeyError as exc:
        raise ConfigError(f"unknown config key {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid config value: {exc}") from None


def load_config(path):
    if path is None:
        return EnhancerConfig()
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config_text(text)


def format_config(config):
    return "".join(f"{k} = {_fmt(v)}\n" for k, v in config.to_flat().items())


def _fmt(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    return repr(value) if isinstance(value, float) else str(value)


# helpers ---------------------------------------------------------------------

def sha256_file(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _parse_list(text, kind, what):
    items = [s for s in (text or "").replace(";", ",").split(",") if s.strip()]
    if not items:
        raise ConfigError(f"{what}: empty list")
    try:
        return [kind(s.strip()) for s in items]
    except ValueError:
        raise ConfigError(f"{what}: cannot parse {text!r}") from None


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _write_manifest(path, manifest):
    Path(path).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _enhance_with(method, noisy, config):
    if method == "proposed":
        return enhance_detailed(noisy, config).signal
    return enhance_baseline(noisy, BaselineConfig(method=method, enhancer=config))


# commands --------------------------------------------------------------------

def cmd_enhance(args):
    config = load_config(args.config)
    audio = read_wav(args.input)
    result = enhance_detailed(audio, config)
    write_wav(args.output, AudioBuffer(result.signal, audio.sample_rate_hz))
    manifest = {
        "command": "enhance",
        "version": __version__,
        "inputs": {"noisy": {"path": str(args.input), "sha256": sha256_file(args.input)}},
        "config": config.to_flat(),
        "seed": None,
        "outputs": {"enhanced": {"path": str(args.output), "sha256": sha256_file(args.output)}},
        "metrics": {"mean_absence_prob": float(result.q_mean.mean()),
                    "mean_lambda1": float(result.lambda1.mean())},
    }
    _write_manifest(str(args.output) + MANIFEST_SUFFIX, manifest)
    return EXIT_OK


def cmd_replay(args):
    manifest = json.loads(Path(args.manifest).read_text(encoding="utf-8"))
    if manifest.get("command") != "enhance":
        raise ConfigError("only enhance manifests can be replayed")
    src = manifest["inputs"]["noisy"]
    if sha256_file(src["path"]) != src["sha256"]:
        print(f"input {src['path']} changed since the manifest was written", file=sys.stderr)
        return EXIT_NUMERIC
    config = config_from_flat(manifest["config"])
    target = args.output or manifest["outputs"]["enhanced"]["path"]
    audio = read_wav(src["path"])
    write_wav(target, AudioBuffer(enhance_detailed(audio, config).signal, audio.sample_rate_hz))
    expected = manifest["outputs"]["enhanced"]["sha256"]
    got = sha256_file(target)
    print(f"{target}: {'reproduced' if got == expected else 'MISMATCH'} ({got})")
    return EXIT_OK if got == expected else EXIT_NUMERIC


def cmd_evaluate(args):
    config = load_config(args.config)
    snrs = _parse_list(args.snrs, float, "--snrs")
    methods = _parse_list(args.methods, str, "--methods")
    for m in methods:
        if m not in ALL_METHODS:
            raise ConfigError(f"unknown method {m!r}; choose from {', '.join(ALL_METHODS)}")
    clean = read_wav(args.clean)
    noise = read_wav(args.noise)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    header = ["method", "snr_db", "snrseg_noisy", "snrseg_enhanced", "snrseg_improvement",
              "wss_noisy", "wss_enhanced"]
    rows = []
    for snr in snrs:
        noisy = mix_at_snr(clean, noise, snr)
        for method in methods:
            enhanced = _enhance_with(method, noisy, config)
            rep = quality_report(clean.samples, noisy, enhanced)
            rows.append([method, snr, rep.snrseg_noisy, rep.snrseg_enhanced,
                         rep.snrseg_improvement, rep.wss_noisy, rep.wss_enhanced])
    csv_path = out_dir / "evaluate.csv"
    _write_csv(csv_path, header, rows)
    _write_manifest(out_dir / ("evaluate" + MANIFEST_SUFFIX), {
        "command": "evaluate",
        "version": __version__,
        "inputs": {"clean": {"path": str(args.clean), "sha256": sha256_file(args.clean)},
                   "noise": {"path": str(args.noise), "sha256": sha256_file(args.noise)}},
        "config": config.to_flat(),
        "seed": None,
        "snrs_db": snrs,
        "methods": methods,
        "outputs": {"csv": {"path": str(csv_path), "sha256": sha256_file(csv_path)}},
        "metrics": [dict(zip(header, r)) for r in rows],
    })
    return EXIT_OK


def _te_by_subband(signal, config):
    coeffs = analyze_signal(signal, config)
    return [teager(coeffs[k]).ravel() for k in range(len(config.tree))]


def _probs_on(values, edges):
    # clip into the outer bins so every column is a full distribution
    clipped = np.clip(values, edges[0], edges[-1])
    counts, _ = np.histogram(clipped, bins=edges)
    return counts / max(values.size, 1)


def analyze_subbands(noisy, subbands, config, clean=None, noise=None):
    """Histogram/Gaussian-fit artifacts for the TE-operated subband coefficients.

    Returns ``{k: (rows, summary)}`` with 1-based subband indices. When no
    separate noise recording is supplied, the leading noise-estimation
    frames of ``noisy`` stand in for the noise pdf.
    """
    bins = config.hist_bins
    te_noisy = _te_by_subband(noisy, config)
    if noise is not None:
        te_noise = _te_by_subband(noise, config)
    else:
        coeffs = analyze_signal(noisy, config)
        lead = coeffs.packed[:config.noise.n_init]
        off = config.tree.offsets
        te_noise = [teager(lead[:, off[k]:off[k + 1]]).ravel() for k in range(len(config.tree))]
    te_clean = _te_by_subband(clean, config) if clean is not None else None
    lam1 = enhance_detailed(noisy, config).lambda1

    out = {}
    for k in subbands:
        i = k - 1
        vals = te_noisy[i]
        hist = histogram(vals, bins)
        params = gaussian_fit(vals)
        fitted = params.bin_probs(hist.edges)
        noise_p = _probs_on(te_noise[i], hist.edges)
        clean_p = _probs_on(te_clean[i], hist.edges) if te_clean is not None else None
        p_shared, q_shared = shared_histograms(vals, te_noise[i], bins)
        rows = []
        for b in range(hist.n_bins):
            rows.append([b, hist.edges[b], hist.edges[b + 1], hist.probs[b], fitted[b], noise_p[b],
                         "" if clean_p is None else clean_p[b]])
        summary = {
            "subband": k,
            "n_values": int(vals.size),
            "mean": params.mean,
            "std": params.std,
            "nmse": nmse(fitted, hist.probs),
            "skl_noisy_vs_noise": symmetric_kl(p_shared.probs, q_shared.probs),
            "lambda1_mean": float(lam1[:, i].mean()),
        }
        out[k] = (rows, summary)
    return out


def cmd_analyze(args):
    config = load_config(args.config)
    subbands = _parse_list(args.subbands, int, "--subbands")
    bad = [k for k in subbands if not 1 <= k <= N_SUBBANDS]
    if bad:
        raise ConfigError(f"--subbands: indices must lie in 1..{N_SUBBANDS}, got {bad}")
    audio = read_wav(args.input)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    if args.noise is None:
        if args.snr is not None:
            raise ConfigError("--snr needs --noise")
        runs = [(None, audio.samples, None, None)]
    else:
        if args.snr is None:
            raise ConfigError("--noise needs --snr")
        noise = read_wav(args.noise)
        runs = []
        for snr in _parse_list(args.snr, float, "--snr"):
            noisy = mix_at_snr(audio, noise, snr)
            runs.append((snr, noisy, audio.samples, noisy - audio.samples))

    header = ["bin", "edge_lo", "edge_hi", "prob", "fitted_prob", "noise_prob", "clean_prob"]
    summaries = []
    for snr, noisy, clean, noise_part in runs:
        tag = "" if snr is None else f"_snr{snr:+g}dB"
        for k, (rows, summary) in analyze_subbands(noisy, subbands, config, clean, noise_part).items():
            _write_csv(out_dir / f"subband{k:02d}{tag}.csv", header, rows)
            summaries.append({"snr_db": "" if snr is None else snr, **summary})
    keys = ["snr_db", "subband", "n_values", "mean", "std", "nmse", "skl_noisy_vs_noise", "lambda1_mean"]
    _write_csv(out_dir / "summary.csv", keys, [[s[k] for k in keys] for s in summaries])
    return EXIT_OK


# entry point -------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(prog="pwpenh", description=__doc__.splitlines()[0] or None,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--print-config", action="store_true",
                        help="print the effective configuration and exit")
    parser.add_argument("--config", help="flat key = value config file")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("enhance", help="enhance a noisy WAV")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--config", dest="config", default=argparse.SUPPRESS)
    p.set_defaults(func=cmd_enhance)

    p = sub.add_parser("evaluate", help="mix, enhance and score over a list of SNRs")
    p.add_argument("clean")
    p.add_argument("noise")
    p.add_argument("--snrs", required=True, help="comma-separated input SNRs in dB")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--methods", default="proposed",
                   help=f"comma-separated subset of {','.join(ALL_METHODS)}")
    p.add_argument("--config", dest="config", default=argparse.SUPPRESS)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("analyze", help="export TE-coefficient histograms and Gaussian fits")
    p.add_argument("input")
    p.add_argument("--noise")
    p.add_argument("--snr", help="input SNR in dB (a comma list gives one artifact set each)")
    p.add_argument("--subbands", required=True, help="comma-separated 1-based subband indices")
    p.add_argument("--out", required=True)
    p.add_argument("--config", dest="config", default=argparse.SUPPRESS)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("replay", help="re-run an enhance manifest and check the output hash")
    p.add_argument("manifest")
    p.add_argument("--output", help="write here instead of the recorded output path")
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        if args.print_config:
            sys.stdout.write(format_config(load_config(args.config)))
            return EXIT_OK
        if args.command is None:
            parser.print_usage(sys.stderr)
            return EXIT_USAGE
        return args.func(args)
    except PwpError as exc:
        print(f"pwpenh: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, json.JSONDecodeError) as exc:
        print(f"pwpenh: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, FloatingPointError) as exc:
        print(f"pwpenh: error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
