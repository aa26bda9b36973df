"""Command-line front end: simulate fixtures, decompose, diagnose, compare.

Every output file starts with a manifest header recording the command,
config snapshot, input digest, tool version, and seed, so any artifact can
be reproduced byte-for-byte from its own header.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import os
import sys
import tempfile
from dataclasses import dataclass

import numpy as np

from . import __version__
from .emd import SiftConfig
from .ensemble import METHODS, EnsembleConfig, decompose
from .pipeline import (
    VERDICT_INCONCLUSIVE,
    Component,
    diagnose,
    diagnose_kurtosis_baseline,
    separation_scores,
)
from .signals import Signal, rms
from .simulate import (
    DefectSimParams,
    default_severity_law,
    gen_combined,
    gen_defect_signal,
    gen_degradation_run,
    gen_impulses,
    gen_tone,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3
EXIT_INTERNAL = 4

FIXTURES = (
    "tone",
    "impulses",
    "combined",
    "combined-noisy",
    "defect",
    "degradation-run",
)


class ParseError(ValueError):
    """Input file could not be parsed; the message names the line."""


class UnknownFixture(ValueError):
    """Requested simulation fixture does not exist."""


class GroundTruthUnavailable(ValueError):
    """Separation scoring was requested for data without known components."""


class InternalCheckFailed(RuntimeError):
    """A module invariant was violated at runtime."""


@dataclass(frozen=True)
class RunManifest:
    """Reproducibility header serialized into every output artifact."""

    command: str
    config: dict
    input_digest: str
    tool_version: str
    seed: int | None


def _manifest(args: argparse.Namespace, config: dict, input_digest: str) -> RunManifest:
    return RunManifest(
        command=args.command,
        config=config,
        input_digest=input_digest,
        tool_version=__version__,
        seed=getattr(args, "seed", None),
    )


def _manifest_line(manifest: RunManifest) -> str:
    payload = json.dumps(dataclasses.asdict(manifest), sort_keys=True)
    return f"# manifest: {payload}"


def _fmt(value: float) -> str:
    # repr is the shortest round-trip form, so identical values give
    # identical bytes.
    return repr(float(value))


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_csv(
    path: str,
    manifest: RunManifest,
    header: list[str],
    columns: list[np.ndarray],
) -> None:
    lines = [_manifest_line(manifest), ",".join(header)]
    rows = len(columns[0]) if columns else 0
    for r in range(rows):
        lines.append(",".join(_fmt(col[r]) for col in columns))
    _atomic_write(path, "\n".join(lines) + "\n")


def _write_json(path: str, manifest: RunManifest, payload: dict) -> None:
    document = {"manifest": dataclasses.asdict(manifest), **payload}
    _atomic_write(path, json.dumps(document, sort_keys=True, indent=1) + "\n")


def _digest_file(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _digest_params(params: dict) -> str:
    return hashlib.sha256(
        json.dumps(params, sort_keys=True).encode()
    ).hexdigest()


def read_signal_csv(path: str, sample_rate_hz: float | None = None) -> Signal:
    """Load a vibration record from CSV.

    Accepts ``#`` comment lines, an optional header row, and either a
    single ``value`` column (sample rate must be supplied) or
    ``time,value`` columns with uniform spacing.
    """
    rows: list[list[float]] = []
    width: int | None = None
    saw_header = False
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = [p.strip() for p in line.split(",")]
            try:
                values = [float(p) for p in parts]
            except ValueError:
                if not rows and not saw_header:
                    saw_header = True  # header row such as time,value
                    continue
                raise ParseError(f"{path}:{lineno}: cannot parse row {line!r}")
            if width is None:
                width = len(values)
                if width not in (1, 2):
                    raise ParseError(
                        f"{path}:{lineno}: expected 1 or 2 columns, got {width}"
                    )
            elif len(values) != width:
                raise ParseError(
                    f"{path}:{lineno}: expected {width} columns, got {len(values)}"
                )
            rows.append(values)
    if not rows:
        raise ParseError(f"{path}: no data rows")
    data = np.asarray(rows, dtype=np.float64)
    if width == 1:
        if sample_rate_hz is None:
            raise ParseError(
                f"{path}: single-column input requires --sample-rate"
            )
        return Signal(data[:, 0], sample_rate_hz)
    times, values = data[:, 0], data[:, 1]
    dt = np.diff(times)
    if dt.size == 0 or np.any(dt <= 0):
        raise ParseError(f"{path}: time column must be strictly increasing")
    spread = float(dt.max() - dt.min())
    median_dt = float(np.median(dt))
    if spread > 1e-6 * median_dt:
        raise ParseError(f"{path}: nonuniform sample spacing ({spread:.3e} s jitter)")
    return Signal(values, 1.0 / median_dt)


def _write_signal_csv(path: str, manifest: RunManifest, s: Signal) -> None:
    t = s.times()
    _write_csv(path, manifest, ["time", "value"], [t, s.samples])


def _ensemble_config(args: argparse.Namespace) -> EnsembleConfig:
    sift = SiftConfig(max_imfs=args.max_imfs)
    return EnsembleConfig(
        method=args.method,
        ensemble_size=args.ensemble,
        noise_scale=args.noise_scale,
        hurst=args.hurst,
        master_seed=args.seed if args.seed is not None else 0,
        sift=sift,
    )


def _config_snapshot(cfg: EnsembleConfig, extra: dict | None = None) -> dict:
    snapshot = {
        "method": cfg.method,
        "ensemble_size": cfg.ensemble_size,
        "noise_scale": cfg.noise_scale,
        "hurst": cfg.hurst,
        "master_seed": cfg.master_seed,
        "sift": dataclasses.asdict(cfg.sift),
    }
    if extra:
        snapshot.update(extra)
    return snapshot


def _require_seed(args: argparse.Namespace, why: str) -> None:
    if args.seed is None:
        raise ParseError(f"--seed is required {why} (no wall-clock default)")


def cmd_simulate(args: argparse.Namespace) -> int:
    if args.fixture not in FIXTURES:
        raise UnknownFixture(f"unknown fixture {args.fixture!r}")
    out = args.out
    if args.fixture == "tone":
        params = {"fixture": "tone"}
        manifest = _manifest(args, params, _digest_params(params))
        _write_signal_csv(os.path.join(out, "tone.csv"), manifest, gen_tone())
    elif args.fixture == "impulses":
        params = {"fixture": "impulses"}
        manifest = _manifest(args, params, _digest_params(params))
        _write_signal_csv(os.path.join(out, "impulses.csv"), manifest, gen_impulses())
    elif args.fixture == "combined":
        params = {"fixture": "combined", "snr_db": args.snr_db}
        if args.snr_db is not None:
            _require_seed(args, "when adding noise")
        manifest = _manifest(args, params, _digest_params(params))
        s = gen_combined(args.snr_db, args.seed)
        _write_signal_csv(os.path.join(out, "combined.csv"), manifest, s)
    elif args.fixture == "combined-noisy":
        _require_seed(args, "for the noisy fixture")
        snr = args.snr_db if args.snr_db is not None else -30.0
        params = {"fixture": "combined-noisy", "snr_db": snr}
        manifest = _manifest(args, params, _digest_params(params))
        s = gen_combined(snr, args.seed)
        _write_signal_csv(os.path.join(out, "combined_noisy.csv"), manifest, s)
    elif args.fixture == "defect":
        _require_seed(args, "for the defect fixture")
        p = _defect_params(args)
        params = {"fixture": "defect", "severity": args.severity,
                  "params": dataclasses.asdict(p)}
        manifest = _manifest(args, params, _digest_params(params))
        s = gen_defect_signal(p, args.severity)
        _write_signal_csv(os.path.join(out, "defect.csv"), manifest, s)
    else:  # degradation-run
        _require_seed(args, "for the degradation run")
        p = _defect_params(args)
        params = {"fixture": "degradation-run", "specimens": args.specimens,
                  "params": dataclasses.asdict(p)}
        manifest = _manifest(args, params, _digest_params(params))
        run = gen_degradation_run(p, args.specimens)
        minutes = np.arange(1, args.specimens + 1, dtype=np.float64)
        severities = np.array(
            [default_severity_law(m) for m in range(1, args.specimens + 1)]
        )
        rms_values = np.array([rms(s) for s in run.specimens])
        names = []
        for m, s in enumerate(run.specimens, start=1):
            name = f"specimen_{m:04d}.csv"
            _write_signal_csv(os.path.join(out, name), manifest, s)
            names.append(name)
        index_lines = [_manifest_line(manifest), "minute,filename,severity"]
        for m, name in enumerate(names, start=1):
            index_lines.append(f"{m},{name},{_fmt(severities[m - 1])}")
        _atomic_write(os.path.join(out, "index.csv"), "\n".join(index_lines) + "\n")
        _write_csv(
            os.path.join(out, "rms_trend.csv"), manifest,
            ["minute", "rms"], [minutes, rms_values],
        )
    return EXIT_OK


def _defect_params(args: argparse.Namespace) -> DefectSimParams:
    return DefectSimParams(
        f_m=args.fm,
        T_prime=args.t_prime,
        f_n=args.fn,
        B=args.decay,
        amplitude_scale=args.amplitude,
        jitter_frac=args.jitter_frac,
        noise_sigma=args.noise_sigma,
        sample_rate_hz=args.sample_rate if args.sample_rate else 10000.0,
        duration_s=args.duration,
        seed=args.seed if args.seed is not None else 0,
    )


def cmd_decompose(args: argparse.Namespace) -> int:
    if args.method != "emd":
        _require_seed(args, "for ensemble methods")
    signal = read_signal_csv(args.input, args.sample_rate)
    cfg = _ensemble_config(args)
    imf_set = decompose(signal, cfg)
    manifest = _manifest(
        args, _config_snapshot(cfg), _digest_file(args.input)
    )
    header = [f"imf_{i}" for i in range(1, imf_set.n_imfs + 1)] + ["residue"]
    columns = list(imf_set.imfs) + [imf_set.residue]
    _write_csv(os.path.join(args.out, "imfs.csv"), manifest, header, columns)
    if args.verify:
        reference = float(np.max(np.abs(signal.samples)))
        error = float(np.max(np.abs(signal.samples - imf_set.reconstruct())))
        relative = error / reference if reference > 0 else error
        print(f"max reconstruction error: {relative:.3e} relative")
        bounds = {"emd": 1e-9, "ceemdan": 1e-6}
        bound = bounds.get(cfg.method)
        if bound is not None and relative > bound:
            raise InternalCheckFailed(
                f"{cfg.method} reconstruction error {relative:.3e} exceeds {bound:.0e}"
            )
    return EXIT_OK


def cmd_diagnose(args: argparse.Namespace) -> int:
    if args.method != "emd":
        _require_seed(args, "for ensemble methods")
    signal = read_signal_csv(args.input, args.sample_rate)
    cfg = _ensemble_config(args)
    extra = {
        "select": args.select,
        "mi_threshold": args.mi_threshold,
        "k": args.k,
        "target_hz": args.target_hz,
    }
    manifest = _manifest(
        args, _config_snapshot(cfg, extra), _digest_file(args.input)
    )
    if args.select == "kurtosis":
        report = diagnose_kurtosis_baseline(signal, cfg, target_hz=args.target_hz)
    else:
        report = diagnose(
            signal, cfg,
            mi_threshold=args.mi_threshold,
            target_hz=args.target_hz,
            k=args.k,
        )
    all_indices = sorted(report.selected_indices + report.rejected_indices)
    if all_indices != list(range(1, len(all_indices) + 1)):
        raise InternalCheckFailed("selected/rejected indices do not partition IMFs")
    payload = {
        "report": {
            "method": report.method,
            "method_variant": report.method_variant,
            "mi_scores": [dataclasses.asdict(s) for s in report.mi_scores],
            "selected_indices": list(report.selected_indices),
            "rejected_indices": list(report.rejected_indices),
            "combined_signal_digest": report.combined_signal_digest,
            "defect_frequency_hz": report.defect_frequency_hz,
            "detection": (
                None
                if report.detection is None
                else {
                    "found": report.detection.found,
                    "peak_ratio": report.detection.peak_ratio,
                    "matched_bins": list(report.detection.matched_bins),
                }
            ),
            "verdict": report.verdict,
            "spectrum_resolution_hz": report.spectrum.resolution_hz,
        }
    }
    _write_json(os.path.join(args.out, "report.json"), manifest, payload)
    _write_csv(
        os.path.join(args.out, "spectrum.csv"), manifest,
        ["frequency_hz", "amplitude"],
        [report.spectrum.frequencies_hz, report.spectrum.amplitudes],
    )
    score_lines = [_manifest_line(manifest), "imf_index,mi_nats,k,degenerate,selected"]
    for s in report.mi_scores:
        chosen = int(s.imf_index in report.selected_indices)
        score_lines.append(
            f"{s.imf_index},{_fmt(s.value_nats)},{s.k},{int(s.degenerate)},{chosen}"
        )
    _atomic_write(
        os.path.join(args.out, "mi_scores.csv"), "\n".join(score_lines) + "\n"
    )
    if report.verdict == VERDICT_INCONCLUSIVE:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _parse_grid(spec: str) -> list[float]:
    lo, hi, step = (float(p) for p in spec.split(":"))
    values = []
    v = lo
    while v <= hi + 1e-12:
        values.append(round(v, 12))
        v += step
    return values


def _ground_truth_components(n: int) -> list[Component]:
    tone = gen_tone().samples[:n]
    impulses = gen_impulses().samples[:n]
    return [
        Component("tone", tone),
        Component("impulses", impulses, impulsive=True),
    ]


def _fixture_signal(args: argparse.Namespace) -> Signal:
    if args.fixture == "combined":
        return gen_combined()
    if args.fixture == "combined-noisy":
        _require_seed(args, "for the noisy fixture")
        snr = args.snr_db if args.snr_db is not None else -30.0
        return gen_combined(snr, args.seed)
    raise GroundTruthUnavailable(
        "comparison needs a generated fixture with known components"
    )


def cmd_compare(args: argparse.Namespace) -> int:
    if args.input is not None:
        raise GroundTruthUnavailable(
            "separation scoring is unavailable for external data; use --fixture"
        )
    if args.fixture is None:
        raise ParseError("compare requires --fixture")
    signal = _fixture_signal(args)
    components = _ground_truth_components(len(signal))
    seed = args.seed if args.seed is not None else 0

    rows: list[dict] = []

    def run_one(method: str, hurst: float, ensemble: int) -> dict:
        sift = SiftConfig(max_imfs=args.max_imfs)
        cfg = EnsembleConfig(
            method=method, ensemble_size=ensemble, noise_scale=args.noise_scale,
            hurst=hurst, master_seed=seed, sift=sift,
        )
        imf_set = decompose(signal, cfg)
        scores = {
            s.component_name: s for s in separation_scores(imf_set, components)
        }
        return {
            "method": method,
            "hurst": hurst,
            "ensemble": ensemble,
            "n_imfs": imf_set.n_imfs,
            "tone_corr": scores["tone"].correlation,
            "tone_leakage": scores["tone"].leakage,
            "impulse_env_corr": scores["impulses"].correlation,
            "impulse_leakage": scores["impulses"].leakage,
        }

    if args.hurst_grid:
        method = args.methods[0] if args.methods else "npceemd"
        for h in _parse_grid(args.hurst_grid):
            rows.append(run_one(method, h, args.ensemble))
    elif args.ensemble_grid:
        method = args.methods[0] if args.methods else args.method
        for ne in (int(p) for p in args.ensemble_grid.split(",")):
            rows.append(run_one(method, args.hurst, ne))
    else:
        methods = args.methods if args.methods else [args.method]
        for method in methods:
            rows.append(run_one(method, args.hurst, args.ensemble))

    params = {
        "fixture": args.fixture,
        "methods": args.methods,
        "hurst_grid": args.hurst_grid,
        "ensemble_grid": args.ensemble_grid,
        "snr_db": args.snr_db,
    }
    manifest = _manifest(args, params, _digest_params(params))
    header = list(rows[0].keys())
    lines = [_manifest_line(manifest), ",".join(header)]
    for row in rows:
        lines.append(
            ",".join(
                _fmt(row[c]) if isinstance(row[c], float) else str(row[c])
                for c in header
            )
        )
    _atomic_write(os.path.join(args.out, "compare.csv"), "\n".join(lines) + "\n")

    widths = {
        c: max(len(c), max(len(_cell(row[c])) for row in rows)) for c in header
    }
    text_lines = [_manifest_line(manifest)]
    text_lines.append("  ".join(c.ljust(widths[c]) for c in header))
    for row in rows:
        text_lines.append("  ".join(_cell(row[c]).ljust(widths[c]) for c in header))
    _atomic_write(os.path.join(args.out, "compare.txt"), "\n".join(text_lines) + "\n")
    return EXIT_OK


def _cell(value: object) -> str:
    if isinstance(value, float):
        return f"{value:.4f}"
    return str(value)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="npceemd",
        description="Ensemble decomposition and envelope-spectrum diagnosis",
    )
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--seed", type=int, default=None, help="64-bit RNG seed")
    shared.add_argument("--sample-rate", type=float, default=None,
                        help="sample rate in Hz for single-column CSV input")
    shared.add_argument("--method", choices=METHODS, default="npceemd")
    shared.add_argument("--ensemble", type=int, default=10,
                        help="ensemble size Ne (pairs for ceemd/npceemd)")
    shared.add_argument("--hurst", type=float, default=0.1)
    shared.add_argument("--noise-scale", type=float, default=0.2)
    shared.add_argument("--mi-threshold", type=float, default=0.1)
    shared.add_argument("--k", type=int, default=3, help="MI neighbour count")
    shared.add_argument("--select", choices=("mi", "kurtosis"), default="mi")
    shared.add_argument("--target-hz", type=float, default=None)
    shared.add_argument("--max-imfs", type=int, default=None)
    shared.add_argument("--out", default=".", help="output directory")

    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", parents=[shared],
                           help="write a benchmark fixture as CSV")
    p_sim.add_argument("fixture", choices=FIXTURES)
    p_sim.add_argument("--snr-db", type=float, default=None)
    p_sim.add_argument("--severity", type=float, default=1.0)
    p_sim.add_argument("--specimens", type=int, default=500)
    p_sim.add_argument("--duration", type=float, default=0.5)
    p_sim.add_argument("--fm", type=float, default=25.0)
    p_sim.add_argument("--t-prime", type=float, default=0.015)
    p_sim.add_argument("--fn", type=float, default=2000.0)
    p_sim.add_argument("--decay", type=float, default=900.0)
    p_sim.add_argument("--amplitude", type=float, default=5.0)
    p_sim.add_argument("--jitter-frac", type=float, default=0.02)
    p_sim.add_argument("--noise-sigma", type=float, default=8.0)

    p_dec = sub.add_parser("decompose", parents=[shared],
                           help="decompose a CSV record into IMFs")
    p_dec.add_argument("input")
    p_dec.add_argument("--verify", action="store_true",
                       help="report the reconstruction error and enforce "
                            "the per-method bound")

    p_dia = sub.add_parser("diagnose", parents=[shared],
                           help="run the full selection + envelope pipeline")
    p_dia.add_argument("input")

    p_cmp = sub.add_parser("compare", parents=[shared],
                           help="separation-score table across methods or grids")
    p_cmp.add_argument("--input", default=None)
    p_cmp.add_argument("--fixture", choices=("combined", "combined-noisy"),
                       default=None)
    p_cmp.add_argument("--methods", type=lambda s: s.split(","), default=None)
    p_cmp.add_argument("--hurst-grid", default=None,
                       help="lo:hi:step sweep of the Hurst exponent")
    p_cmp.add_argument("--ensemble-grid", default=None,
                       help="comma-separated ensemble sizes")
    p_cmp.add_argument("--snr-db", type=float, default=None)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    handlers = {
        "simulate": cmd_simulate,
        "decompose": cmd_decompose,
        "diagnose": cmd_diagnose,
        "compare": cmd_compare,
    }
    try:
        return handlers[args.command](args)
    except (ParseError, UnknownFixture, GroundTruthUnavailable) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: no such file: {exc.filename}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InternalCheckFailed as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
