"""Command-line front end: configure a run, dispatch an engine, persist results.

One subcommand per mechanism in the library:

``evolve``
    Entropy series of an evolved operator on a finite chain.
``tl-evolve``
    The same directly in the thermodynamic limit (critical field only).
``saturation``
    Long-time entropy and mode spectrum of a finite-index operator.
``toeplitz``
    Spectral route: truncated block-Toeplitz kernel, entropy, eigenvalue census.
``fit``
    Logarithmic-growth fit of a stored series.
``oracle-check``
    Brute-force exact-diagonalization cross-check on a short chain.

Outputs are deterministic: identical configuration produces byte-identical
files (floats are written in shortest round-trip form, JSON keys are sorted,
and no timestamps are embedded).  Every output embeds its resolved
configuration.  ``--plot`` renders a PNG figure next to the output file.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .entropy import (
    EntropySeries,
    SpectralDomainError,
    entropy_series,
    series_from_csv,
    series_from_json_dict,
    series_to_csv,
    series_to_json_dict,
)
from .ed import MAX_ED_SITES, evolved_entropy_ed, verify_generator
from .finite import FiniteEngine
from .growth import fit_log_growth
from .lattice import ChainConfig, OperatorSpecError, format_operator_spec, parse_operator_spec
from .saturation import saturation_entropy, saturation_spectrum
from .tl import TLEngine, TruncationPolicy
from .toeplitz import build_psi, eigen_census, spectral_entropy_psi

__all__ = ["main", "build_parser"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4

#: Finite chains beyond this many sites exceed the intended resource budget.
MAX_SITES = 2000

#: oracle-check passes when the engines agree this closely ...
ORACLE_ENTROPY_TOLERANCE = 1e-8
#: ... and commutator expansion reproduces the generator this closely.
ORACLE_GENERATOR_TOLERANCE = 1e-10


@dataclass
class Report:
    """What a subcommand produces: payload text, a summary line, maybe a figure."""

    text: str
    summary: str
    plot: Callable[[Path], None] | None = None
    status: int = EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="osee",
        description="Operator-space entanglement entropy of evolved operators "
        "in the transverse-field Ising chain.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_io(p: argparse.ArgumentParser, default_format: str, plot: bool = True) -> None:
        p.add_argument("--output", default="-", metavar="PATH",
                       help="output file, '-' for stdout (default)")
        p.add_argument("--format", choices=("csv", "json"), default=default_format,
                       help=f"output format (default {default_format})")
        if plot:
            p.add_argument("--plot", action="store_true",
                           help="also render a PNG next to the output file")
        p.add_argument("--threads", type=int, default=None, metavar="N",
                       help="cap BLAS threads (needs threadpoolctl)")

    def add_grid(p: argparse.ArgumentParser) -> None:
        p.add_argument("--tmax", type=float, default=60.0, help="latest sample time")
        p.add_argument("--dt", type=float, default=0.5, help="sample spacing")

    evolve = sub.add_parser("evolve", help="entropy series on a finite chain")
    evolve.add_argument("--op", required=True, help="operator spec, e.g. X1 or F or pauli:z@1")
    evolve.add_argument("--h", type=float, default=1.0, help="transverse field")
    evolve.add_argument("--length", type=int, default=200,
                        help="number of sites 2L (even, default 200)")
    add_grid(evolve)
    add_io(evolve, "csv")

    tl = sub.add_parser("tl-evolve", help="entropy series in the thermodynamic limit (h=1)")
    tl.add_argument("--op", required=True, help="operator spec")
    tl.add_argument("--h", type=float, default=1.0, help="must be 1 in this mode")
    tl.add_argument("--pad", type=int, default=0,
                    help="extra truncation padding beyond the light cone")
    add_grid(tl)
    add_io(tl, "csv")

    sat = sub.add_parser("saturation", help="long-time spectrum of a finite-index operator")
    sat.add_argument("--op", required=True, help="finite-index operator spec, e.g. X1,Y1")
    sat.add_argument("--t", type=float, default=math.inf,
                     help="evaluation time (default: infinite-time limit)")
    add_io(sat, "json", plot=False)

    toe = sub.add_parser("toeplitz", help="block-Toeplitz spectral route at one time")
    toe.add_argument("--t", type=float, required=True, help="time")
    toe.add_argument("--blocks", type=int, default=None,
                     help="truncation size in 2x2 blocks (default: light cone + pad)")
    toe.add_argument("--pad", type=int, default=0,
                     help="extra truncation padding beyond the light cone")
    toe.add_argument("--epsilon", type=float, default=0.01,
                     help="census radius around -1, 0, +1")
    add_io(toe, "json")

    fit = sub.add_parser("fit", help="fit S = c ln t + c' to a stored series")
    fit.add_argument("--input", required=True, metavar="PATH",
                     help="series file produced by evolve/tl-evolve (csv or json)")
    fit.add_argument("--window", type=float, nargs=2, default=(5.0, 60.0),
                     metavar=("LO", "HI"), help="time window for the fit")
    add_io(fit, "json")

    oracle = sub.add_parser("oracle-check",
                            help="cross-check the engine against exact diagonalization")
    oracle.add_argument("--op", required=True, help="operator spec")
    oracle.add_argument("--h", type=float, default=1.0, help="transverse field")
    oracle.add_argument("--length", type=int, default=6,
                        help=f"number of sites (even, at most {MAX_ED_SITES})")
    oracle.add_argument("--times", default="0.3,1.0,2.7",
                        help="comma-separated sample times")
    add_io(oracle, "json", plot=False)

    return parser


# ---------------------------------------------------------------------------
# Shared helpers
# ---------------------------------------------------------------------------

def _chain_config(length: int, h: float) -> ChainConfig:
    if length < 2 or length % 2:
        raise ValueError(f"--length must be an even number of sites >= 2, got {length}")
    if length > MAX_SITES:
        raise ValueError(f"--length {length} exceeds the resource budget ({MAX_SITES} sites)")
    return ChainConfig(length // 2, h)


def _time_grid(tmax: float, dt: float) -> np.ndarray:
    if dt <= 0.0:
        raise ValueError(f"--dt must be positive, got {dt}")
    if tmax < dt:
        raise ValueError(f"--tmax must be at least --dt, got {tmax} < {dt}")
    steps = int(math.floor(tmax / dt + 1e-9))
    return np.arange(steps + 1) * dt


def _policy(extra_pad: int) -> TruncationPolicy:
    if extra_pad < 0:
        raise ValueError(f"--pad must be nonnegative, got {extra_pad}")
    base = TruncationPolicy()
    return TruncationPolicy(base.pad_scale, base.pad_offset + extra_pad)


def _apply_thread_limit(threads: int | None) -> None:
    if threads is None:
        return
    if threads < 1:
        raise ValueError(f"--threads must be at least 1, got {threads}")
    try:
        import threadpoolctl
    except ImportError:
        print("note: threadpoolctl not installed; --threads ignored", file=sys.stderr)
        return
    threadpoolctl.threadpool_limits(limits=threads)


def _render_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _render_table(config: dict, rows: list[tuple[str, object]]) -> str:
    lines = [f"# config: {json.dumps(config, sort_keys=True)}", "quantity,value"]
    for key, value in rows:
        text = repr(float(value)) if isinstance(value, float) else str(value)
        lines.append(f"{key},{text}")
    return "\n".join(lines) + "\n"


def _series_report(series: EntropySeries, args, extra: dict) -> Report:
    provenance = {**series.provenance, "subcommand": args.subcommand, **extra}
    series = EntropySeries(series.times, series.entropies, provenance)
    text = series_to_csv(series) if args.format == "csv" else _render_json(
        series_to_json_dict(series)
    )
    last = series.entropies[-1]
    summary = (f"{args.subcommand}: op={provenance['operator']} "
               f"samples={len(series.times)} S({series.times[-1]:g})={last:.6f}")

    def plot(target: Path) -> None:
        from .plotting import plot_series

        plot_series(series, target)

    return Report(text, summary, plot)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _run_evolve(args) -> Report:
    config = _chain_config(args.length, args.h)
    spec = parse_operator_spec(args.op, config)
    times = _time_grid(args.tmax, args.dt)
    series = entropy_series(spec, FiniteEngine(config), times)
    return _series_report(series, args, {"tmax": args.tmax, "dt": args.dt})


def _run_tl_evolve(args) -> Report:
    if args.h != 1.0:
        raise ValueError(f"tl-evolve is defined at the critical field h=1 only, got h={args.h}")
    spec = parse_operator_spec(args.op)
    times = _time_grid(args.tmax, args.dt)
    series = entropy_series(spec, TLEngine(_policy(args.pad)), times)
    return _series_report(series, args, {"tmax": args.tmax, "dt": args.dt})


def _run_saturation(args) -> Report:
    spec = parse_operator_spec(args.op)
    if not math.isfinite(spec.index):
        raise ValueError("saturation is defined for finite-index operators only")
    if args.t <= 0.0:
        raise ValueError(f"--t must be positive, got {args.t}")
    labels = spec.flips
    spectrum = saturation_spectrum(labels, args.t)
    entropy = saturation_entropy(labels, args.t)
    config = {
        "subcommand": "saturation",
        "operator": format_operator_spec(spec),
        "t": "inf" if math.isinf(args.t) else args.t,
    }
    if args.format == "json":
        text = _render_json({
            "config": config,
            "entropy": entropy,
            "spectrum": [float(g) for g in spectrum],
        })
    else:
        rows: list[tuple[str, object]] = [("entropy", float(entropy))]
        rows += [(f"gamma_{k}", float(g)) for k, g in enumerate(spectrum)]
        text = _render_table(config, rows)
    summary = f"saturation: op={config['operator']} modes={spectrum.size} S={entropy:.6f}"
    return Report(text, summary)


def _run_toeplitz(args) -> Report:
    psi = build_psi(args.t, args.blocks, _policy(args.pad))
    entropy = spectral_entropy_psi(psi)
    census = eigen_census(psi, args.epsilon)
    config = {
        "subcommand": "toeplitz",
        "t": args.t,
        "blocks": psi.block_count,
        "epsilon": args.epsilon,
    }
    census_fields = {
        "near_minus": census.near_minus,
        "near_zero": census.near_zero,
        "near_plus": census.near_plus,
        "outside": census.outside,
        "n_epsilon": census.n_epsilon,
    }
    if args.format == "json":
        text = _render_json({
            "config": config,
            "dimension": psi.dimension,
            "entropy": entropy,
            "census": census_fields,
        })
    else:
        rows = [("dimension", psi.dimension), ("entropy", float(entropy))]
        rows += sorted(census_fields.items())
        text = _render_table(config, rows)
    summary = (f"toeplitz: t={args.t:g} dim={psi.dimension} S={entropy:.6f} "
               f"n_epsilon={census.n_epsilon}")

    def plot(target: Path) -> None:
        from .plotting import plot_spectrum

        plot_spectrum(psi, target, census)

    return Report(text, summary, plot)


def _run_fit(args) -> Report:
    raw = Path(args.input).read_text()
    if raw.lstrip().startswith("{"):
        series = series_from_json_dict(json.loads(raw))
    else:
        series = series_from_csv(raw)
    fit = fit_log_growth(series.times, series.entropies, tuple(args.window))
    config = {
        "subcommand": "fit",
        "input_config": series.provenance,
        "window": [fit.window[0], fit.window[1]],
    }
    if args.format == "json":
        text = _render_json({"config": config, **fit.describe()})
    else:
        text = _render_table(config, [
            ("slope", fit.slope),
            ("intercept", fit.intercept),
            ("rms_residual", fit.rms_residual),
            ("sample_count", fit.sample_count),
        ])
    summary = (f"fit: slope={fit.slope:.6f} intercept={fit.intercept:.6f} "
               f"rms={fit.rms_residual:.2e} samples={fit.sample_count}")

    def plot(target: Path) -> None:
        from .plotting import plot_series

        plot_series(series, target, fit=fit)

    return Report(text, summary, plot)


def _run_oracle_check(args) -> Report:
    config = _chain_config(args.length, args.h)
    if config.num_sites > MAX_ED_SITES:
        raise ValueError(f"--length must be at most {MAX_ED_SITES} for exact diagonalization")
    try:
        times = sorted(float(part) for part in args.times.split(","))
    except ValueError as exc:
        raise ValueError(f"--times must be comma-separated numbers: {exc}") from None
    if not times or times[0] < 0.0:
        raise ValueError("--times must be nonnegative")
    spec = parse_operator_spec(args.op, config)
    engine_values = FiniteEngine(config).entropies(spec, np.asarray(times))
    ed_values = np.array([evolved_entropy_ed(config, spec, t) for t in times])
    deviation = float(np.abs(engine_values - ed_values).max())
    residual = verify_generator(config)
    ok = deviation <= ORACLE_ENTROPY_TOLERANCE and residual <= ORACLE_GENERATOR_TOLERANCE
    echo = {
        "subcommand": "oracle-check",
        "operator": format_operator_spec(spec),
        "h": args.h,
        "length": config.num_sites,
        "times": times,
    }
    if args.format == "json":
        text = _render_json({
            "config": echo,
            "engine_entropies": [float(v) for v in engine_values],
            "ed_entropies": [float(v) for v in ed_values],
            "max_deviation": deviation,
            "generator_residual": residual,
            "ok": ok,
        })
    else:
        lines = [f"# config: {json.dumps(echo, sort_keys=True)}", "t,S_engine,S_ed"]
        for t, se, sd in zip(times, engine_values, ed_values):
            lines.append(f"{float(t)!r},{float(se)!r},{float(sd)!r}")
        lines.append(f"# max_deviation: {deviation!r}")
        lines.append(f"# generator_residual: {residual!r}")
        text = "\n".join(lines) + "\n"
    summary = (f"oracle-check: max|dS|={deviation:.3e} "
               f"generator_residual={residual:.3e} ok={ok}")
    return Report(text, summary, status=EXIT_OK if ok else EXIT_NUMERICAL)


_RUNNERS = {
    "evolve": _run_evolve,
    "tl-evolve": _run_tl_evolve,
    "saturation": _run_saturation,
    "toeplitz": _run_toeplitz,
    "fit": _run_fit,
    "oracle-check": _run_oracle_check,
}


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def _fail(code: int, message: str) -> int:
    print(f"osee: {message}", file=sys.stderr)
    return code


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG

    wants_plot = bool(getattr(args, "plot", False))
    if wants_plot and args.output == "-":
        return _fail(EXIT_CONFIG, "--plot requires --output to be a file")

    try:
        _apply_thread_limit(args.threads)
        report = _RUNNERS[args.subcommand](args)
    except OperatorSpecError as exc:
        return _fail(EXIT_CONFIG, f"bad operator spec: {exc}")
    except ValueError as exc:  # includes TruncationError
        return _fail(EXIT_CONFIG, f"bad configuration: {exc}")
    except (SpectralDomainError, ArithmeticError, np.linalg.LinAlgError) as exc:
        return _fail(EXIT_NUMERICAL, f"numerical failure: {exc}")
    except OSError as exc:
        return _fail(EXIT_IO, f"cannot read input: {exc}")

    try:
        if args.output == "-":
            sys.stdout.write(report.text)
            print(report.summary, file=sys.stderr)
        else:
            target = Path(args.output)
            target.write_text(report.text)
            artifacts = [str(target)]
            if wants_plot and report.plot is not None:
                image = target.with_suffix(".png")
                report.plot(image)
                artifacts.append(str(image))
            print(f"{report.summary} -> {' '.join(artifacts)}")
    except OSError as exc:
        return _fail(EXIT_IO, f"cannot write output: {exc}")
    return report.status


if __name__ == "__main__":
    sys.exit(main())
