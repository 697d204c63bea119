"""
Experiment commands: each builds an ExperimentSpec from its flags, runs the
matching controller and writes the result table as CSV.
"""
import argparse
import sys
from typing import Any, Dict, List, Optional, Tuple

import pandas as pd

from cprng.controllers.autocorrelation_controller import autocorrelation_sweep_controller
from cprng.controllers.base_controller import BaseController
from cprng.controllers.bench_controller import bench_controller
from cprng.controllers.correlation_controller import correlation_controller
from cprng.controllers.cycle_controller import cycle_check_controller
from cprng.controllers.density_controller import density_sweep_controller
from cprng.controllers.seed_scan_controller import seed_scan_controller
from cprng.models.histogram import Estimate, grid_table
from cprng.schemas.experiment import ExperimentKind, ExperimentResult, ExperimentSpec
from cprng.schemas.sampler import MixingSamplerConfig
from cprng.utils.exceptions import FlagError, OutputError
from cprng.utils.logger import get_logger
from cprng.views import flags

logger = get_logger(__name__)

CONTROLLERS: Dict[ExperimentKind, BaseController] = {
    ExperimentKind.DENSITY_SWEEP: density_sweep_controller,
    ExperimentKind.CORRELATION: correlation_controller,
    ExperimentKind.AUTOCORRELATION_SWEEP: autocorrelation_sweep_controller,
    ExperimentKind.SEED_SCAN: seed_scan_controller,
    ExperimentKind.CYCLE_CHECK: cycle_check_controller,
    ExperimentKind.BENCH: bench_controller,
}


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    """Run an experiment spec with the controller registered for its kind."""
    return CONTROLLERS[spec.kind].run(spec)


def register(subparsers) -> None:
    """Add the experiment subcommands."""
    density = subparsers.add_parser("density", help="uniformity of component densities (E1, E2^2)")
    flags.add_generator_flags(density)
    flags.add_disc_flags(density)
    flags.add_iters_flags(density)
    density.add_argument("--component", type=int, action="append", default=None, help="component, repeatable")
    flags.add_output_flag(density)
    flags.add_grid_output_flag(density)
    density.set_defaults(handler=command, kind=ExperimentKind.DENSITY_SWEEP)

    corr = subparsers.add_parser("corr", help="correlation between components (E_C1, E_C2^2)")
    flags.add_generator_flags(corr)
    flags.add_disc_flags(corr)
    flags.add_iters_flags(corr)
    corr.add_argument("--pair", type=flags.pair, action="append", default=None, help="k,l; repeatable; all pairs by default")
    flags.add_output_flag(corr)
    flags.add_grid_output_flag(corr)
    corr.set_defaults(handler=command, kind=ExperimentKind.CORRELATION)

    autocorr = subparsers.add_parser("autocorr", help="autocorrelation of the sampled or raw stream (E_AC1)")
    flags.add_generator_flags(autocorr)
    flags.add_disc_flags(autocorr)
    flags.add_iters_flags(autocorr)
    flags.add_sampler_flags(autocorr)
    autocorr.add_argument("--component", type=int, default=None, help="raw component when no sampler is given")
    autocorr.add_argument("--lag", type=int, default=1, help="pair distance in the stream (default 1)")
    flags.add_output_flag(autocorr)
    flags.add_grid_output_flag(autocorr)
    autocorr.set_defaults(handler=command, kind=ExperimentKind.AUTOCORRELATION_SWEEP)

    seedscan = subparsers.add_parser("seedscan", help="E1 over a family of initial vectors")
    flags.add_generator_flags(seedscan)
    flags.add_disc_flags(seedscan)
    flags.add_iters_flags(seedscan, multiple=False)
    seedscan.add_argument("--component", type=int, default=None, help="analysed component (default 0)")
    flags.add_seed_flags(seedscan)
    flags.add_output_flag(seedscan)
    seedscan.set_defaults(handler=command, kind=ExperimentKind.SEED_SCAN)

    cycle = subparsers.add_parser("cycle", help="Brent cycle search from the initial vector")
    flags.add_generator_flags(cycle)
    cycle.add_argument("--budget", type=flags.count, default=None, help="step budget (default from settings)")
    flags.add_output_flag(cycle)
    cycle.set_defaults(handler=command, kind=ExperimentKind.CYCLE_CHECK)

    bench = subparsers.add_parser("bench", help="throughput of the recurrence")
    flags.add_generator_flags(bench)
    bench.add_argument("--bench-steps", type=flags.count, default=None, help="timed steps (default from settings)")
    flags.add_output_flag(bench)
    bench.set_defaults(handler=command, kind=ExperimentKind.BENCH)


def build_spec(args: argparse.Namespace) -> ExperimentSpec:
    """Translate the parsed flags of one subcommand into an ExperimentSpec."""
    kind: ExperimentKind = args.kind
    fields: Dict[str, Any] = {"kind": kind, "coupling": flags.coupling_config(args)}
    _put(fields, "x0", args.x0)
    _put(fields, "transient", args.transient)

    if hasattr(args, "disc"):
        _put(fields, "disc_list", flags.disc_list(args))
    if hasattr(args, "iters"):
        _put(fields, "iters_list", flags.iters_list(args))
    if getattr(args, "grid_output", None):
        fields["keep_grids"] = True

    if kind is ExperimentKind.DENSITY_SWEEP:
        _put(fields, "components", args.component)
    elif kind is ExperimentKind.CORRELATION:
        _put(fields, "pairs", [tuple(p) for p in args.pair] if args.pair else None)
    elif kind is ExperimentKind.AUTOCORRELATION_SWEEP:
        sampler = flags.sampler_config(args)
        if sampler is not None and args.component is not None:
            raise FlagError("--component selects the raw baseline; drop it when sampling")
        if isinstance(sampler, MixingSamplerConfig):
            fields["mixing_sampler"] = sampler
        elif sampler is not None:
            fields["threshold_sampler"] = sampler
        _put(fields, "components", None if args.component is None else [args.component])
        fields["lag"] = args.lag
    elif kind is ExperimentKind.SEED_SCAN:
        fields["seed_scan"] = flags.seed_scan_config(args)
        _put(fields, "components", None if args.component is None else [args.component])
        _put(fields, "workers", args.workers)
        fields["histogram_bins"] = args.bins
    elif kind is ExperimentKind.CYCLE_CHECK:
        _put(fields, "cycle_budget", args.budget)
    elif kind is ExperimentKind.BENCH:
        _put(fields, "bench_steps", args.bench_steps)

    return ExperimentSpec(**fields)


def command(args: argparse.Namespace) -> int:
    """Handler shared by all experiment subcommands."""
    spec = build_spec(args)
    logger.info(f"Config: {spec.echo()}")
    result = run_experiment(spec)
    write_result(result, args.output)
    if getattr(args, "grid_output", None):
        write_grids(result, args.grid_output)
    logger.info(f"Wall time: {result.metadata['wall_time_s']:.3f}s")
    return 0


def write_result(result: ExperimentResult, output: Optional[str]) -> None:
    """
    Write the table to ``output`` (or standard output) and any side tables
    next to it: ``<output>.summary.csv`` and ``<output>.histogram.csv``.

    Raises:
        OutputError: If a file cannot be written
    """
    extras = {k: v for k, v in result.metadata.items() if k not in ("config", "e1_histogram", "grids")}
    if extras:
        logger.info(f"Result metadata: {extras}")

    if output is None:
        result.to_csv(sys.stdout)
        if result.summary is not None:
            for row in result.summary.rows:
                logger.info(f"Summary: {dict(zip(result.summary.columns, row))}")
        return

    try:
        result.to_csv(output)
        if result.summary is not None:
            result.summary.to_csv(f"{output}.summary.csv")
        histogram = result.metadata.get("e1_histogram")
        if histogram:
            histogram_frame(histogram).to_csv(f"{output}.histogram.csv", index=False, float_format="%.8g")
    except OSError as e:
        raise OutputError(f"cannot write {output}: {e}") from e
    logger.info(f"Results written to {output}")


def write_grids(result: ExperimentResult, path: str) -> None:
    """
    Write the kept per-box estimates as one long CSV table.

    Raises:
        OutputError: If the file cannot be written
    """
    try:
        grid_frame(result.metadata.get("grids", [])).to_csv(path, index=False, float_format="%.8g")
    except OSError as e:
        raise OutputError(f"cannot write {path}: {e}") from e
    logger.info(f"Grids written to {path}")


def grid_frame(grids: List[Tuple[Dict[str, Any], Estimate]]) -> pd.DataFrame:
    """Long table: the labels of each grid (n_iter, n_disc, ...) followed by i[, j], value, deviation."""
    frames = []
    for labels, est in grids:
        frame = pd.DataFrame(grid_table(est))
        for position, (key, value) in enumerate(labels.items()):
            frame.insert(position, key, value)
        frames.append(frame)
    if not frames:
        return pd.DataFrame()
    return pd.concat(frames, ignore_index=True)


def histogram_frame(histogram: Dict[str, Dict[str, list]]) -> pd.DataFrame:
    """Long table (n_disc, bin_low, bin_high, count) of the per-M E1 histograms."""
    records = []
    for m, hist in histogram.items():
        edges, counts = hist["edges"], hist["counts"]
        for low, high, c in zip(edges[:-1], edges[1:], counts):
            records.append({"n_disc": int(m), "bin_low": low, "bin_high": high, "count": c})
    return pd.DataFrame.from_records(records, columns=["n_disc", "bin_low", "bin_high", "count"])


def _put(fields: Dict[str, Any], key: str, value: Any) -> None:
    if value is not None:
        fields[key] = value
