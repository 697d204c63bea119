"""
Shared command-line flags and their translation into configuration objects.

Every subcommand registers only the flag groups it understands, so a flag
given to the wrong subcommand is an argparse usage error. Combinations that
argparse cannot see (e.g. --threshold with --thresholds) raise FlagError.
"""
import argparse
import math
from typing import List, Optional, Union

from cprng.schemas.coupling import CouplingConfig, RatioRule
from cprng.schemas.experiment import SeedScanConfig
from cprng.schemas.presets import SEED_SCAN_BASE, SEED_SCAN_MULTIPLIERS, SEED_SCAN_STRIDE_3, SEED_SCAN_STRIDE_4
from cprng.schemas.sampler import MixingSamplerConfig, ThresholdSamplerConfig
from cprng.utils.exceptions import FlagError


def count(text: str) -> int:
    """Non-negative integer; scientific notation like 1e7 is accepted."""
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"expected a finite count, got {text!r}")
    if value < 0 or value != int(value):
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}")
    return int(value)


def floats(text: str) -> List[float]:
    """Comma-separated doubles."""
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def counts(text: str) -> List[int]:
    """Comma-separated non-negative integers."""
    return [count(v) for v in text.split(",") if v.strip()]


def pair(text: str) -> List[int]:
    values = counts(text)
    if len(values) != 2:
        raise argparse.ArgumentTypeError(f"a pair is two comma-separated indices, got {text!r}")
    return values


def triple(kind):
    def parse(text: str):
        values = floats(text) if kind is float else counts(text)
        if len(values) != 3:
            raise argparse.ArgumentTypeError(f"expected three comma-separated values, got {text!r}")
        return tuple(kind(v) for v in values)

    return parse


def add_generator_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("generator")
    group.add_argument("--p", type=int, default=4, help="number of coupled maps (default 4)")
    group.add_argument("--eps1", type=float, default=None, help="first coupling constant; eps_i = i * eps1")
    group.add_argument("--eps-list", type=floats, default=None, help="explicit coupling constants eps_1..eps_p")
    group.add_argument("--a", type=float, default=2.0, help="tent map slope (default 2)")
    group.add_argument("--x0", type=floats, default=None, help="initial vector, comma-separated")
    group.add_argument("--transient", type=count, default=None, help="discarded steps (default from settings)")


def add_disc_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("analysis").add_mutually_exclusive_group()
    group.add_argument("--disc", type=count, default=None, help="number of boxes per axis")
    group.add_argument("--disc-list", type=counts, default=None, help="several box counts, comma-separated")


def add_iters_flags(parser: argparse.ArgumentParser, multiple: bool = True) -> None:
    group = parser.add_argument_group("run")
    if not multiple:
        group.add_argument("--iters", type=count, default=None, help="number of post-transient iterates")
        return
    exclusive = group.add_mutually_exclusive_group()
    exclusive.add_argument("--iters", type=count, default=None, help="number of post-transient iterates")
    exclusive.add_argument("--iters-list", type=counts, default=None, help="increasing checkpoints, comma-separated")


def add_sampler_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("sampler")
    group.add_argument("--threshold", type=float, default=None, help="threshold T of chaotic sampling")
    group.add_argument("--thresholds", type=triple(float), default=None, help="mixing thresholds T1,T2,T3")
    group.add_argument("--source", type=int, default=None, help="sampled component (threshold rule)")
    group.add_argument("--sources", type=triple(int), default=None, help="mixed components l1,l2,l3")
    group.add_argument("--control", type=int, default=None, help="control component")


def add_output_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--output", default=None, help="write to PATH instead of standard output")


def add_grid_output_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--grid-output",
        default=None,
        help="also write the per-box estimates of the last checkpoint (and their deviation from uniform) to PATH",
    )


def coupling_config(args: argparse.Namespace) -> CouplingConfig:
    """Coupling from --p, --a and either --eps1 or --eps-list."""
    if args.eps_list is not None:
        if args.eps1 is not None:
            raise FlagError("--eps1 and --eps-list are mutually exclusive")
        return CouplingConfig(p=args.p, a=args.a, ratio_rule=RatioRule.EXPLICIT, eps=args.eps_list)
    if args.eps1 is None:
        return CouplingConfig(p=args.p, a=args.a)
    return CouplingConfig(p=args.p, a=args.a, eps1=args.eps1)


def disc_list(args: argparse.Namespace) -> Optional[List[int]]:
    if args.disc is not None:
        return [args.disc]
    return args.disc_list


def iters_list(args: argparse.Namespace) -> Optional[List[int]]:
    if args.iters is not None:
        return [args.iters]
    return getattr(args, "iters_list", None)


def sampler_config(args: argparse.Namespace) -> Optional[Union[ThresholdSamplerConfig, MixingSamplerConfig]]:
    """
    Sampler from the sampler flags, or None for the raw stream.

    Raises:
        FlagError: If the flags mix the threshold and the mixing rule, or
            name components without choosing a rule
    """
    control = {} if args.control is None else {"control": args.control}
    if args.thresholds is not None:
        if args.threshold is not None or args.source is not None:
            raise FlagError("--thresholds (mixing) cannot be combined with --threshold or --source")
        sources = {} if args.sources is None else {"sources": args.sources}
        return MixingSamplerConfig(thresholds=args.thresholds, **sources, **control)
    if args.sources is not None:
        raise FlagError("--sources needs --thresholds")
    if args.threshold is not None:
        source = {} if args.source is None else {"source": args.source}
        return ThresholdSamplerConfig(threshold=args.threshold, **source, **control)
    if args.source is not None or args.control is not None:
        raise FlagError("--source/--control need --threshold or --thresholds")
    return None


def add_seed_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("seed scan")
    group.add_argument("--seed-base", type=floats, default=None, help="base vector of the scan")
    group.add_argument("--seed-stride", type=float, default=None, help="stride (default 1e-7, 1e-6 for p=3)")
    group.add_argument("--seed-mults", type=floats, default=None, help="per-component multipliers")
    group.add_argument("--seed-count", type=count, default=1000, help="number of seeds (default 1000)")
    group.add_argument("--workers", type=int, default=None, help="worker processes (default from settings)")
    group.add_argument("--bins", type=int, default=20, help="bins of the E1 histogram")


def seed_scan_config(args: argparse.Namespace) -> SeedScanConfig:
    """Seed family; unspecified parts follow the reference scans, cut to p components."""
    if args.seed_count < 1:
        raise FlagError("--seed-count must be >= 1")
    stride = args.seed_stride
    if stride is None:
        stride = SEED_SCAN_STRIDE_3 if args.p == 3 else SEED_SCAN_STRIDE_4
    base = args.seed_base if args.seed_base is not None else list(SEED_SCAN_BASE[: args.p])
    mults = args.seed_mults if args.seed_mults is not None else list(SEED_SCAN_MULTIPLIERS[: args.p])
    return SeedScanConfig(base=base, multipliers=mults, stride=stride, count=args.seed_count)
