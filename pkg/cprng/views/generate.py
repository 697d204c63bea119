"""
The ``gen`` command: stream generator output for external consumers.
"""
import argparse
import sys

from cprng.middlewares.logging_middleware import log_run
from cprng.models.sampler import MixingSampler, ThresholdSampler
from cprng.models.tent_map import GeneratorState
from cprng.schemas.presets import default_x0
from cprng.schemas.sampler import MixingSamplerConfig
from cprng.utils.encoding import OutputFormat, open_sink, write_block
from cprng.utils.exceptions import FlagError
from cprng.utils.logger import get_logger
from cprng.views import flags

logger = get_logger(__name__)


def register(subparsers) -> None:
    """Add the ``gen`` subcommand."""
    parser = subparsers.add_parser(
        "gen",
        help="write generated values",
        description="Write one raw component, or the sampled/mixed stream, after the transient.",
    )
    flags.add_generator_flags(parser)
    flags.add_iters_flags(parser, multiple=False)
    parser.add_argument("--component", type=int, default=None, help="raw component to write (default 0)")
    flags.add_sampler_flags(parser)
    parser.add_argument(
        "--format",
        choices=[f.value for f in OutputFormat],
        default=OutputFormat.RAW_F64.value,
        help="raw-f64 (default), fixed32 or csv",
    )
    flags.add_output_flag(parser)
    parser.set_defaults(handler=generate)


def generate(args: argparse.Namespace) -> int:
    """
    Run ``gen``. ``--iters`` counts post-transient iterates; with a sampler
    the output holds only the values selected among them.
    """
    coupling = flags.coupling_config(args)
    sampler_cfg = flags.sampler_config(args)
    p = coupling.p

    x0 = args.x0 if args.x0 is not None else default_x0(p)
    if x0 is None:
        raise FlagError(f"no default initial vector for p={p}; give --x0")

    if sampler_cfg is None:
        component = 0 if args.component is None else args.component
        if not 0 <= component < p:
            raise FlagError(f"--component {component} outside [0, {p})")
        sampler = None
    else:
        if args.component is not None:
            raise FlagError("--component selects a raw component; the sampler flags choose the output")
        if sampler_cfg.max_component >= p:
            raise FlagError(f"sampler uses component {sampler_cfg.max_component} but p={p}")
        if isinstance(sampler_cfg, MixingSamplerConfig):
            sampler = MixingSampler(sampler_cfg, sys.maxsize, keep=False)
        else:
            sampler = ThresholdSampler(sampler_cfg, sys.maxsize, keep=False)

    fmt = OutputFormat(args.format)
    total = 1000 if args.iters is None else args.iters
    generator = GeneratorState(coupling, x0, transient=args.transient)

    written = 0
    with log_run("gen", p=p, eps=coupling.eps_vector, x0=x0, iters=total, format=fmt.value):
        with open_sink(args.output) as sink:
            for block in generator.stream(total):
                values = block[:, component] if sampler is None else sampler.feed(block).values
                written += write_block(sink, values, fmt)
    logger.info(f"Wrote {written} values ({fmt.value})")
    return 0
