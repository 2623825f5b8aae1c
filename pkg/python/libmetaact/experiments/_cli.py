"""The ``metaact`` command line interface"""
import argparse
import logging
import pathlib
import sys
from typing import Optional

from libmetaact.complexity import LANDSCAPE_KINDS
from libmetaact.experiments._analyze import ANALYSES, cmd_analyze
from libmetaact.experiments._ExperimentConfig import (
    ExperimentConfig,
    read_experiment_config,
)
from libmetaact.experiments._methods import (
    cmd_gen_data,
    cmd_meta,
    cmd_prefactor_sweep,
    cmd_train,
)
from libmetaact.experiments._presets import PRESETS
from libmetaact.experiments._transfer import cmd_transfer_matrix
from libmetaact.metaglobal import ConfigError, DatasetError, DivergenceError

EXIT_CONFIG_ERROR = 2
EXIT_NUMERICAL_FAILURE = 3

COMMANDS = ("train", "meta", "transfer", "sweep", "analyze", "gen-data")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="metaact",
        description="Meta-learn activation functions and measure function complexity",
    )
    common = argparse.ArgumentParser(add_help=False)
    source = common.add_mutually_exclusive_group()
    source.add_argument("--config", type=pathlib.Path, help="Experiment config JSON")
    source.add_argument("--preset", choices=sorted(PRESETS), help="Named preset")
    common.add_argument("--seed", type=int, default=None, help="Run a single seed")
    common.add_argument("--out", type=str, default=None, help="Output directory")
    common.add_argument(
        "--workers", type=int, default=None, help="Worker processes for runs"
    )
    common.add_argument(
        "-v", "--verbose", action="store_true", help="Log per-step detail"
    )

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("train", parents=[common], help="Train networks")
    sub.add_parser("meta", parents=[common], help="Meta-learn activation functions")
    sub.add_parser(
        "transfer", parents=[common], help="Score activations across tasks"
    )
    sweep = sub.add_parser(
        "sweep", parents=[common], help="Tune the tanh(alpha * x) prefactor"
    )
    sweep.add_argument(
        "--alphas", type=float, nargs="+", default=None, help="Prefactor values"
    )
    analyze = sub.add_parser(
        "analyze", parents=[common], help="Export complexity analyses of a checkpoint"
    )
    analyze.add_argument("--checkpoint", type=pathlib.Path, required=True)
    analyze.add_argument("--what", choices=ANALYSES, required=True)
    analyze.add_argument("--kind", choices=LANDSCAPE_KINDS, default="loss")
    analyze.add_argument("--resolution", type=int, default=None)
    analyze.add_argument("--n-paths", type=int, default=200)
    sub.add_parser("gen-data", parents=[common], help="Write a task's dataset as CSV")
    return parser


def load_config(args: argparse.Namespace) -> ExperimentConfig:
    """The experiment config of parsed arguments, with overrides applied"""
    if args.config is not None:
        config = read_experiment_config(args.config)
    elif args.preset is not None:
        config = PRESETS[args.preset]()
    else:
        raise ConfigError("Error in metaact: give --config or --preset")
    return config.with_overrides(seed=args.seed, out=args.out, workers=args.workers)


def run(args: argparse.Namespace) -> None:
    config = load_config(args)
    if args.command == "train":
        cmd_train(config)
    elif args.command == "meta":
        cmd_meta(config)
    elif args.command == "transfer":
        cmd_transfer_matrix(config)
    elif args.command == "sweep":
        cmd_prefactor_sweep(config, args.alphas)
    elif args.command == "analyze":
        cmd_analyze(
            args.checkpoint,
            config.task,
            args.what,
            config.output_dir,
            seed=config.seeds[0],
            kind=args.kind,
            resolution=args.resolution,
            n_paths=args.n_paths,
        )
    elif args.command == "gen-data":
        cmd_gen_data(config.task, config.output_dir)


def main(argv: Optional[list[str]] = None) -> int:
    """Entry point of the ``metaact`` command

    Returns the exit code: 0 on success, 2 for invalid configurations or
    input files, 3 if training diverged.
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        run(args)
    except (ConfigError, DatasetError) as e:
        print(f"metaact: {e}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except DivergenceError as e:
        print(f"metaact: {e}", file=sys.stderr)
        return EXIT_NUMERICAL_FAILURE
    return 0
