"""
Command-line entry point.

    fedloc <subcommand> --config experiment.yaml [--set key=value ...]
           [--output-dir DIR] [-v]

Exit codes: 0 success, 1 pipeline failure, 2 usage error (bad flags,
unreadable or invalid configuration, missing dataset file).
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

import pandas as pd

from ..config.config_manager import ExperimentConfigManager
from ..config.config_models import CliConfig, ExperimentConfig
from ..config.settings import FedLocSettings, get_settings
from ..data.pipeline import prepare_area_dataset
from ..data.store import save_area_dataset, write_label_map_report
from ..exceptions import EvaluationError, FedLocError, category_for, exit_code_for
from ..experiment.histograms import emit_posterior_histograms
from ..experiment.results import write_results
from ..experiment.runner import partition_run, run_monte_carlo, run_seeds, train_run
from ..experiment.sweep import sweep
from ..models.checkpoint import checkpoint_digest, save_checkpoint
from ..partition.manifest import client_histogram_frame, distributions_frame, export_manifest
from ..utils.file_utils import calculate_file_digest, ensure_directory, write_frame
from ..utils.logging_utils import setup_logging, verbosity_to_level


logger = logging.getLogger(__name__)

SUBCOMMANDS = ("prepare-data", "partition", "train", "evaluate", "sweep", "histograms")

Command = Callable[[ExperimentConfig, Path, FedLocSettings], None]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fedloc",
        description="Federated indoor-localization experiments on WiFi RSS fingerprints",
    )
    subparsers = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        sub = subparsers.add_parser(name)
        sub.add_argument("--config", required=True, help="Experiment YAML file")
        sub.add_argument(
            "--set",
            dest="overrides",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="Override a config value (dotted key, YAML value); repeatable",
        )
        sub.add_argument("--output-dir", help="Output directory (default: FEDLOC_OUTPUT_DIR)")
        sub.add_argument(
            "-v", "--verbose", action="count", default=0, help="More logging; repeatable"
        )
    return parser


def parse_cli(argv: Optional[List[str]] = None) -> CliConfig:
    args = build_parser().parse_args(argv)
    return CliConfig(
        subcommand=args.subcommand,
        config_path=args.config,
        overrides=args.overrides,
        output_dir=args.output_dir,
        verbosity=args.verbose,
    )


def _print_digests(paths: Dict[str, Path]) -> None:
    for name, path in paths.items():
        print(f"{name} sha256 {calculate_file_digest(path)}")


def monte_carlo_workers(config: ExperimentConfig, settings: FedLocSettings) -> int:
    """The config key wins over FEDLOC_WORKERS."""
    return config.workers if config.workers is not None else settings.workers


def _prepare(config: ExperimentConfig):
    return prepare_area_dataset(config.dataset, config.n_labels)


def cmd_prepare_data(config: ExperimentConfig, output_dir: Path, settings: FedLocSettings) -> None:
    prepared = _prepare(config)
    path = save_area_dataset(output_dir / "processed_dataset.npz", prepared.dataset)
    print(f"processed dataset: {path} ({prepared.dataset.size} samples)")
    if prepared.clustering is not None:
        for report in write_label_map_report(prepared.clustering, output_dir):
            print(f"label map: {report}")


def cmd_partition(config: ExperimentConfig, output_dir: Path, settings: FedLocSettings) -> None:
    dataset = _prepare(config).dataset
    split = partition_run(config, dataset, run_seeds(config.master_seed, 1)[0])
    export_manifest(split.client_data, output_dir / "manifest.csv")
    write_frame(client_histogram_frame(split.client_data), output_dir / "client_histograms.csv")
    write_frame(
        distributions_frame(split.distributions, split.spec.client_groups()),
        output_dir / "client_distributions.csv",
    )
    print(f"partitioned {sum(c.size for c in split.client_data)} samples over {len(split.client_data)} clients")


def cmd_train(config: ExperimentConfig, output_dir: Path, settings: FedLocSettings) -> None:
    dataset = _prepare(config).dataset
    artifacts = train_run(config, dataset, 0, run_seeds(config.master_seed, 1)[0])

    checkpoint_dir = ensure_directory(output_dir / "checkpoints")
    rows = []
    for family, models in artifacts.models.items():
        for i, params in enumerate(models):
            path = save_checkpoint(
                checkpoint_dir / f"{family}_{i}.npz", params, seed=config.master_seed, tag=f"{family}_{i}"
            )
            digest = checkpoint_digest(params)
            rows.append({"model": family, "index": i, "path": path.name, "digest": digest})
            print(f"{family}[{i}] {digest}")
    write_frame(pd.DataFrame(rows, columns=["model", "index", "path", "digest"]), output_dir / "digests.csv")

    if config.output.round_logs:
        for family, history in artifacts.histories.items():
            history.write_csv(output_dir / f"round_log_{family}.csv")


def cmd_evaluate(config: ExperimentConfig, output_dir: Path, settings: FedLocSettings) -> None:
    result = run_monte_carlo(config, workers=monte_carlo_workers(config, settings))
    paths = write_results(
        output_dir,
        [s.value for s in config.strategies],
        "none",
        [(None, outcome) for outcome in result.outcomes],
        result.records,
    )
    for record in result.records:
        print(f"{record.strategy:9s} mean {record.mean:.4f} std {record.std:.4f} ({record.n_runs} runs)")
    _print_digests(paths)
    if result.n_failed == len(result.outcomes):
        raise EvaluationError(f"All {result.n_failed} Monte-Carlo runs failed")


def cmd_sweep(config: ExperimentConfig, output_dir: Path, settings: FedLocSettings) -> None:
    result = sweep(config, workers=monte_carlo_workers(config, settings))
    rates = result.rates if result.axis in ("sigma", "lambda") else None
    paths = write_results(
        output_dir,
        [s.value for s in config.strategies],
        result.axis,
        result.outcomes,
        result.records,
        rates,
    )
    for record in result.records:
        print(
            f"{record.strategy:9s} {result.axis}={record.sweep_value:g} mean {record.mean:.4f} "
            f"std {record.std:.4f}"
        )
    _print_digests(paths)


def cmd_histograms(config: ExperimentConfig, output_dir: Path, settings: FedLocSettings) -> None:
    dataset = _prepare(config).dataset
    artifacts = train_run(config, dataset, 0, run_seeds(config.master_seed, 1)[0], families=["FEDAMP"])
    histograms = emit_posterior_histograms(
        artifacts.models["FEDAMP"],
        artifacts.test,
        config.output.histogram_label,
        artifacts.prior,
        config.output.histogram_bins,
        config.fusion.floor,
    )
    write_frame(histograms.values, output_dir / "posterior_values.csv")
    write_frame(histograms.histogram, output_dir / "posterior_histogram.csv")
    print(f"posterior histograms for label {config.output.histogram_label} written to {output_dir}")


COMMANDS: Dict[str, Command] = {
    "prepare-data": cmd_prepare_data,
    "partition": cmd_partition,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "sweep": cmd_sweep,
    "histograms": cmd_histograms,
}


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run one subcommand.

    Args:
        argv: Arguments without the program name (defaults to sys.argv[1:])

    Returns:
        Process exit code
    """
    try:
        cli = parse_cli(argv)
    except SystemExit as e:
        # argparse already printed its usage message
        return e.code if isinstance(e.code, int) else 2

    settings = get_settings()
    setup_logging(
        "fedloc",
        settings.log_file,
        verbosity_to_level(settings.log_level, cli.verbosity),
        settings.log_dir,
    )

    try:
        manager = ExperimentConfigManager(cli.config_path, cli.overrides)
        config = manager.get_config()
        output_dir = ensure_directory(Path(cli.output_dir or settings.output_dir))
        manager.write_snapshot(output_dir)
        COMMANDS[cli.subcommand](config, output_dir, settings)
    except FedLocError as e:
        logger.error(f"{cli.subcommand} failed: {e}")
        print(f"error [{category_for(e)}]: {e}", file=sys.stderr)
        return exit_code_for(e)
    except Exception as e:
        logger.exception(f"{cli.subcommand} failed unexpectedly")
        print(f"error [{category_for(e)}]: {type(e).__name__}: {e}", file=sys.stderr)
        return exit_code_for(e)
    return 0


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
