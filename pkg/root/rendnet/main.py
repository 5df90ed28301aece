"""
Command-line entry point: synthetic data, training, evaluation, ablation sweeps and inspection.

Exit codes: 0 on success, 1 on usage errors, 2 on data or model errors.
"""

import argparse
import json
import sys
import logging
from pathlib import Path
from typing import List, Optional

# Configure Python path for absolute imports from root
package_dir = Path(__file__).parent
root_dir = package_dir.parent
if str(root_dir) not in sys.path:
    sys.path.insert(0, str(root_dir))

from pydantic import ValidationError

from rendnet.config import get_settings
from rendnet.exceptions import RendNetError
from rendnet.models.config import HypergraphConfig, ModelConfig, PipelineConfig, RasterConfig, SynthSpec, TrainConfig
from rendnet.models.registry import VARIANTS, normalize_mode, resolve_modes
from rendnet.parsers import load_document
from rendnet.services.ablation_service import run_ablation
from rendnet.services.dataset_service import DatasetService
from rendnet.services.evaluator import evaluate
from rendnet.services.inspector import inspect_document
from rendnet.services.synth_service import generate_dataset
from rendnet.services.trainer import train
from rendnet.utils.serialization import write_json

logger = logging.getLogger("rendnet")

EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors raised instead of exiting with status 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _mode(value: str) -> str:
    try:
        return normalize_mode(value)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _add_training_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--data", type=Path, default=None, help="Dataset root containing manifest.json")
    parser.add_argument("--epochs", type=int, default=60)
    parser.add_argument("--batch", type=int, default=32, help="Documents per minibatch (at least 2)")
    parser.add_argument("--lr", type=float, default=1e-3)
    parser.add_argument("--seed", type=int, default=1, help="Shuffling seed")
    parser.add_argument("--init-seed", type=int, default=0, help="Parameter initialization seed")
    parser.add_argument("--hidden", type=int, default=32)
    parser.add_argument("--blocks", type=int, default=3)
    parser.add_argument("--knn-k", type=int, default=16)
    parser.add_argument("--spacing", type=float, default=None, help="Curve fragment spacing")
    parser.add_argument("--density", type=float, default=None, help="Surface fragments per unit area")
    parser.add_argument("--no-normalize", action="store_true", help="Keep raw document coordinates")
    parser.add_argument("--train-split", default="train")
    parser.add_argument("--test-split", default="test")
    parser.add_argument("--workers", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rendnet", description="Two-stream vector-graphics recognizer")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    synth = commands.add_parser("synth", help="Generate the synthetic symbol dataset")
    synth.add_argument("--out", type=Path, required=True)
    synth.add_argument("--train", type=int, default=1600)
    synth.add_argument("--test", type=int, default=400)
    synth.add_argument("--seed", type=int, default=None)
    synth.add_argument("--dim3", action="store_true", help="Also emit planar-in-3D splits")
    synth.add_argument("--workers", type=int, default=None)

    train_cmd = commands.add_parser("train", help="Train one model variant")
    _add_training_args(train_cmd)
    train_cmd.add_argument("--out", type=Path, default=Path("ckpt.rnd"), help="Best checkpoint path")
    train_cmd.add_argument("--log", type=Path, default=None, help="Metrics CSV path")
    train_cmd.add_argument("--mode", type=_mode, default="full", help=f"One of: {', '.join(VARIANTS)}")

    eval_cmd = commands.add_parser("eval", help="Evaluate a checkpoint on one split")
    eval_cmd.add_argument("--ckpt", type=Path, default=None, help="Checkpoint path; defaults to RENDNET_CHECKPOINT")
    eval_cmd.add_argument("--data", type=Path, default=None)
    eval_cmd.add_argument("--split", default="test")
    eval_cmd.add_argument("--json", type=Path, default=None, help="Also write the metrics as JSON")
    eval_cmd.add_argument("--workers", type=int, default=None)

    ablate = commands.add_parser("ablate", help="Train and compare model variants")
    _add_training_args(ablate)
    ablate.add_argument("--modes", default="all", help="Comma-separated variants or 'all'")
    ablate.add_argument("--out-dir", type=Path, default=Path("ablation"))

    modes = commands.add_parser("modes", help="List the variants a --modes value expands to, in report order")
    modes.add_argument("spec", nargs="?", default="all", help="Comma-separated variants or 'all'")

    inspect = commands.add_parser("inspect", help="Export hypergraph, fragments and feature colors")
    inspect.add_argument("--doc", type=Path, required=True)
    inspect.add_argument("--ckpt", type=Path, default=None)
    inspect.add_argument("--out-prefix", required=True)
    return parser


def _data_dir(args) -> Path:
    return args.data if args.data is not None else Path(get_settings().data.data_dir)


def _train_config(args, mode: str, out_path: Path, log_path: Optional[Path]) -> TrainConfig:
    """Model shape follows the dataset: class count from the manifest, dimension from the train split."""
    data_dir = _data_dir(args)
    manifest = DatasetService(data_dir).manifest
    if args.train_split not in manifest.dims:
        raise RendNetError(f"split '{args.train_split}' not in dataset (have {sorted(manifest.dims)})")
    raster = RasterConfig()
    updates = {k: v for k, v in (("spacing", args.spacing), ("density", args.density)) if v is not None}
    if updates:
        raster = RasterConfig(**{**raster.model_dump(), **updates})
    model = ModelConfig(
        hidden=args.hidden,
        blocks=args.blocks,
        knn_k=args.knn_k,
        num_classes=len(manifest.classes),
        dim=manifest.dims[args.train_split],
        mode=mode,
        seed=args.init_seed,
    )
    return TrainConfig(
        pipeline=PipelineConfig(
            hypergraph=HypergraphConfig(normalize=not args.no_normalize),
            raster=raster,
            model=model,
        ),
        epochs=args.epochs,
        batch_size=args.batch,
        lr=args.lr,
        seed=args.seed,
        data_dir=str(data_dir),
        train_split=args.train_split,
        test_split=args.test_split,
        out_path=str(out_path),
        log_path=str(log_path) if log_path else None,
        workers=args.workers or get_settings().runtime.workers,
    )


def run_command(args) -> None:
    settings = get_settings()

    if args.command == "synth":
        spec = SynthSpec(
            train=args.train,
            test=args.test,
            seed=settings.data.seed if args.seed is None else args.seed,
            dim3=args.dim3,
        )
        generate_dataset(spec, args.out, workers=args.workers or settings.runtime.workers)

    elif args.command == "train":
        config = _train_config(args, args.mode, args.out, args.log)
        result = train(config)
        print(f"best epoch {result.best_epoch}: test accuracy {result.best_test_acc:.4f}")

    elif args.command == "eval":
        ckpt = args.ckpt or settings.data.checkpoint_path
        if ckpt is None:
            raise RendNetError("no checkpoint given: pass --ckpt or set RENDNET_CHECKPOINT")
        metrics = evaluate(ckpt, _data_dir(args), args.split, workers=args.workers)
        print(json.dumps(metrics.summary(), indent=2))
        if args.json:
            write_json(args.json, metrics.summary())

    elif args.command == "ablate":
        config = _train_config(args, "full", args.out_dir / "full.rnd", None)
        report = run_ablation(config, args.modes, args.out_dir)
        print(report.to_table(), end="")

    elif args.command == "modes":
        for mode in resolve_modes(args.spec):
            print(mode)

    elif args.command == "inspect":
        doc = load_document(str(args.doc))
        for path in inspect_document(doc, args.out_prefix, checkpoint=args.ckpt):
            print(path)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"rendnet: error: {e}", file=sys.stderr)
        return EXIT_USAGE

    level = (args.log_level or get_settings().runtime.log_level).upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )

    try:
        run_command(args)
    except (RendNetError, ValidationError, ValueError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_DATA
    return 0


if __name__ == "__main__":
    sys.exit(main())
