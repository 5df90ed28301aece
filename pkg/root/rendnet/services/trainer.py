# ABOUTME: Minibatch Adam training with cross-entropy, per-epoch CSV logging and best-test checkpointing
# ABOUTME: Shuffling comes from one seeded stream and each minibatch runs as a single graph, so runs repeat exactly

import logging
import math
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from rendnet.exceptions import DatasetError, TrainingDivergedError
from rendnet.gradkit import adam_step
from rendnet.models.batch import PreparedSample, make_batch
from rendnet.models.config import TrainConfig
from rendnet.models.net import batch_loss
from rendnet.models.params import ModelParams, init_params
from rendnet.services.checkpoint_store import save_checkpoint
from rendnet.services.dataset_service import DatasetService
from rendnet.services.evaluator import evaluate_samples
from rendnet.services.metrics_aggregator import MetricsAggregator
from rendnet.utils.serialization import atomic_write, digest_of, write_json

logger = logging.getLogger(__name__)


@dataclass
class TrainResult:
    params: ModelParams
    metrics: MetricsAggregator
    best_epoch: int
    best_test_acc: float
    checkpoint_path: Optional[Path] = None
    log_path: Optional[Path] = None
    summary_path: Optional[Path] = None


def minibatches(order: np.ndarray, batch_size: int) -> List[np.ndarray]:
    """Consecutive slices of `order`; a trailing single sample joins the previous batch."""
    batches = [order[i:i + batch_size] for i in range(0, len(order), batch_size)]
    if len(batches) > 1 and len(batches[-1]) == 1:
        batches[-2] = np.concatenate([batches[-2], batches.pop()])
    return batches


def default_log_path(out_path: Path) -> Path:
    return out_path.with_suffix(".csv")


def default_summary_path(out_path: Path) -> Path:
    return out_path.with_suffix(".summary.json")


class Trainer:
    """Trains one model configuration on prepared samples."""

    def __init__(self, config: TrainConfig, write_files: bool = True):
        self.config = config
        self.write_files = write_files
        self.out_path = Path(config.out_path)
        self.log_path = Path(config.log_path) if config.log_path else default_log_path(self.out_path)
        self.summary_path = default_summary_path(self.out_path)

    def _metadata(self, epoch: int, test_acc: float) -> Dict[str, object]:
        return {
            "epoch": epoch,
            "seed": self.config.seed,
            "test_acc": test_acc,
            "config_digest": digest_of(self.config.pipeline),
        }

    def _run_epoch(self, params: ModelParams, samples: Sequence[PreparedSample], rng: np.random.Generator, epoch: int):
        config = self.config
        order = rng.permutation(len(samples))
        total_loss = 0.0
        correct = 0
        for step, batch_ids in enumerate(minibatches(order, config.batch_size)):
            batch = make_batch([samples[i] for i in batch_ids])
            loss, grads, logits = batch_loss(params, batch, train=True)
            if not math.isfinite(loss):
                raise TrainingDivergedError(
                    f"non-finite loss {loss} at epoch {epoch}, batch {step} (lr {config.lr}, mode {params.config.mode})"
                )
            adam_step(params.store, grads, config.lr, config.beta1, config.beta2, config.eps)
            total_loss += loss * len(batch_ids)
            correct += int(np.sum(logits.argmax(axis=1) == batch.labels))
        return total_loss / len(samples), correct / len(samples)

    def run_summary(self, metrics: MetricsAggregator, preparation_seconds: float) -> Dict[str, object]:
        """Timings and best-epoch results of a finished run; kept out of the CSV."""
        summary = metrics.get_run_summary()
        summary.update({
            "mode": self.config.pipeline.model.mode,
            "dim": self.config.pipeline.model.dim,
            "train_split": self.config.train_split,
            "test_split": self.config.test_split,
            "preparation_seconds": round(preparation_seconds, 2),
            "wall_clock_seconds": round(preparation_seconds + metrics.total_duration, 2),
        })
        return summary

    def fit(self, train: Sequence[PreparedSample], test: Sequence[PreparedSample],
            preparation_seconds: float = 0.0) -> TrainResult:
        """Train for the configured epochs; returns the parameters of the best test epoch."""
        config = self.config
        if len(train) < 2:
            raise DatasetError(f"training needs at least 2 documents, got {len(train)}")
        if not test:
            raise DatasetError("training needs a non-empty test split")
        if config.batch_size < 2:
            raise ValueError("batch size must be at least 2 for batch normalization")

        model = config.pipeline.model
        params = init_params(model)
        rng = np.random.default_rng(config.seed)
        metrics = MetricsAggregator(model.mode)
        best: Optional[Dict[str, np.ndarray]] = None
        logger.info(
            f"Training mode={model.mode} on {len(train)} documents for {config.epochs} epochs "
            f"(batch {config.batch_size}, lr {config.lr})"
        )

        for epoch in range(1, config.epochs + 1):
            start = time.perf_counter()
            loss, train_acc = self._run_epoch(params, train, rng, epoch)
            test_acc = evaluate_samples(params, test).accuracy
            improved = metrics.record_epoch({
                "epoch": epoch,
                "loss": loss,
                "train_acc": train_acc,
                "test_acc": test_acc,
                "duration_seconds": time.perf_counter() - start,
                "samples": len(train),
            })
            if improved:
                best = {name: array.copy() for name, array in params.tensors().items()}
                if self.write_files:
                    save_checkpoint(params, config.pipeline, self.out_path, self._metadata(epoch, test_acc))

        if self.write_files:
            atomic_write(self.log_path, metrics.to_csv())
            write_json(self.summary_path, self.run_summary(metrics, preparation_seconds))
            logger.info(f"Metrics log written to {self.log_path}, run summary to {self.summary_path}")

        params.load_tensors(best)
        return TrainResult(
            params=params,
            metrics=metrics,
            best_epoch=metrics.best_epoch,
            best_test_acc=metrics.best_test_acc,
            checkpoint_path=self.out_path if self.write_files else None,
            log_path=self.log_path if self.write_files else None,
            summary_path=self.summary_path if self.write_files else None,
        )


def check_dataset(config: TrainConfig, dataset: DatasetService) -> None:
    model = config.pipeline.model
    classes = len(dataset.manifest.classes)
    if model.num_classes != classes:
        raise DatasetError(f"model predicts {model.num_classes} classes, dataset has {classes}")
    for split in (config.train_split, config.test_split):
        dim = dataset.split_dim(split)
        if dim != model.dim:
            raise DatasetError(f"model expects {model.dim}D documents, split '{split}' is {dim}D")


def train(config: TrainConfig, dataset: Optional[DatasetService] = None) -> TrainResult:
    """Load the configured dataset, train, and write the checkpoint and CSV log."""
    dataset = dataset or DatasetService(config.data_dir, config.pipeline, workers=config.workers)
    if dataset.pipeline != config.pipeline:
        dataset = dataset.with_pipeline(config.pipeline)
    check_dataset(config, dataset)
    start = time.perf_counter()
    train_samples = dataset.samples(config.train_split)
    test_samples = dataset.samples(config.test_split)
    preparation_seconds = time.perf_counter() - start
    logger.info(f"Prepared {len(train_samples) + len(test_samples)} documents in {preparation_seconds:.1f}s")
    return Trainer(config).fit(train_samples, test_samples, preparation_seconds)
