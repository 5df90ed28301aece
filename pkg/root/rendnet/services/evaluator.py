# ABOUTME: Eval-mode scoring of a model over prepared samples: accuracy, per-class precision/recall,
# ABOUTME: confusion matrix, mean loss and per-document latency

import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Collection, Dict, List, Optional, Sequence, Union

import numpy as np
from sklearn.metrics import accuracy_score, confusion_matrix, precision_recall_fscore_support

from rendnet.exceptions import DatasetError
from rendnet.gradkit import softmax
from rendnet.models.batch import PreparedSample
from rendnet.models.net import predict_batch
from rendnet.models.params import ModelParams
from rendnet.services.checkpoint_store import Checkpoint, load_checkpoint
from rendnet.services.dataset_service import DatasetService

logger = logging.getLogger(__name__)

EVAL_BATCH = 64


@dataclass
class Metrics:
    accuracy: float
    error_percent: float
    precision: List[float]
    recall: List[float]
    confusion: List[List[int]]
    mean_loss: Optional[float] = None
    latency_ms: Optional[float] = None
    num_samples: int = 0
    predictions: List[int] = field(default_factory=list, repr=False)

    def pair_accuracy(self, labels: Sequence[int], pair: Sequence[int]) -> Optional[float]:
        """Accuracy restricted to documents whose true class is in `pair`."""
        labels = np.asarray(labels)
        mask = np.isin(labels, list(pair))
        if not mask.any():
            return None
        return float(np.mean(np.asarray(self.predictions)[mask] == labels[mask]))

    def summary(self) -> Dict[str, object]:
        return {
            "accuracy": round(self.accuracy, 6),
            "error_percent": round(self.error_percent, 4),
            "mean_loss": None if self.mean_loss is None else round(self.mean_loss, 6),
            "latency_ms": None if self.latency_ms is None else round(self.latency_ms, 3),
            "num_samples": self.num_samples,
            "precision": [round(p, 6) for p in self.precision],
            "recall": [round(r, 6) for r in self.recall],
            "confusion": self.confusion,
        }


def compute_metrics(
    labels: Sequence[int],
    logits: np.ndarray,
    num_classes: int,
    latency_ms: Optional[float] = None,
) -> Metrics:
    """Metrics from true labels and (N, C) scores."""
    labels = np.asarray(labels, dtype=int)
    logits = np.asarray(logits, dtype=float)
    if logits.shape != (len(labels), num_classes):
        raise ValueError(f"expected logits of shape {(len(labels), num_classes)}, got {logits.shape}")
    preds = logits.argmax(axis=1)
    classes = list(range(num_classes))
    precision, recall, _, _ = precision_recall_fscore_support(
        labels, preds, labels=classes, zero_division=0
    )
    probs = softmax(logits)
    mean_loss = float(-np.mean(np.log(np.maximum(probs[np.arange(len(labels)), labels], 1e-300))))
    accuracy = float(accuracy_score(labels, preds))
    return Metrics(
        accuracy=accuracy,
        error_percent=100.0 * (1.0 - accuracy),
        precision=[float(p) for p in precision],
        recall=[float(r) for r in recall],
        confusion=confusion_matrix(labels, preds, labels=classes).tolist(),
        mean_loss=mean_loss,
        latency_ms=latency_ms,
        num_samples=len(labels),
        predictions=preds.tolist(),
    )


def predict_samples(
    params: ModelParams,
    samples: Sequence[PreparedSample],
    batch_size: int = EVAL_BATCH,
    zero_streams: Collection[str] = (),
) -> np.ndarray:
    """Eval-mode logits for every sample, in order."""
    chunks = [
        predict_batch(params, list(samples[i:i + batch_size]), zero_streams)
        for i in range(0, len(samples), batch_size)
    ]
    return np.concatenate(chunks, axis=0) if chunks else np.zeros((0, params.config.num_classes))


def evaluate_samples(
    params: ModelParams,
    samples: Sequence[PreparedSample],
    batch_size: int = EVAL_BATCH,
    zero_streams: Collection[str] = (),
) -> Metrics:
    if not samples:
        raise DatasetError("cannot evaluate an empty split")
    if any(s.label is None for s in samples):
        raise DatasetError("every evaluated document needs a label")
    start = time.perf_counter()
    logits = predict_samples(params, samples, batch_size, zero_streams)
    latency_ms = 1000.0 * (time.perf_counter() - start) / len(samples)
    return compute_metrics([s.label for s in samples], logits, params.config.num_classes, latency_ms)


def check_compatible(checkpoint: Checkpoint, dataset: DatasetService, split: str) -> None:
    model = checkpoint.pipeline.model
    classes = len(dataset.manifest.classes)
    if model.num_classes != classes:
        raise DatasetError(f"checkpoint predicts {model.num_classes} classes, dataset has {classes}")
    dim = dataset.split_dim(split)
    if model.dim != dim:
        raise DatasetError(f"checkpoint expects {model.dim}D documents, split '{split}' is {dim}D")


def evaluate(
    checkpoint: Union[Checkpoint, str, Path],
    data_dir: Union[str, Path],
    split: str = "test",
    workers: Optional[int] = None,
) -> Metrics:
    """Score a checkpoint on one split of a dataset."""
    if not isinstance(checkpoint, Checkpoint):
        checkpoint = load_checkpoint(checkpoint)
    dataset = DatasetService(data_dir, checkpoint.pipeline, workers=workers)
    check_compatible(checkpoint, dataset, split)
    metrics = evaluate_samples(checkpoint.params, dataset.samples(split))
    logger.info(
        f"Split '{split}': accuracy {metrics.accuracy:.4f} (error {metrics.error_percent:.2f}%), "
        f"{metrics.latency_ms:.2f} ms/doc"
    )
    return metrics
