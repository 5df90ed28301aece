"""
Experiment services: synthetic data, dataset loading, training, evaluation,
ablation sweeps, checkpoint persistence and inspection exports.
"""

from .synth_service import DatasetManifest, generate_dataset, load_manifest, make_symbol, structural_counts
from .dataset_service import DatasetService
from .checkpoint_store import Checkpoint, decode_checkpoint, encode_checkpoint, load_checkpoint, save_checkpoint
from .metrics_aggregator import MetricsAggregator
from .evaluator import Metrics, compute_metrics, evaluate, evaluate_samples, predict_samples
from .trainer import Trainer, TrainResult, train
from .ablation_service import AblationReport, AblationRow, run_ablation
from .inspector import inspect_document, pca_colors

__all__ = [
    "AblationReport",
    "AblationRow",
    "Checkpoint",
    "DatasetManifest",
    "DatasetService",
    "Metrics",
    "MetricsAggregator",
    "TrainResult",
    "Trainer",
    "compute_metrics",
    "decode_checkpoint",
    "encode_checkpoint",
    "evaluate",
    "evaluate_samples",
    "generate_dataset",
    "inspect_document",
    "load_checkpoint",
    "load_manifest",
    "make_symbol",
    "pca_colors",
    "predict_samples",
    "run_ablation",
    "save_checkpoint",
    "structural_counts",
    "train",
]
