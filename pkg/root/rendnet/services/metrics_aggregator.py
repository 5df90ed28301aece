# ABOUTME: Metrics aggregation for training runs: per-epoch loss, accuracy and timing records
# ABOUTME: Renders the deterministic epoch CSV and run summaries

from typing import Dict, List, Any, Optional
from collections import defaultdict
import logging

logger = logging.getLogger(__name__)

CSV_HEADER = "epoch,loss,train_acc,test_acc"


def _fmt(value: float) -> str:
    return f"{value:.10g}"


class MetricsAggregator:
    """
    Aggregates training metrics across epochs and evaluation splits.
    Wall-clock durations are tracked for summaries but never written to the CSV,
    so identical runs produce identical CSV bytes.
    """

    def __init__(self, run_name: str = "run"):
        """Initialize the metrics aggregator"""
        self.run_name = run_name
        self.epochs: List[Dict[str, Any]] = []
        self.evaluations = defaultdict(list)

        self.total_duration = 0.0
        self.total_samples = 0
        self.best_epoch: Optional[int] = None
        self.best_test_acc = -1.0

    def record_epoch(self, epoch_record: Dict[str, Any]) -> bool:
        """
        Record one finished epoch.

        Args:
            epoch_record: epoch, loss, train_acc, test_acc and optionally
                duration_seconds and samples

        Returns:
            True when this epoch has the best test accuracy so far
        """
        epoch = int(epoch_record["epoch"])
        test_acc = float(epoch_record["test_acc"])
        self.epochs.append({
            "epoch": epoch,
            "loss": float(epoch_record["loss"]),
            "train_acc": float(epoch_record["train_acc"]),
            "test_acc": test_acc,
            "duration_seconds": float(epoch_record.get("duration_seconds", 0.0)),
        })
        self.total_duration += float(epoch_record.get("duration_seconds", 0.0))
        self.total_samples += int(epoch_record.get("samples", 0))

        improved = test_acc > self.best_test_acc
        if improved:
            self.best_test_acc = test_acc
            self.best_epoch = epoch
        logger.info(
            f"[{self.run_name}] epoch {epoch} | loss {epoch_record['loss']:.4f} | "
            f"train {epoch_record['train_acc']:.4f} | test {test_acc:.4f}"
        )
        return improved

    def record_evaluation(self, split: str, metrics: Dict[str, Any]) -> None:
        """Keep an evaluation result under its split name."""
        self.evaluations[split].append(metrics)

    def to_csv(self) -> str:
        lines = [CSV_HEADER]
        for row in self.epochs:
            lines.append(
                f"{row['epoch']},{_fmt(row['loss'])},{_fmt(row['train_acc'])},{_fmt(row['test_acc'])}"
            )
        return "\n".join(lines) + "\n"

    def get_run_summary(self) -> Dict[str, Any]:
        """Get a summary of the run so far"""
        last = self.epochs[-1] if self.epochs else None
        return {
            "run": self.run_name,
            "epochs": len(self.epochs),
            "best_epoch": self.best_epoch,
            "best_test_acc": round(self.best_test_acc, 6) if self.best_epoch is not None else None,
            "final_loss": round(last["loss"], 6) if last else None,
            "total_duration": round(self.total_duration, 2),
            "average_epoch_duration": round(self.total_duration / max(len(self.epochs), 1), 2),
            "samples_per_second": round(self.total_samples / self.total_duration, 2) if self.total_duration > 0 else None,
            "evaluations": {split: len(results) for split, results in self.evaluations.items()},
        }

    def get_loss_curve(self) -> List[float]:
        return [row["loss"] for row in self.epochs]

    def reset(self):
        """Reset all tracking"""
        self.__init__(self.run_name)
