# ABOUTME: Ablation sweep: trains each model variant on identical data and seed and compares test error
# ABOUTME: The report follows the registry's row order and adds accuracies on the two diagnostic class pairs

import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

from rendnet.models.registry import get_variant, resolve_modes
from rendnet.models.config import TrainConfig
from rendnet.services.dataset_service import DatasetService
from rendnet.services.evaluator import Metrics, evaluate_samples
from rendnet.services.trainer import Trainer, check_dataset
from rendnet.utils.serialization import atomic_write, write_json

logger = logging.getLogger(__name__)

# class pairs separated only by curve type, and only by topology
DIAGNOSTIC_PAIRS = {
    "curve_type": ("square_round_hole", "square_stadium_hole"),
    "topology": ("t_junction_touching", "t_junction_gap"),
}


@dataclass
class AblationRow:
    mode: str
    name: str
    test_error_percent: float
    best_epoch: int
    pair_accuracy: Dict[str, Optional[float]] = field(default_factory=dict)
    metrics: Optional[Metrics] = field(default=None, repr=False)


@dataclass
class AblationReport:
    rows: List[AblationRow]

    def row(self, mode: str) -> AblationRow:
        for row in self.rows:
            if row.mode == mode:
                return row
        raise KeyError(mode)

    def to_table(self) -> str:
        pairs = list(DIAGNOSTIC_PAIRS)
        header = ["mode", "variant", "test error %"] + [f"{p} pair acc" for p in pairs]
        lines = [" | ".join(header), " | ".join("---" for _ in header)]
        for row in self.rows:
            cells = [row.mode, row.name, f"{row.test_error_percent:.2f}"]
            for pair in pairs:
                acc = row.pair_accuracy.get(pair)
                cells.append("n/a" if acc is None else f"{acc:.4f}")
            lines.append(" | ".join(cells))
        return "\n".join(lines) + "\n"

    def to_dict(self) -> Dict[str, object]:
        return {
            "rows": [
                {
                    "mode": row.mode,
                    "name": row.name,
                    "test_error_percent": round(row.test_error_percent, 4),
                    "best_epoch": row.best_epoch,
                    "pair_accuracy": row.pair_accuracy,
                }
                for row in self.rows
            ]
        }


def pair_indices(classes: Sequence[str]) -> Dict[str, Optional[tuple]]:
    """Class indices of each diagnostic pair; None when the dataset lacks one of its classes."""
    indices = {}
    for pair, names in DIAGNOSTIC_PAIRS.items():
        indices[pair] = tuple(classes.index(n) for n in names) if all(n in classes for n in names) else None
    return indices


def run_ablation(
    base: TrainConfig,
    modes: Union[str, Sequence[str]] = "all",
    out_dir: Optional[Union[str, Path]] = None,
    dataset: Optional[DatasetService] = None,
) -> AblationReport:
    """Train every requested variant with the base config's data, seed and schedule."""
    mode_list = resolve_modes(modes) if isinstance(modes, str) else resolve_modes(",".join(modes))
    out_dir = Path(out_dir) if out_dir is not None else Path(base.out_path).parent / "ablation"
    dataset = dataset or DatasetService(base.data_dir, base.pipeline, workers=base.workers)

    rows = []
    for mode in mode_list:
        pipeline = base.pipeline.model_copy(update={"model": base.pipeline.model.model_copy(update={"mode": mode})})
        config = base.model_copy(update={
            "pipeline": pipeline,
            "out_path": str(out_dir / f"{mode}.rnd"),
            "log_path": str(out_dir / f"{mode}.csv"),
        })
        mode_data = dataset.with_pipeline(pipeline)
        check_dataset(config, mode_data)
        start = time.perf_counter()
        train = mode_data.samples(config.train_split)
        test = mode_data.samples(config.test_split)

        result = Trainer(config).fit(train, test, time.perf_counter() - start)
        metrics = evaluate_samples(result.params, test)
        labels = [s.label for s in test]
        pair_acc = {
            pair: (None if idx is None else metrics.pair_accuracy(labels, idx))
            for pair, idx in pair_indices(mode_data.manifest.classes).items()
        }
        variant = get_variant(mode)
        rows.append(AblationRow(mode, variant.name, metrics.error_percent, result.best_epoch, pair_acc, metrics))
        logger.info(f"Ablation {mode}: test error {metrics.error_percent:.2f}%")

    report = AblationReport(rows)
    atomic_write(out_dir / "ablation.md", report.to_table())
    write_json(out_dir / "ablation.json", report.to_dict())
    return report
