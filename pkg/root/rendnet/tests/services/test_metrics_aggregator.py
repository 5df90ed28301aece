# ABOUTME: Tests for the epoch metrics aggregator and its CSV rendering

import pytest

from rendnet.services.metrics_aggregator import CSV_HEADER, MetricsAggregator


@pytest.fixture
def aggregator():
    return MetricsAggregator("full")


def epoch(n, loss, train_acc, test_acc, duration=0.5):
    return {"epoch": n, "loss": loss, "train_acc": train_acc, "test_acc": test_acc,
            "duration_seconds": duration, "samples": 10}


class TestMetricsAggregator:
    def test_best_epoch_tracking(self, aggregator):
        assert aggregator.record_epoch(epoch(1, 1.0, 0.5, 0.5))
        assert aggregator.record_epoch(epoch(2, 0.8, 0.6, 0.75))
        assert not aggregator.record_epoch(epoch(3, 0.7, 0.7, 0.75))
        assert aggregator.best_epoch == 2
        assert aggregator.best_test_acc == 0.75

    def test_csv_leaves_out_timing(self, aggregator):
        aggregator.record_epoch(epoch(1, 1.0 / 3.0, 0.5, 0.25, duration=12.0))
        aggregator.record_epoch(epoch(2, 0.125, 1.0, 0.5, duration=3.0))
        assert aggregator.to_csv() == f"{CSV_HEADER}\n1,0.3333333333,0.5,0.25\n2,0.125,1,0.5\n"

    def test_summary(self, aggregator):
        aggregator.record_epoch(epoch(1, 1.0, 0.5, 0.5, duration=2.0))
        aggregator.record_epoch(epoch(2, 0.5, 0.75, 0.25, duration=2.0))
        aggregator.record_evaluation("test", {"accuracy": 0.5})
        summary = aggregator.get_run_summary()
        assert summary["epochs"] == 2
        assert summary["best_epoch"] == 1
        assert summary["final_loss"] == 0.5
        assert summary["average_epoch_duration"] == 2.0
        assert summary["samples_per_second"] == 5.0
        assert summary["evaluations"] == {"test": 1}
        assert aggregator.get_loss_curve() == [1.0, 0.5]

    def test_empty_summary(self, aggregator):
        summary = aggregator.get_run_summary()
        assert summary["best_epoch"] is None
        assert summary["final_loss"] is None
        assert summary["samples_per_second"] is None

    def test_reset(self, aggregator):
        aggregator.record_epoch(epoch(1, 1.0, 0.5, 0.5))
        aggregator.reset()
        assert aggregator.epochs == []
        assert aggregator.run_name == "full"
        assert aggregator.to_csv() == CSV_HEADER + "\n"
