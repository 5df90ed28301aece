# ABOUTME: Tests for the command-line entry point: exit codes and end-to-end command runs
# ABOUTME: Commands run in-process through main(argv)

import json
from pathlib import Path

import pytest

from rendnet.config import settings as settings_module
from rendnet.main import EXIT_DATA, EXIT_USAGE, main
from rendnet.models.registry import report_modes
from rendnet.parsers import load_document, serialize_canonical
from rendnet.tests.factories import toy_doc

SMALL_MODEL = [
    "--epochs", "1", "--batch", "2", "--hidden", "4", "--blocks", "1",
    "--knn-k", "4", "--spacing", "0.25", "--density", "16",
]


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Each test reads settings from a clean environment."""
    for name in ("RENDNET_CHECKPOINT", "RENDNET_DATA_DIR", "RENDNET_WORKERS", "RENDNET_SEED"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setattr(settings_module, "_settings", None)
    yield
    settings_module._settings = None


@pytest.fixture
def doc_file(tmp_path):
    path = tmp_path / "toy.json"
    path.write_text(serialize_canonical(toy_doc()), encoding="utf-8")
    return path


class TestUsage:
    def test_missing_command(self):
        assert main([]) == EXIT_USAGE

    def test_unknown_mode(self, tmp_path):
        assert main(["train", "--data", str(tmp_path), "--mode", "hexagon"]) == EXIT_USAGE

    def test_missing_required_option(self):
        assert main(["synth"]) == EXIT_USAGE


class TestCommands:
    def test_synth_requires_divisible_sizes(self, tmp_path):
        assert main(["synth", "--out", str(tmp_path / "data"), "--train", "4", "--test", "8"]) == EXIT_DATA

    def test_synth_writes_manifest(self, tmp_path):
        out = tmp_path / "data"
        assert main(["synth", "--out", str(out), "--train", "8", "--test", "8", "--seed", "3"]) == 0
        manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
        assert len(manifest["splits"]["train"]) == 8

    def test_eval_missing_checkpoint(self, tmp_path, tiny_dataset):
        assert main(["eval", "--ckpt", str(tmp_path / "nope.rnd"), "--data", str(tiny_dataset)]) == EXIT_DATA
        assert main(["eval", "--data", str(tiny_dataset)]) == EXIT_DATA

    def test_train_on_missing_dataset(self, tmp_path):
        assert main(["train", "--data", str(tmp_path / "nowhere")] + SMALL_MODEL) == EXIT_DATA

    def test_inspect(self, tmp_path, doc_file, capsys):
        prefix = tmp_path / "out" / "toy"
        assert main(["inspect", "--doc", str(doc_file), "--out-prefix", str(prefix)]) == 0
        printed = capsys.readouterr().out.split()
        assert printed == [str(prefix) + ".hypergraph.txt", str(prefix) + ".fragments.ply"]
        assert load_document(str(doc_file)).dim == 2

    def test_modes_lists_the_report_order(self, capsys):
        assert main(["modes"]) == 0
        assert capsys.readouterr().out.split() == report_modes()
        assert main(["modes", "full,pointnet,raster"]) == 0
        assert capsys.readouterr().out.split() == ["raster-only", "full", "pointnet-only"]
        assert main(["modes", "hexagon"]) == EXIT_DATA

    def test_parallel_launcher_asks_the_registry_for_modes(self):
        script = Path(__file__).resolve().parents[3] / "launch-parallel.sh"
        text = script.read_text(encoding="utf-8")
        assert "modes \"$REQUESTED\"" in text
        assert not any(mode in text for mode in ("raster-only", "no-edge-features", "no-final-block"))

    def test_inspect_unsupported_file(self, tmp_path):
        path = tmp_path / "toy.txt"
        path.write_text("nothing", encoding="utf-8")
        assert main(["inspect", "--doc", str(path), "--out-prefix", str(tmp_path / "x")]) == EXIT_DATA


@pytest.mark.integration
@pytest.mark.slow
def test_train_then_evaluate(tmp_path, tiny_dataset, monkeypatch):
    ckpt = tmp_path / "model.rnd"
    assert main(["train", "--data", str(tiny_dataset), "--out", str(ckpt)] + SMALL_MODEL) == 0
    assert ckpt.exists()
    assert (tmp_path / "model.csv").exists()

    report = tmp_path / "metrics.json"
    assert main(["eval", "--ckpt", str(ckpt), "--data", str(tiny_dataset), "--json", str(report)]) == 0
    metrics = json.loads(report.read_text(encoding="utf-8"))
    assert metrics["num_samples"] == 2
    assert 0.0 <= metrics["accuracy"] <= 1.0

    monkeypatch.setenv("RENDNET_CHECKPOINT", str(ckpt))
    monkeypatch.setattr(settings_module, "_settings", None)
    assert main(["eval", "--data", str(tiny_dataset)]) == 0
