# ABOUTME: Tests for the variant registry and the pydantic configuration models
# ABOUTME: Aliases, report order and validation bounds

import pytest
from pydantic import ValidationError

from rendnet.models import (
    VARIANTS,
    HypergraphConfig,
    ModelConfig,
    RasterConfig,
    SynthSpec,
    TrainConfig,
    get_variant,
    normalize_mode,
    resolve_modes,
)
from rendnet.models.registry import report_modes


@pytest.mark.unit
class TestRegistry:
    @pytest.mark.parametrize("alias,expected", [
        ("full", "full"),
        ("rendnet", "full"),
        ("Vector_Only", "vector-only"),
        ("gcn", "no-edge-features"),
        ("no-final", "no-final-block"),
        ("pointnet", "pointnet-only"),
    ])
    def test_aliases(self, alias, expected):
        assert normalize_mode(alias) == expected

    def test_unknown_mode(self):
        assert get_variant("bogus") is None
        with pytest.raises(ValueError, match="Available"):
            normalize_mode("bogus")

    def test_report_order(self):
        assert report_modes() == [
            "raster-only", "vector-only", "no-edge-features", "no-final-block", "ensemble", "full",
        ]
        assert "pointnet-only" not in report_modes()

    def test_resolve_modes(self):
        assert resolve_modes("all") == report_modes()
        assert resolve_modes("full, vector, full") == ["vector-only", "full"]
        assert resolve_modes("pointnet,raster") == ["raster-only", "pointnet-only"]

    def test_stream_switches(self):
        assert not VARIANTS["vector-only"].raster_stream
        assert not VARIANTS["raster-only"].vector_stream
        assert VARIANTS["ensemble"].readout == "ensemble"
        assert not VARIANTS["no-edge-features"].edge_features


@pytest.mark.unit
class TestConfigs:
    def test_defaults(self):
        model = ModelConfig()
        assert (model.hidden, model.blocks, model.knn_k, model.mlp_depth) == (32, 3, 16, 2)
        assert RasterConfig().spacing == pytest.approx(2.0 / 256.0)
        assert HypergraphConfig().tol == 1e-7
        train = TrainConfig()
        assert (train.epochs, train.batch_size, train.lr) == (60, 32, 1e-3)

    def test_mode_is_canonicalized(self):
        assert ModelConfig(mode="raster").mode == "raster-only"
        with pytest.raises(ValidationError):
            ModelConfig(mode="nope")

    @pytest.mark.parametrize("field,value", [
        ("hidden", 3),
        ("blocks", 0),
        ("knn_k", 0),
        ("num_classes", 1),
        ("dim", 4),
    ])
    def test_model_bounds(self, field, value):
        with pytest.raises(ValidationError):
            ModelConfig(**{field: value})

    def test_training_needs_two_per_batch(self):
        with pytest.raises(ValidationError):
            TrainConfig(batch_size=1)
        with pytest.raises(ValidationError):
            TrainConfig(epochs=0)

    def test_raster_and_hypergraph_bounds(self):
        with pytest.raises(ValidationError):
            RasterConfig(spacing=0.0)
        with pytest.raises(ValidationError):
            RasterConfig(density=-1.0)
        with pytest.raises(ValidationError):
            HypergraphConfig(tol=0.0)


@pytest.mark.unit
class TestSynthSpec:
    def test_default_covers_all_classes(self):
        spec = SynthSpec()
        assert len(spec.classes) == 8
        assert (spec.train, spec.test) == (1600, 400)

    @pytest.mark.parametrize("classes", [["l_shape"], ["l_shape", "l_shape"], ["l_shape", "hexagon"]])
    def test_rejects_bad_classes(self, classes):
        with pytest.raises(ValidationError):
            SynthSpec(classes=classes)
