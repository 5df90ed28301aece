# ABOUTME: Tests for parameter layout and initialization across model variants

import numpy as np
import pytest

from rendnet.gradkit import Tape
from rendnet.models import ModelConfig
from rendnet.models.net import mlp
from rendnet.models.params import EDGE_MLP_NOISE, edge_feature_width, glorot_limit, init_params, parameter_layout


def layer_names(mode: str):
    return [name for name, _, _ in parameter_layout(ModelConfig(hidden=4, blocks=2, num_classes=3, mode=mode))]


@pytest.mark.unit
class TestLayout:
    def test_full_model(self):
        names = layer_names("full")
        assert names[0] == "embed"
        assert "block1.edge_mlp.1" in names
        assert "block1.raster_mlp.0" in names
        assert "final.mlp.1" in names
        assert names[-1] == "head"

    def test_ablations_drop_their_layers(self):
        assert not any("raster_mlp" in n for n in layer_names("vector-only"))
        assert not any("edge_mlp" in n or "hyper_mlp" in n for n in layer_names("raster-only"))
        assert "block0.gcn" in layer_names("no-edge-features")
        assert not any(n.startswith("final") for n in layer_names("no-final-block"))
        assert layer_names("pointnet-only") == ["pointnet.0", "pointnet.1", "head"]

    def test_ensemble_head_sees_both_readouts(self):
        layout = dict((n, (i, o)) for n, i, o in parameter_layout(ModelConfig(hidden=4, num_classes=3, mode="ensemble")))
        assert layout["ensemble_head.0"] == (8, 4)
        assert layout["ensemble_head.1"] == (4, 3)

    def test_edge_mlp_emits_a_matrix(self):
        layout = dict((n, (i, o)) for n, i, o in parameter_layout(ModelConfig(hidden=5, dim=3)))
        assert layout["block0.edge_mlp.0"][0] == edge_feature_width(3) == 9
        assert layout["block0.edge_mlp.1"][1] == 25


@pytest.mark.unit
class TestInit:
    def test_same_seed_same_tensors(self):
        config = ModelConfig(hidden=4, num_classes=3)
        a, b = init_params(config).tensors(), init_params(config).tensors()
        assert a.keys() == b.keys()
        assert all(np.array_equal(a[k], b[k]) for k in a)
        c = init_params(config, seed=5).tensors()
        assert not np.array_equal(a["embed.W"], c["embed.W"])

    def test_tensor_depends_only_on_name(self):
        small = init_params(ModelConfig(hidden=4, blocks=1, num_classes=3)).tensors()
        large = init_params(ModelConfig(hidden=4, blocks=3, num_classes=3)).tensors()
        assert np.array_equal(small["block0.hyper_mlp.0.W"], large["block0.hyper_mlp.0.W"])

    def test_biases_and_batch_norm(self):
        params = init_params(ModelConfig(hidden=4, num_classes=3))
        for name, value in params.store.items():
            if name.endswith(".edge_mlp.1.b"):
                continue
            if name.endswith(".b") or name.endswith(".beta"):
                assert not value.any(), name
            if name.endswith(".gamma"):
                assert np.all(value == 1.0)
        state = params.bn_state(0)
        assert state.running_mean.tolist() == [0.0] * 4
        assert state.running_var.tolist() == [1.0] * 4

    def test_edge_matrix_starts_at_scaled_identity(self):
        params = init_params(ModelConfig(hidden=4, num_classes=3))
        tape = Tape()
        leaves = params.bind(tape, requires_grad=False)
        theta = mlp(tape.constant(np.zeros((2, edge_feature_width(2)))), leaves, "block0.edge_mlp", 2).data
        assert np.array_equal(theta.reshape(2, 4, 4), np.broadcast_to(np.eye(4) / 4, (2, 4, 4)))

    def test_edge_output_layer_is_the_only_biased_exception(self):
        config = ModelConfig(hidden=4, blocks=2, num_classes=3)
        params = init_params(config)
        fan_in = 4
        for block in range(2):
            weight = params.store[f"block{block}.edge_mlp.1.W"]
            assert np.abs(weight).max() <= EDGE_MLP_NOISE * glorot_limit(fan_in, 16)
            assert np.array_equal(params.store[f"block{block}.edge_mlp.1.b"], (np.eye(4) / 4).reshape(-1))
        assert np.abs(params.store["block0.edge_mlp.0.W"]).max() > EDGE_MLP_NOISE * glorot_limit(edge_feature_width(2), 4)

    def test_weight_spread_matches_glorot(self):
        params = init_params(ModelConfig(hidden=320, blocks=1, num_classes=3, mode="no-edge-features"))
        weight = params.store["block0.raster_mlp.1.W"]
        assert weight.size >= 100_000
        expected = glorot_limit(320, 320) / np.sqrt(3.0)
        assert abs(weight.std() - expected) <= 0.1 * expected
        assert np.abs(weight).max() <= glorot_limit(320, 320)

    def test_pointnet_has_no_batch_norm(self):
        params = init_params(ModelConfig(hidden=4, num_classes=3, mode="pointnet-only"))
        assert not params.store.bn_states
        assert "embed.W" not in params.store


@pytest.mark.unit
class TestTensors:
    def test_running_statistics_are_included(self):
        tensors = init_params(ModelConfig(hidden=4, blocks=2, num_classes=3)).tensors()
        assert "block1.bn.running_var" in tensors
        assert "block1.bn.gamma" in tensors

    def test_load_tensors(self):
        config = ModelConfig(hidden=4, num_classes=3)
        source = init_params(config, seed=3)
        source.bn_state(0).running_mean = np.full(4, 0.5)
        target = init_params(config, seed=4)
        target.load_tensors(source.tensors())
        assert np.array_equal(target.store["head.W"], source.store["head.W"])
        assert target.bn_state(0).running_mean.tolist() == [0.5] * 4

    def test_all_finite(self):
        params = init_params(ModelConfig(hidden=4, num_classes=3))
        assert params.all_finite()
        params.bn_state(1).running_var = np.array([1.0, np.inf, 1.0, 1.0])
        assert not params.all_finite()
