# ABOUTME: Tests for document preparation and disjoint-union batching
# ABOUTME: Offsets, directed edge features, membership rows and neighborhood pairs

import numpy as np
import pytest

from rendnet.models.batch import make_batch, prepare_document
from rendnet.tests.factories import small_pipeline, square_doc, tee_doc, toy_doc
from rendnet.vgdoc import Line, VGDocument


@pytest.fixture
def samples(pipeline):
    return [prepare_document(toy_doc(label=1), pipeline), prepare_document(square_doc(label=0), pipeline)]


@pytest.mark.unit
class TestPrepare:
    def test_sample_parts(self, pipeline):
        sample = prepare_document(toy_doc(label=2), pipeline)
        assert sample.label == 2
        assert sample.graph.num_nodes == 6
        assert sample.plan.neighborhoods.shape == (6, 4)

    def test_unlabeled(self, pipeline):
        assert prepare_document(tee_doc(), pipeline).label is None


@pytest.mark.unit
class TestMakeBatch:
    def test_counts(self, samples):
        batch = make_batch(samples)
        toy, square = samples
        assert batch.num_graphs == 2
        assert batch.num_nodes == 10
        assert len(batch.edge_src) == 2 * (len(toy.graph.edges) + len(square.graph.edges))
        assert batch.num_hyperedges == 2
        assert batch.num_fragments == toy.plan.num_fragments + square.plan.num_fragments
        assert batch.node_graph.tolist() == [0] * 6 + [1] * 4
        assert batch.labels.tolist() == [1, 0]

    def test_second_graph_is_offset(self, samples):
        batch = make_batch(samples)
        toy, square = samples
        first_edges = 2 * len(toy.graph.edges)
        assert batch.edge_src[first_edges:].min() >= 6
        assert set(batch.member_node[batch.member_hyperedge == 1].tolist()) == {6, 7, 8, 9}
        second_pairs = batch.nbr_node >= 6
        assert batch.nbr_fragment[second_pairs].min() >= toy.plan.num_fragments
        assert np.array_equal(
            batch.interpolation.forward(batch.positions)[toy.plan.num_fragments:],
            square.plan.interpolate_forward(square.graph.positions()),
        )

    def test_directed_edge_features(self, samples):
        batch = make_batch(samples)
        edge = samples[0].graph.edges[0]
        a, b = edge.endpoints
        assert (batch.edge_src[0], batch.edge_dst[0]) == (a, b)
        assert (batch.edge_src[1], batch.edge_dst[1]) == (b, a)
        assert np.array_equal(batch.edge_features[0], edge.features)
        assert np.array_equal(batch.edge_features[1], edge.reversed_features)

    def test_member_features(self, samples):
        batch = make_batch(samples)
        surface = samples[0].graph.surfaces[0]
        assert batch.member_features.shape == (len(batch.member_node), 5)
        assert np.array_equal(batch.member_features[0, :3], surface.type_onehot)
        assert np.array_equal(batch.member_features[0, 3:], surface.param_coords[0])

    def test_neighborhood_pairs(self, samples):
        batch = make_batch(samples[:1])
        plan = samples[0].plan
        assert batch.nbr_node.tolist()[:4] == [0, 0, 0, 0]
        assert np.array_equal(batch.nbr_fragment.reshape(6, 4), plan.neighborhoods)

    def test_labels_need_every_sample(self, samples, pipeline):
        batch = make_batch(samples + [prepare_document(tee_doc(), pipeline)])
        assert batch.labels is None

    def test_lines_only_document(self, pipeline):
        batch = make_batch([prepare_document(tee_doc(), pipeline)])
        assert batch.num_hyperedges == 0
        assert batch.member_features.shape == (0, 5)

    def test_rejects_empty_and_mixed_dims(self, pipeline):
        with pytest.raises(ValueError):
            make_batch([])
        flat = prepare_document(tee_doc(), pipeline)
        doc3 = VGDocument(3, [Line((0.0, 0.0, 0.0), (1.0, 0.0, 0.0)), Line((0.0, 0.0, 0.0), (0.0, 1.0, 1.0))])
        lifted = prepare_document(doc3, small_pipeline(dim=3))
        with pytest.raises(ValueError, match="dimension"):
            make_batch([flat, lifted])
