# ABOUTME: Tests for raster plans: fragment bookkeeping, interpolation, determinism and invariances
# ABOUTME: Also covers the chord fallback for hyperedges whose members are collinear

import logging

import numpy as np
import pytest

from rendnet.hypergraph import build_hypergraph
from rendnet.lsr import build_raster_plan
from rendnet.lsr.plan import sampling_digest
from rendnet.models.config import HypergraphConfig, RasterConfig
from rendnet.tests.factories import tee_doc, toy_doc
from rendnet.vgdoc import Line, Rect, VGDocument, boundary_curves

RAW = HypergraphConfig(normalize=False)
RASTER = RasterConfig(spacing=0.25, density=16.0)


def surface_fragment_count(graph, plan) -> int:
    return int(np.sum(plan.fragments.simplex_ids >= len(graph.edges)))


@pytest.fixture
def toy():
    graph = build_hypergraph(toy_doc())
    return graph, build_raster_plan(graph, RASTER, knn_k=4)


@pytest.mark.unit
class TestRasterPlan:
    def test_curve_and_surface_fragments(self, toy):
        graph, plan = toy
        curve_total = sum(
            int(np.sum(plan.fragments.simplex_ids == e.id)) for e in graph.edges
        )
        assert curve_total + surface_fragment_count(graph, plan) == plan.num_fragments
        assert surface_fragment_count(graph, plan) == max(8, round(16.0 * graph.document.surfaces[0].area()))

    def test_simplex_table(self, toy):
        graph, plan = toy
        assert plan.simplices.curve_simplices.tolist() == [list(e.endpoints) for e in graph.edges]
        (triangles,) = plan.simplices.surface_triangles
        assert len(triangles) == 2
        assert set(triangles.ravel().tolist()) == set(graph.surfaces[0].members)
        assert plan.simplices.surface_chords == ((),)

    def test_interpolation_reproduces_positions(self, toy):
        _, plan = toy
        assert np.allclose(plan.interpolate_forward(plan.node_positions), plan.fragments.positions, atol=1e-12)

    def test_adjoint_identity(self, toy, rng):
        _, plan = toy
        H = rng.normal(size=(plan.num_nodes, 5))
        G = rng.normal(size=(plan.num_fragments, 5))
        lhs = np.sum(plan.interpolate_forward(H) * G)
        rhs = np.sum(H * plan.interpolate_backward(G))
        assert lhs == pytest.approx(rhs, abs=1e-12)

    def test_neighborhood_shape(self, toy):
        graph, plan = toy
        assert plan.neighborhoods.shape == (graph.num_nodes, 4)
        assert plan.neighborhoods.max() < plan.num_fragments

    def test_repeatable(self):
        graph = build_hypergraph(toy_doc())
        first = build_raster_plan(graph, RASTER)
        second = build_raster_plan(build_hypergraph(toy_doc()), RASTER)
        assert np.array_equal(first.fragments.positions, second.fragments.positions)
        assert np.array_equal(first.neighborhoods, second.neighborhoods)

    def test_seed_changes_surface_samples(self):
        graph = build_hypergraph(toy_doc())
        a = build_raster_plan(graph, RASTER)
        b = build_raster_plan(graph, RasterConfig(spacing=0.25, density=16.0, seed=1))
        assert a.num_fragments == b.num_fragments
        assert not np.array_equal(a.fragments.positions, b.fragments.positions)

    def test_lines_only(self):
        graph = build_hypergraph(tee_doc(), RAW)
        plan = build_raster_plan(graph, RASTER)
        assert surface_fragment_count(graph, plan) == 0
        assert np.allclose(plan.interpolate_forward(plan.node_positions), plan.fragments.positions, atol=1e-9)


@pytest.mark.unit
class TestSurfaceArea:
    @pytest.mark.parametrize("width,expected", [(1.0, 64), (2.0, 128)])
    def test_surface_count_follows_area(self, width, expected):
        rect = Rect((0.0, 0.0), (width, 0.0), (0.0, 1.0))
        graph = build_hypergraph(VGDocument(2, boundary_curves(rect), [rect]), RAW)
        plan = build_raster_plan(graph, RasterConfig(spacing=0.25, density=64.0))
        assert surface_fragment_count(graph, plan) == expected


@pytest.mark.unit
class TestInvariance:
    def test_translation_and_scale(self):
        doc = toy_doc()
        moved = doc.mapped(3.0 * np.eye(2), np.array([100.0, -7.0]))
        a = build_raster_plan(build_hypergraph(doc), RASTER, knn_k=512)
        b = build_raster_plan(build_hypergraph(moved), RASTER, knn_k=512)
        assert sampling_digest(build_hypergraph(doc).document) == sampling_digest(build_hypergraph(moved).document)
        assert np.allclose(a.fragments.positions, b.fragments.positions, atol=1e-9)

    def test_node_relabeling(self, toy, rng):
        graph, plan = toy
        perm = rng.permutation(graph.num_nodes)
        moved = plan.relabel_nodes(perm)
        H = rng.normal(size=(graph.num_nodes, 3))
        H_moved = np.empty_like(H)
        H_moved[perm] = H
        assert np.array_equal(moved.interpolate_forward(H_moved), plan.interpolate_forward(H))
        assert np.array_equal(moved.neighborhoods[perm], plan.neighborhoods)
        assert np.array_equal(moved.node_positions[perm], plan.node_positions)

    def test_fragment_reordering(self, toy, rng):
        _, plan = toy
        order = rng.permutation(plan.num_fragments)
        moved = plan.reorder_fragments(order)
        H = rng.normal(size=(plan.num_nodes, 3))
        assert np.array_equal(moved.interpolate_forward(H), plan.interpolate_forward(H)[order])
        node = plan.node_positions[0]
        before = np.linalg.norm(plan.fragments.positions[plan.neighborhoods[0]] - node, axis=1)
        after = np.linalg.norm(moved.fragments.positions[moved.neighborhoods[0]] - node, axis=1)
        assert np.array_equal(after, before)


@pytest.mark.unit
def test_collinear_members_fall_back_to_chords(caplog):
    doc = VGDocument(
        2,
        [Line((0.0, 0.0), (2.0, 0.0)), Line((1.0, 0.0), (1.0, -1.0))],
        [Rect((-0.5, -0.1), (3.0, 0.0), (0.0, 0.2))],
    )
    graph = build_hypergraph(doc, RAW)
    assert graph.surfaces[0].members == (0, 1, 2)
    with caplog.at_level(logging.WARNING):
        plan = build_raster_plan(graph, RASTER)
    assert "falling back to chords" in caplog.text
    assert plan.simplices.surface_chords == (((0, 2), (2, 1)),)
    assert len(plan.simplices.surface_triangles[0]) == 0
    assert surface_fragment_count(graph, plan) == 10
