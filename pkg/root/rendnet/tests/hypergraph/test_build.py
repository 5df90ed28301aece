# ABOUTME: Tests for hypergraph construction, edge features, relabeling and the text dump
# ABOUTME: Uses small hand-checked documents whose node and edge counts are known

import logging
import math

import numpy as np
import pytest
from pydantic import ValidationError

from rendnet.hypergraph import HEdge, HNode, Hypergraph, build_hypergraph, dump_hypergraph
from rendnet.models.config import HypergraphConfig
from rendnet.tests.factories import square_doc, tee_doc, toy_doc
from rendnet.vgdoc import Arc, CurveKind, Disk, Line, QuadBezier, Rect, VGDocument, boundary_curves
from rendnet.vgdoc.normalize import NormalizationTransform

RAW = HypergraphConfig(normalize=False)


@pytest.mark.unit
class TestCounts:
    def test_square(self):
        graph = build_hypergraph(square_doc())
        assert (len(graph.nodes), len(graph.edges), len(graph.surfaces)) == (4, 4, 1)
        assert graph.surfaces[0].members == (0, 1, 2, 3)

    def test_toy_document(self):
        graph = build_hypergraph(toy_doc(), RAW)
        assert (len(graph.nodes), len(graph.edges), len(graph.surfaces)) == (6, 6, 1)
        assert [e.endpoints for e in graph.edges] == [(0, 1), (1, 2), (2, 3), (3, 0), (2, 4), (0, 5)]
        assert graph.neighbors(0) == [1, 3, 5]
        assert graph.incidence[0] == [0]
        assert graph.incidence[4] == []

    def test_tee_splits_the_bar(self):
        graph = build_hypergraph(tee_doc(), RAW)
        assert len(graph.nodes) == 4
        assert [e.endpoints for e in graph.edges] == [(0, 3), (3, 1), (2, 3)]
        assert graph.edges[0].t_range == (0.0, 0.625)
        assert sorted(graph.neighbors(3)) == [0, 1, 2]

    def test_gap_keeps_stem_separate(self):
        doc = VGDocument(2, [Line((-1.0, 1.0), (1.0, 1.0)), Line((0.25, -1.0), (0.25, 0.9))])
        graph = build_hypergraph(doc, RAW)
        assert (len(graph.nodes), len(graph.edges)) == (4, 2)

    def test_half_arc_is_filled_to_four_nodes(self):
        doc = VGDocument(2, [Arc((0.0, 0.0), 1.0, 0.0, math.pi)])
        graph = build_hypergraph(doc, RAW)
        assert len(graph.nodes) == 4
        assert [e.t_range for e in graph.edges] == [(0.0, 0.25), (0.25, 0.5), (0.5, 1.0)]

    def test_full_circle_forms_a_cycle(self):
        doc = VGDocument(2, [Arc((0.0, 0.0), 1.0, 0.0, 2.0 * math.pi)])
        graph = build_hypergraph(doc)
        assert (len(graph.nodes), len(graph.edges)) == (4, 4)
        assert all(len(graph.adjacency[i]) == 2 for i in range(4))

    def test_bezier_nodes_lie_on_curve(self):
        bump = QuadBezier((0.0, 0.0), (1.0, 2.0), (2.0, 0.0))
        graph = build_hypergraph(VGDocument(2, [bump]), RAW)
        assert len(graph.nodes) == 4
        for node in graph.nodes:
            for curve_id, t in node.anchors:
                assert np.allclose(bump.point_at(t), node.position, atol=1e-12)

    def test_disk_with_boundary(self):
        disk = Disk((0.0, 0.0), 1.0)
        doc = VGDocument(2, boundary_curves(disk), [disk])
        graph = build_hypergraph(doc)
        assert len(graph.nodes) == 6
        assert len(graph.edges) == 6
        (hyperedge,) = graph.surfaces
        assert hyperedge.members == tuple(range(6))
        assert np.allclose(np.linalg.norm(hyperedge.param_coords, axis=1), 1.0, atol=1e-9)

    def test_surface_without_members_is_dropped(self, caplog):
        doc = VGDocument(2, [Line((0.0, 0.0), (1.0, 0.0))], [Rect((5.0, 5.0), (1.0, 0.0), (0.0, 1.0))])
        with caplog.at_level(logging.WARNING):
            graph = build_hypergraph(doc, RAW)
        assert graph.surfaces == []
        assert "Dropping rect surface 0" in caplog.text

    def test_surfaces_only_are_outlined(self):
        rect = Rect((0.0, 0.0), (1.0, 0.0), (0.0, 1.0))
        graph = build_hypergraph(VGDocument(2, [], [rect], 3), RAW)
        explicit = build_hypergraph(VGDocument(2, boundary_curves(rect), [rect], 3), RAW)
        assert (len(graph.nodes), len(graph.edges), len(graph.surfaces)) == (4, 4, 1)
        assert dump_hypergraph(graph) == dump_hypergraph(explicit)
        assert graph.document.label == 3
        assert len(graph.document.curves) == 4

    def test_disk_only_document(self):
        graph = build_hypergraph(VGDocument(2, [], [Disk((0.0, 0.0), 1.0)]))
        assert len(graph.surfaces) == 1
        assert all(e.kind is CurveKind.ARC for e in graph.edges)
        assert len(graph.surfaces[0].members) == graph.num_nodes

    def test_3d_square(self):
        A = np.array([[1.0, 0.0], [0.0, 0.0], [0.0, 1.0]])
        doc = square_doc().mapped(A, np.zeros(3))
        graph = build_hypergraph(doc)
        assert graph.dim == 3
        assert (len(graph.nodes), len(graph.edges), len(graph.surfaces)) == (4, 4, 1)


@pytest.mark.unit
class TestEdges:
    def test_features_layout(self):
        graph = build_hypergraph(tee_doc(), RAW)
        bar = graph.edges[0]
        assert bar.kind == CurveKind.LINE
        assert np.array_equal(bar.features, [1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0])
        assert np.array_equal(bar.reversed_features, [-1.0, -0.0, -1.0, -0.0, 1.0, 0.0, 0.0])

    def test_arc_edge_directions(self):
        doc = VGDocument(2, [Arc((0.0, 0.0), 1.0, 0.0, math.pi)])
        edge = build_hypergraph(doc, RAW).edges[-1]
        assert np.allclose(edge.start_dir, [-1.0, 0.0], atol=1e-12)
        assert np.allclose(edge.end_dir, [0.0, -1.0], atol=1e-12)
        assert np.array_equal(edge.type_onehot, [0.0, 1.0, 0.0])

    def test_endpoints_follow_parameter_order(self):
        graph = build_hypergraph(toy_doc(), RAW)
        for edge in graph.edges:
            t0, t1 = edge.t_range
            assert t0 < t1
            curve = graph.document.curves[edge.curve_id]
            assert np.allclose(curve.point_at(t0), graph.nodes[edge.endpoints[0]].position)


@pytest.mark.unit
class TestHypergraph:
    def test_deterministic(self):
        assert dump_hypergraph(build_hypergraph(toy_doc())) == dump_hypergraph(build_hypergraph(toy_doc()))

    def test_normalized_positions(self):
        graph = build_hypergraph(toy_doc())
        positions = graph.positions()
        extent = positions.max(axis=0) - positions.min(axis=0)
        assert np.linalg.norm(extent) == pytest.approx(2.0)
        assert graph.transform.scale == pytest.approx(2.0 / (3.0 * math.sqrt(2.0)))

    def test_relabeled(self):
        graph = build_hypergraph(toy_doc(), RAW)
        perm = [5, 4, 3, 2, 1, 0]
        moved = graph.relabeled(perm)
        assert np.array_equal(moved.nodes[5].position, graph.nodes[0].position)
        assert moved.edges[0].endpoints == (5, 4)
        assert moved.surfaces[0].members == (2, 3, 4, 5)
        assert np.array_equal(moved.surfaces[0].param_coords[0], graph.surfaces[0].param_coords[3])
        assert sorted(moved.neighbors(5)) == [0, 2, 4]

    def test_relabeled_rejects_non_permutation(self):
        graph = build_hypergraph(tee_doc(), RAW)
        with pytest.raises(ValueError):
            graph.relabeled([0, 0, 1, 2])

    def test_missing_node_reference(self):
        nodes = [HNode(0, np.zeros(2))]
        edge = HEdge(0, (0, 1), 0, (0.0, 1.0), CurveKind.LINE, np.array([1.0, 0.0]), np.array([1.0, 0.0]))
        with pytest.raises(ValueError):
            Hypergraph(2, nodes, [edge], [], tee_doc(), NormalizationTransform.identity(2))

    def test_dump_format(self):
        text = dump_hypergraph(build_hypergraph(tee_doc(), RAW))
        assert text == (
            "N 0 -1 1\n"
            "N 1 1 1\n"
            "N 2 0.25 -1\n"
            "N 3 0.25 1\n"
            "E 0 0 3 line\n"
            "E 1 3 1 line\n"
            "E 2 2 3 line\n"
        )

    def test_dump_lists_hyperedges(self):
        text = dump_hypergraph(build_hypergraph(square_doc(), RAW))
        assert text.splitlines()[-1] == "S 0 rect 0 1 2 3"


@pytest.mark.unit
class TestHypergraphConfig:
    def test_defaults(self):
        config = HypergraphConfig()
        assert config.tol == 1e-7
        assert config.normalize is True

    @pytest.mark.parametrize("tol", [0.0, -1.0, 0.5])
    def test_tolerance_bounds(self, tol):
        with pytest.raises(ValidationError):
            HypergraphConfig(tol=tol)
