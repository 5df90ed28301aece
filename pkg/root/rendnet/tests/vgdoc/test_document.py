# ABOUTME: Tests for document construction, validation errors, bounding boxes and normalization
# ABOUTME: Covers the similarity mapping used by normalization and the 2D-to-3D lift

import math

import numpy as np
import pytest

from rendnet.exceptions import DegenerateGeometryError, DocumentValidationError
from rendnet.tests.factories import square_doc, toy_doc
from rendnet.vgdoc import (
    Arc,
    Disk,
    Line,
    Polygon,
    QuadBezier,
    Rect,
    VGDocument,
    boundary_curves,
    normalize_document,
)


@pytest.mark.unit
class TestValidation:
    def test_degenerate_line(self):
        with pytest.raises(DocumentValidationError) as exc:
            Line((1.0, 1.0), (1.0, 1.0))
        assert exc.value.path == "p1"

    def test_zero_sweep(self):
        with pytest.raises(DocumentValidationError) as exc:
            Arc((0.0, 0.0), 1.0, 0.0, 0.0)
        assert exc.value.path == "sweep"

    def test_sweep_beyond_full_turn(self):
        with pytest.raises(DocumentValidationError):
            Arc((0.0, 0.0), 1.0, 0.0, 7.0)

    def test_non_positive_radius(self):
        with pytest.raises(DocumentValidationError):
            Disk((0.0, 0.0), -1.0)

    def test_bezier_with_coincident_controls(self):
        with pytest.raises(DocumentValidationError):
            QuadBezier((1.0, 2.0), (1.0, 2.0), (1.0, 2.0))

    def test_bowtie_polygon(self):
        with pytest.raises(DocumentValidationError, match="self-intersects"):
            Polygon([(0.0, 0.0), (1.0, 1.0), (1.0, 0.0), (0.0, 1.0)])

    def test_polygon_too_short(self):
        with pytest.raises(DocumentValidationError):
            Polygon([(0.0, 0.0), (1.0, 1.0)])

    def test_non_coplanar_polygon(self):
        with pytest.raises(DocumentValidationError, match="coplanar"):
            Polygon([(0.0, 0.0, 0.0), (1.0, 0.0, 0.0), (1.0, 1.0, 0.5), (0.0, 1.0, 0.0)])

    def test_dependent_rect_edges(self):
        with pytest.raises(DocumentValidationError):
            Rect((0.0, 0.0), (1.0, 1.0), (2.0, 2.0))

    def test_3d_arc_requires_axes(self):
        with pytest.raises(DocumentValidationError) as exc:
            Arc((0.0, 0.0, 0.0), 1.0, 0.0, 1.0)
        assert exc.value.path == "ax"

    def test_2d_arc_rejects_axes(self):
        with pytest.raises(DocumentValidationError):
            Arc((0.0, 0.0), 1.0, 0.0, 1.0, ax=(1.0, 0.0), ay=(0.0, 1.0))

    def test_non_orthogonal_axes(self):
        with pytest.raises(DocumentValidationError, match="orthogonal"):
            Disk((0.0, 0.0, 0.0), 1.0, ax=(1.0, 0.0, 0.0), ay=(math.sqrt(0.5), math.sqrt(0.5), 0.0))

    def test_non_finite_coordinate(self):
        with pytest.raises(DocumentValidationError):
            Line((0.0, float("inf")), (1.0, 0.0))

    def test_empty_document(self):
        with pytest.raises(DocumentValidationError):
            VGDocument(2, [], [])

    def test_mixed_dimensions(self):
        with pytest.raises(DocumentValidationError) as exc:
            VGDocument(2, [Line((0.0, 0.0, 0.0), (1.0, 0.0, 0.0))])
        assert exc.value.path == "curves[0]"

    @pytest.mark.parametrize("label", [-1, True, 1.5])
    def test_bad_label(self, label):
        with pytest.raises(DocumentValidationError):
            square_doc(label)

    def test_validation_error_is_value_error(self):
        with pytest.raises(ValueError):
            Line((0.0, 0.0), (0.0, 0.0))


@pytest.mark.unit
class TestBoundingBox:
    def test_full_circle(self):
        box = Arc((0.0, 0.0), 1.0, 0.0, 2.0 * math.pi).bbox()
        assert np.allclose(box.min, [-1.0, -1.0], atol=1e-15)
        assert np.allclose(box.max, [1.0, 1.0], atol=1e-15)

    def test_quarter_arc(self):
        box = Arc((0.0, 0.0), 1.0, 0.0, math.pi / 2).bbox()
        assert np.allclose(box.min, [0.0, 0.0], atol=1e-15)
        assert np.allclose(box.max, [1.0, 1.0], atol=1e-15)

    def test_bezier_includes_apex(self):
        box = QuadBezier((0.0, 0.0), (1.0, 2.0), (2.0, 0.0)).bbox()
        assert np.allclose(box.min, [0.0, 0.0])
        assert np.allclose(box.max, [2.0, 1.0])

    def test_document_union(self):
        box = toy_doc().bbox()
        assert box.min == (-1.0, -1.0)
        assert box.max == (2.0, 2.0)

    def test_disk_boundary_is_two_half_arcs(self):
        halves = boundary_curves(Disk((0.0, 0.0), 2.0))
        assert len(halves) == 2
        assert all(isinstance(h, Arc) and h.sweep == math.pi for h in halves)


@pytest.mark.unit
class TestMapping:
    @pytest.mark.parametrize("A", [
        np.array([[0.0, -1.0], [1.0, 0.0]]),
        np.array([[1.0, 0.0], [0.0, -1.0]]),
        2.5 * np.eye(2),
    ])
    def test_arc_image_matches_mapped_points(self, A):
        arc = Arc((0.5, -0.25), 1.5, 0.3, 2.0)
        b = np.array([3.0, 1.0])
        t = np.linspace(0.0, 1.0, 7)
        expected = arc.point_at(t) @ A.T + b
        assert np.allclose(arc.mapped(A, b).point_at(t), expected, atol=1e-12)

    def test_lift_to_3d(self):
        A = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
        b = np.array([0.0, 0.0, 2.0])
        lifted = square_doc().mapped(A, b)
        assert lifted.dim == 3
        assert lifted.curves[0].p0 == (0.0, 0.0, 2.0)
        assert lifted.surfaces[0].area() == pytest.approx(1.0)


@pytest.mark.unit
class TestNormalize:
    def test_unit_square_diagonal(self):
        normalized, transform = normalize_document(square_doc())
        box = normalized.bbox()
        assert box.diagonal == pytest.approx(2.0, abs=1e-12)
        assert np.allclose(box.center, 0.0, atol=1e-12)
        assert transform.scale == pytest.approx(math.sqrt(2.0))
        assert transform.center == (0.5, 0.5)

    def test_idempotent(self):
        once, _ = normalize_document(toy_doc())
        twice, transform = normalize_document(once)
        assert twice is once
        assert transform.scale == 1.0

    def test_translation_invariance(self):
        doc = toy_doc()
        moved = doc.mapped(np.eye(2), np.array([100.0, -7.0]))
        a, _ = normalize_document(doc)
        b, _ = normalize_document(moved)
        for ca, cb in zip(a.curves, b.curves):
            assert np.allclose(ca.p0, cb.p0, atol=1e-12)
            assert np.allclose(ca.p1, cb.p1, atol=1e-12)
        assert np.allclose(a.surfaces[0].origin, b.surfaces[0].origin, atol=1e-12)

    def test_transform_inverts(self):
        doc = toy_doc()
        normalized, transform = normalize_document(doc)
        assert np.allclose(transform.invert(normalized.curves[4].p1), doc.curves[4].p1, atol=1e-12)
        assert np.allclose(transform.apply(doc.curves[4].p1), normalized.curves[4].p1, atol=1e-12)

    def test_label_survives(self):
        normalized, _ = normalize_document(square_doc(label=3))
        assert normalized.label == 3

    def test_degenerate_extent(self):
        # the squared extent underflows to zero
        doc = VGDocument(2, [Line((0.0, 0.0), (1e-320, 0.0))])
        with pytest.raises(DegenerateGeometryError, match="degenerate extent"):
            normalize_document(doc)
