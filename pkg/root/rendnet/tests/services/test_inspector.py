# ABOUTME: Tests for inspection exports: PCA coloring, hypergraph dumps and fragment point clouds

import numpy as np
import pytest

from rendnet.exceptions import DomainError
from rendnet.models.batch import prepare_document
from rendnet.models.params import init_params
from rendnet.services.checkpoint_store import Checkpoint, save_checkpoint
from rendnet.services.inspector import (
    fragment_embeddings,
    inspect_document,
    pca_colors,
    pca_project,
    scale_to_rgb,
)
from rendnet.tests.factories import small_pipeline, toy_doc
from rendnet.vgdoc import Line, VGDocument


def ply_vertex_count(path):
    for line in path.read_text(encoding="utf-8").splitlines():
        if line.startswith("element vertex"):
            return int(line.split()[-1])
    raise AssertionError("no vertex element")


@pytest.mark.unit
class TestColoring:
    def test_projection_orders_components_by_variance(self, rng):
        features = np.column_stack([rng.normal(0, 10.0, 50), rng.normal(0, 1.0, 50), rng.normal(0, 0.1, 50)])
        projected = pca_project(features)
        spread = projected.var(axis=0)
        assert spread[0] > spread[1] > spread[2]
        assert np.allclose(projected.mean(axis=0), 0.0, atol=1e-9)

    def test_narrow_features_pad_with_zeros(self, rng):
        projected = pca_project(rng.normal(size=(10, 2)))
        assert projected.shape == (10, 3)
        assert np.all(projected[:, 2] == 0.0)
        assert np.all(pca_project(np.ones((1, 5))) == 0.0)

    def test_scale_to_rgb(self):
        colors = scale_to_rgb(np.array([[0.0, 1.0, 5.0], [2.0, 3.0, 5.0], [1.0, 2.0, 5.0]]))
        assert colors.dtype == np.uint8
        assert colors[:, 0].tolist() == [0, 255, 128]
        assert colors[:, 2].tolist() == [0, 0, 0]

    def test_pca_colors_span_the_range(self, rng):
        colors = pca_colors(rng.normal(size=(20, 6)))
        assert colors.min(axis=0).tolist() == [0, 0, 0]
        assert colors.max(axis=0).tolist() == [255, 255, 255]


class TestInspectDocument:
    def test_without_checkpoint(self, tmp_path, pipeline):
        doc = toy_doc()
        written = inspect_document(doc, tmp_path / "toy", pipeline=pipeline)
        assert [p.name for p in written] == ["toy.hypergraph.txt", "toy.fragments.ply"]
        assert written[0].read_text(encoding="utf-8").strip()
        sample = prepare_document(doc, pipeline)
        assert ply_vertex_count(written[1]) == sample.plan.num_fragments

    def test_default_pipeline_follows_document(self, tmp_path):
        doc = VGDocument(3, [Line((0.0, 0.0, 0.0), (1.0, 0.0, 1.0))], ())
        written = inspect_document(doc, tmp_path / "line3d")
        assert len(written) == 2

    def test_with_checkpoint_file(self, tmp_path, pipeline):
        path = tmp_path / "model.rnd"
        save_checkpoint(init_params(pipeline.model), pipeline, path)
        written = inspect_document(toy_doc(), tmp_path / "toy", checkpoint=path)
        assert written[-1].name == "toy.features.ply"
        text = written[-1].read_text(encoding="utf-8")
        assert "property uchar red" in text
        assert ply_vertex_count(written[-1]) == ply_vertex_count(written[1])

    def test_embeddings_cover_every_fragment(self, pipeline):
        params = init_params(pipeline.model)
        sample = prepare_document(toy_doc(), pipeline)
        embeddings = fragment_embeddings(params, sample)
        assert embeddings.shape == (sample.plan.num_fragments, pipeline.model.hidden)

    def test_pointnet_has_no_embeddings(self, tmp_path):
        pipeline = small_pipeline(mode="pointnet-only")
        checkpoint = Checkpoint(init_params(pipeline.model), pipeline)
        with pytest.raises(DomainError, match="pointnet"):
            inspect_document(toy_doc(), tmp_path / "toy", checkpoint=checkpoint)

    def test_dimension_must_match_checkpoint(self, tmp_path):
        pipeline = small_pipeline(dim=3)
        checkpoint = Checkpoint(init_params(pipeline.model), pipeline)
        with pytest.raises(DomainError, match="3D"):
            inspect_document(toy_doc(), tmp_path / "toy", checkpoint=checkpoint)
        assert not list(tmp_path.iterdir())
