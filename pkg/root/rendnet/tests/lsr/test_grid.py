# ABOUTME: Tests for the spatial hash grid against brute-force nearest neighbors

import numpy as np
import pytest

from rendnet.exceptions import DegenerateGeometryError
from rendnet.lsr import SpatialGrid, knn_neighborhoods


def brute_force(fragments, nodes, k):
    rows = []
    index = np.arange(len(fragments))
    for node in nodes:
        diff = fragments - node
        d = np.sum(diff * diff, axis=1)
        rows.append(np.lexsort((index, d))[:k])
    return np.array(rows)


@pytest.mark.unit
class TestKnn:
    @pytest.mark.parametrize("dim", [2, 3])
    def test_matches_brute_force(self, rng, dim):
        fragments = rng.uniform(-1.0, 1.0, size=(300, dim))
        nodes = rng.uniform(-1.2, 1.2, size=(25, dim))
        result = knn_neighborhoods(fragments, nodes, 7)
        assert np.array_equal(result, brute_force(fragments, nodes, 7))

    def test_clustered_fragments(self, rng):
        fragments = np.concatenate([rng.normal(0.0, 0.01, size=(100, 2)), rng.normal(5.0, 0.01, size=(5, 2))])
        nodes = np.array([[5.0, 5.0], [2.5, 2.5], [-3.0, 0.0]])
        assert np.array_equal(knn_neighborhoods(fragments, nodes, 8), brute_force(fragments, nodes, 8))

    def test_ties_go_to_lower_index(self):
        fragments = np.array([[0.0, 1.0], [1.0, 0.0], [-1.0, 0.0], [0.0, -1.0]])
        assert knn_neighborhoods(fragments, np.zeros((1, 2)), 2).tolist() == [[0, 1]]

    def test_width_capped_by_fragment_count(self):
        fragments = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]])
        result = knn_neighborhoods(fragments, np.array([[2.0, 0.0], [0.1, 0.0]]), 16)
        assert result.tolist() == [[2, 1, 0], [0, 1, 2]]

    def test_coincident_fragments(self):
        fragments = np.zeros((5, 2))
        assert knn_neighborhoods(fragments, np.ones((1, 2)), 3).tolist() == [[0, 1, 2]]

    def test_rejects_bad_k(self):
        with pytest.raises(ValueError):
            knn_neighborhoods(np.zeros((2, 2)), np.zeros((1, 2)), 0)

    def test_rejects_empty_fragments(self):
        with pytest.raises(DegenerateGeometryError):
            knn_neighborhoods(np.zeros((0, 2)), np.zeros((1, 2)), 3)


def test_grid_query_with_explicit_cell_size(rng):
    points = rng.random((50, 2))
    grid = SpatialGrid(points, cell_size=0.05)
    query = np.array([0.5, 0.5])
    assert np.array_equal(grid.query(query, 5), brute_force(points, query[None, :], 5)[0])
