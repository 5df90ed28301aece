# ABOUTME: Tests for ASCII PLY point cloud rendering

import numpy as np
import pytest

from rendnet.exceptions import ShapeMismatchError
from rendnet.utils.ply import ply_text, write_ply


def test_planar_points_get_zero_z():
    text = ply_text(np.array([[0.5, 1.0], [2.0, -1.0]]))
    lines = text.splitlines()
    assert lines[:6] == [
        "ply",
        "format ascii 1.0",
        "element vertex 2",
        "property double x",
        "property double y",
        "property double z",
    ]
    assert lines[6] == "end_header"
    assert lines[7:] == ["0.5 1 0", "2 -1 0"]


def test_colors_add_uchar_properties(tmp_path):
    path = tmp_path / "cloud.ply"
    write_ply(path, np.zeros((1, 3)), np.array([[255, 0, 12]]))
    lines = path.read_text(encoding="utf-8").splitlines()
    assert "property uchar blue" in lines
    assert lines[-1] == "0 0 0 255 0 12"


def test_full_precision_coordinates():
    value = 0.1 + 0.2
    row = ply_text(np.array([[value, 0.0, 0.0]])).splitlines()[-1]
    assert float(row.split()[0]) == value


@pytest.mark.parametrize("points", [np.zeros((3,)), np.zeros((2, 4))])
def test_bad_point_shapes(points):
    with pytest.raises(ShapeMismatchError):
        ply_text(points)


def test_bad_colors():
    with pytest.raises(ShapeMismatchError):
        ply_text(np.zeros((2, 2)), np.zeros((3, 3)))
    with pytest.raises(ValueError, match="255"):
        ply_text(np.zeros((1, 2)), np.array([[0, 0, 300]]))
