# ABOUTME: ASCII PLY export of point clouds with optional per-vertex RGB colors
# ABOUTME: 2D points are written with z = 0

from pathlib import Path
from typing import Optional, Union

import numpy as np

from rendnet.exceptions import ShapeMismatchError
from rendnet.utils.serialization import atomic_write


def ply_text(points: np.ndarray, colors: Optional[np.ndarray] = None) -> str:
    """PLY document for (N, 2|3) points and optional (N, 3) colors in [0, 255]."""
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[1] not in (2, 3):
        raise ShapeMismatchError(f"points must have shape (N, 2) or (N, 3), got {points.shape}")
    if points.shape[1] == 2:
        points = np.hstack([points, np.zeros((len(points), 1))])
    if colors is not None:
        colors = np.asarray(colors)
        if colors.shape != (len(points), 3):
            raise ShapeMismatchError(f"colors must have shape ({len(points)}, 3), got {colors.shape}")
        if np.any(colors < 0) or np.any(colors > 255):
            raise ValueError("colors must lie in [0, 255]")
        colors = colors.astype(np.uint8)

    header = ["ply", "format ascii 1.0", f"element vertex {len(points)}"]
    header += [f"property double {axis}" for axis in "xyz"]
    if colors is not None:
        header += [f"property uchar {channel}" for channel in ("red", "green", "blue")]
    header.append("end_header")

    rows = []
    for i, p in enumerate(points):
        row = " ".join(f"{v:.17g}" for v in p)
        if colors is not None:
            row += " " + " ".join(str(int(c)) for c in colors[i])
        rows.append(row)
    return "\n".join(header + rows) + "\n"


def write_ply(path: Union[str, Path], points: np.ndarray, colors: Optional[np.ndarray] = None) -> None:
    atomic_write(path, ply_text(points, colors))
