# ABOUTME: Procedural generator for the eight-class synthetic symbol dataset (2D plus planar-in-3D splits)
# ABOUTME: Every document is drawn from its own seeded stream, so a fixed seed regenerates identical bytes

import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from rendnet.exceptions import DatasetError
from rendnet.hypergraph import build_hypergraph
from rendnet.models.config import HypergraphConfig, SynthSpec
from rendnet.parsers import serialize_canonical
from rendnet.utils.serialization import atomic_write, digest_of, write_json
from rendnet.vgdoc import Arc, CurveSpec, Disk, Line, Polygon, QuadBezier, Rect, SurfaceSpec, VGDocument, boundary_curves

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
SPLIT_CODES = {"train": 0, "test": 1, "train3d": 2, "test3d": 3}
GAP_TOL_MULTIPLE = 5.0
ARCH_SAMPLES = 16

Parts = Tuple[List[CurveSpec], List[SurfaceSpec]]


@dataclass
class DatasetManifest:
    """Index of a generated dataset; paths are relative to `root`."""
    classes: List[str]
    splits: Dict[str, List[str]]
    dims: Dict[str, int]
    seed: int
    spec_digest: str
    root: Path = field(default=Path("."), compare=False)

    def files(self, split: str) -> List[Path]:
        if split not in self.splits:
            raise DatasetError(f"split '{split}' not in dataset (have {sorted(self.splits)})")
        return [self.root / rel for rel in self.splits[split]]

    def label_of(self, rel_path: str) -> int:
        """Class index from the class directory of a listed file."""
        parts = Path(rel_path).parts
        if len(parts) != 3 or parts[1] not in self.classes:
            raise DatasetError(f"{rel_path}: not under <split>/<class>/")
        return self.classes.index(parts[1])

    def to_dict(self) -> Dict:
        return {
            "classes": self.classes,
            "splits": self.splits,
            "dims": self.dims,
            "seed": self.seed,
            "spec_digest": self.spec_digest,
        }

    @classmethod
    def from_dict(cls, data: Dict, root: Union[str, Path]) -> "DatasetManifest":
        try:
            manifest = cls(
                classes=list(data["classes"]),
                splits={k: list(v) for k, v in data["splits"].items()},
                dims={k: int(v) for k, v in data["dims"].items()},
                seed=int(data["seed"]),
                spec_digest=str(data["spec_digest"]),
                root=Path(root),
            )
        except (KeyError, TypeError, AttributeError, ValueError) as e:
            raise DatasetError(f"malformed manifest in {root}: {e}") from e
        for split, paths in manifest.splits.items():
            for rel in paths:
                manifest.label_of(rel)
        return manifest


def load_manifest(root: Union[str, Path]) -> DatasetManifest:
    root = Path(root)
    path = root / MANIFEST_NAME
    if not path.exists():
        raise DatasetError(f"no {MANIFEST_NAME} under {root}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise DatasetError(f"{path}: invalid JSON ({e.msg})") from e
    return DatasetManifest.from_dict(data, root)


# ============================================================================
# Symbol builders: shapes in [-1, 1]^2 before the per-document similarity
# ============================================================================

def _jitter(rng: np.random.Generator, value: float, rel: float) -> float:
    return value * (1.0 + rng.uniform(-rel, rel))


def _outlined(surface: SurfaceSpec) -> Parts:
    return boundary_curves(surface), [surface]


def _circle_quarters(center, radius: float, phase: float = 0.0) -> List[CurveSpec]:
    return [Arc(center, radius, phase + k * math.pi / 2, math.pi / 2) for k in range(4)]


def _square(rng, jitter) -> Parts:
    half = _jitter(rng, 1.0, jitter)
    return _outlined(Rect((-half, -half), (2 * half, 0.0), (0.0, 2 * half)))


def square_round_hole(rng, jitter) -> Parts:
    curves, surfaces = _square(rng, jitter)
    radius = _jitter(rng, 0.4, jitter)
    return curves + _circle_quarters((0.0, 0.0), radius), surfaces


def square_stadium_hole(rng, jitter) -> Parts:
    """Same node, edge and hyperedge counts as square_round_hole.

    The round hole is four quarter arcs, each topped up to four nodes. Here two
    half arcs carry four nodes each and every straight side is three collinear
    lines, so both holes have twelve nodes and twelve edges.
    """
    curves, surfaces = _square(rng, jitter)
    a = _jitter(rng, 0.3, jitter)
    r = _jitter(rng, 0.3, jitter)
    xs = np.linspace(a, -a, 4)
    top = [Line((xs[k], r), (xs[k + 1], r)) for k in range(3)]
    bottom = [Line((-xs[k], -r), (-xs[k + 1], -r)) for k in range(3)]
    hole = [Arc((a, 0.0), r, -math.pi / 2, math.pi), *top, Arc((-a, 0.0), r, math.pi / 2, math.pi), *bottom]
    return curves + hole, surfaces


def _t_junction(rng, jitter, gap_multiple: float) -> Parts:
    width = _jitter(rng, 0.8, jitter)
    bar_y = _jitter(rng, 0.6, jitter)
    stem_x = rng.uniform(-0.3, 0.3)
    stem_bottom = _jitter(rng, -0.4, jitter)
    base_h = _jitter(rng, 0.4, jitter)
    bar = Line((-width, bar_y), (width, bar_y))
    base_curves, base_surfaces = _outlined(Rect((-width, -1.0), (2 * width, 0.0), (0.0, base_h)))

    gap = 0.0
    if gap_multiple > 0.0:
        # normalization maps the bbox diagonal to 2, so this is gap_multiple * tol after normalizing
        diagonal = VGDocument(2, [bar] + base_curves, base_surfaces).bbox().diagonal
        gap = gap_multiple * HypergraphConfig().tol * diagonal / 2.0
    stem = Line((stem_x, stem_bottom), (stem_x, bar_y - gap))
    return [bar, stem] + base_curves, base_surfaces


def t_junction_touching(rng, jitter) -> Parts:
    return _t_junction(rng, jitter, 0.0)


def t_junction_gap(rng, jitter) -> Parts:
    """Stem stops just short of the bar: a few merge tolerances, invisible at raster resolution."""
    return _t_junction(rng, jitter, GAP_TOL_MULTIPLE)


def triangle_with_disk(rng, jitter) -> Parts:
    apex = _jitter(rng, 1.0, jitter)
    base = _jitter(rng, 1.0, jitter)
    triangle = Polygon(((-base, -0.8), (base, -0.8), (0.0, apex)))
    radius = _jitter(rng, 0.35, jitter)
    center = (0.0, -0.2)
    disk = Disk(center, radius)
    return boundary_curves(triangle) + _circle_quarters(center, radius), [triangle, disk]


def l_shape(rng, jitter) -> Parts:
    inner_x = _jitter(rng, -0.3, jitter)
    inner_y = _jitter(rng, -0.3, jitter)
    ring = ((-1.0, -1.0), (1.0, -1.0), (1.0, inner_y), (inner_x, inner_y), (inner_x, 1.0), (-1.0, 1.0))
    return _outlined(Polygon(ring))


def bezier_arch(rng, jitter) -> Parts:
    half = _jitter(rng, 0.8, jitter)
    door = _jitter(rng, 0.25, jitter)
    spring = _jitter(rng, 0.2, jitter)
    crown = _jitter(rng, 1.4, jitter)
    top = QuadBezier((half, spring), (0.0, crown), (-half, spring))
    base = [(-half, -1.0), (-door, -1.0), (door, -1.0), (half, -1.0)]
    curves: List[CurveSpec] = [Line(base[k], base[k + 1]) for k in range(3)]
    curves += [Line((half, -1.0), (half, spring)), top, Line((-half, spring), (-half, -1.0))]
    arch = [tuple(p) for p in top.point_at(np.arange(1, ARCH_SAMPLES) / ARCH_SAMPLES)]
    ring = ((-half, -1.0), (half, -1.0), (half, spring), *arch, (-half, spring))
    return curves, [Polygon(ring)]


def cross_in_disk(rng, jitter) -> Parts:
    radius = _jitter(rng, 1.0, jitter)
    disk = Disk((0.0, 0.0), radius)
    rim = [
        Arc((0.0, 0.0), radius, math.pi / 4, math.pi),
        Arc((0.0, 0.0), radius, 5 * math.pi / 4, math.pi),
    ]
    bars = [Line((-radius, 0.0), (radius, 0.0)), Line((0.0, -radius), (0.0, radius))]
    return rim + bars, [disk]


SYMBOL_BUILDERS: Dict[str, Callable[[np.random.Generator, float], Parts]] = {
    "square_round_hole": square_round_hole,
    "square_stadium_hole": square_stadium_hole,
    "t_junction_touching": t_junction_touching,
    "t_junction_gap": t_junction_gap,
    "triangle_with_disk": triangle_with_disk,
    "l_shape": l_shape,
    "bezier_arch": bezier_arch,
    "cross_in_disk": cross_in_disk,
}


# ============================================================================
# Placement
# ============================================================================

def random_similarity(rng: np.random.Generator, spec: SynthSpec) -> Tuple[np.ndarray, np.ndarray]:
    theta = math.radians(rng.uniform(-spec.rotation_jitter_deg, spec.rotation_jitter_deg))
    scale = 1.0 + rng.uniform(-spec.scale_jitter, spec.scale_jitter)
    c, s = math.cos(theta), math.sin(theta)
    A = scale * np.array([[c, -s], [s, c]])
    return A, rng.uniform(-1.0, 1.0, size=2)


def random_plane(rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """Orthonormal 3x2 frame and an origin placing the plane z=0 somewhere in 3D."""
    frame, _ = np.linalg.qr(rng.normal(size=(3, 2)))
    return frame, rng.uniform(-1.0, 1.0, size=3)


def make_symbol(spec: SynthSpec, class_name: str, split: str, index: int) -> VGDocument:
    """One labelled document; depends only on (spec, class, split, index)."""
    if class_name not in SYMBOL_BUILDERS:
        raise DatasetError(f"unknown symbol class '{class_name}'")
    label = spec.classes.index(class_name)
    class_code = list(SYMBOL_BUILDERS).index(class_name)
    rng = np.random.default_rng([spec.seed, SPLIT_CODES[split], class_code, index])

    curves, surfaces = SYMBOL_BUILDERS[class_name](rng, spec.vertex_jitter)
    doc = VGDocument(2, curves, surfaces, label)
    A, b = random_similarity(rng, spec)
    if split.endswith("3d"):
        frame, origin = random_plane(rng)
        A, b = frame @ A, frame @ b + origin
    return doc.mapped(A, b)


def _per_class(total: int, classes: List[str], split: str) -> int:
    if total % len(classes):
        raise DatasetError(f"{split} size {total} is not divisible by {len(classes)} classes")
    return total // len(classes)


def generate_dataset(spec: SynthSpec, out_dir: Union[str, Path], workers: int = 1) -> DatasetManifest:
    """Write `<out>/<split>/<class>/<index>.json` for every document plus manifest.json."""
    out_dir = Path(out_dir)
    sizes = {"train": spec.train, "test": spec.test}
    if spec.dim3:
        sizes.update({"train3d": spec.train, "test3d": spec.test})

    tasks = []
    for split, total in sizes.items():
        count = _per_class(total, spec.classes, split)
        for class_name in spec.classes:
            tasks += [(split, class_name, i) for i in range(count)]

    def write_one(task) -> str:
        split, class_name, i = task
        rel = f"{split}/{class_name}/{i:04d}.json"
        atomic_write(out_dir / rel, serialize_canonical(make_symbol(spec, class_name, split, i)))
        return rel

    logger.info(f"Generating {len(tasks)} documents into {out_dir} with {workers} worker(s)")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        written = list(pool.map(write_one, tasks))

    splits: Dict[str, List[str]] = {split: [] for split in sizes}
    for (split, _, _), rel in zip(tasks, written):
        splits[split].append(rel)

    manifest = DatasetManifest(
        classes=list(spec.classes),
        splits=splits,
        dims={split: 3 if split.endswith("3d") else 2 for split in sizes},
        seed=spec.seed,
        spec_digest=digest_of(spec),
        root=out_dir,
    )
    write_json(out_dir / MANIFEST_NAME, manifest.to_dict())
    logger.info(f"Dataset written: {', '.join(f'{k}={len(v)}' for k, v in splits.items())}")
    return manifest


def structural_counts(doc: VGDocument, config: Optional[HypergraphConfig] = None) -> Tuple[int, int, int]:
    """(nodes, edges, hyperedges) of a document's hypergraph."""
    graph = build_hypergraph(doc, config)
    return graph.num_nodes, len(graph.edges), len(graph.surfaces)
