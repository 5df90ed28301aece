# ABOUTME: Loads a generated dataset, checks labels against class directories, and prepares samples
# ABOUTME: Preparation runs on an order-preserving thread pool and is memoized in an LRU cache

import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from cachetools import LRUCache

from rendnet.config import get_settings
from rendnet.exceptions import DatasetError
from rendnet.models.batch import PreparedSample, prepare_document
from rendnet.models.config import PipelineConfig
from rendnet.parsers import document_digest, load_document
from rendnet.services.synth_service import DatasetManifest, load_manifest
from rendnet.utils.serialization import digest_of
from rendnet.vgdoc import VGDocument

logger = logging.getLogger(__name__)


def preparation_key(config: PipelineConfig) -> str:
    """Digest of the settings that shape a prepared sample."""
    return digest_of({
        "hypergraph": config.hypergraph,
        "raster": config.raster,
        "knn_k": config.model.knn_k,
    })


class DatasetService:
    """
    Reads documents listed in a manifest and turns them into prepared samples.

    Prepared samples are cached by (document digest, preparation settings), so
    training, evaluation and ablation runs over the same data share the work.
    """

    def __init__(
        self,
        root: Union[str, Path],
        pipeline: Optional[PipelineConfig] = None,
        workers: Optional[int] = None,
        cache_size: Optional[int] = None,
    ):
        settings = get_settings()
        self.root = Path(root)
        self.pipeline = pipeline or PipelineConfig()
        self.workers = workers or settings.runtime.workers
        self._cache: LRUCache = LRUCache(maxsize=cache_size or settings.runtime.plan_cache_size)
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0
        self._manifest: Optional[DatasetManifest] = None

    @property
    def manifest(self) -> DatasetManifest:
        if self._manifest is None:
            self._manifest = load_manifest(self.root)
        return self._manifest

    def split_dim(self, split: str) -> int:
        if split not in self.manifest.dims:
            raise DatasetError(f"split '{split}' not in dataset (have {sorted(self.manifest.dims)})")
        return self.manifest.dims[split]

    def load_split(self, split: str) -> List[VGDocument]:
        """Parse every document of a split; labels must match their class directory."""
        manifest = self.manifest
        dim = self.split_dim(split)
        docs = []
        for rel, path in zip(manifest.splits[split], manifest.files(split)):
            doc = load_document(str(path))
            expected = manifest.label_of(rel)
            if doc.label != expected:
                raise DatasetError(f"{rel}: label {doc.label} does not match class directory ({expected})")
            if doc.dim != dim:
                raise DatasetError(f"{rel}: dimension {doc.dim}, split '{split}' is {dim}D")
            docs.append(doc)
        logger.info(f"Loaded {len(docs)} documents from split '{split}'")
        return docs

    def _key(self, doc: VGDocument) -> Tuple[str, str]:
        return document_digest(doc), preparation_key(self.pipeline)

    def prepare(self, doc: VGDocument) -> PreparedSample:
        key = self._key(doc)
        with self._lock:
            sample = self._cache.get(key)
            if sample is not None:
                self.hits += 1
                return sample
            self.misses += 1
        sample = prepare_document(doc, self.pipeline)
        with self._lock:
            self._cache[key] = sample
        return sample

    def prepare_many(self, docs: Sequence[VGDocument]) -> List[PreparedSample]:
        """Prepared samples in input order."""
        if self.workers <= 1:
            return [self.prepare(doc) for doc in docs]
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            return list(pool.map(self.prepare, docs))

    def samples(self, split: str) -> List[PreparedSample]:
        return self.prepare_many(self.load_split(split))

    def with_pipeline(self, pipeline: PipelineConfig) -> "DatasetService":
        """Same data and cache under another pipeline configuration."""
        other = DatasetService(self.root, pipeline, self.workers, self._cache.maxsize)
        other._cache = self._cache
        other._lock = self._lock
        other._manifest = self._manifest
        return other

    def cache_info(self) -> Dict[str, int]:
        with self._lock:
            return {"hits": self.hits, "misses": self.misses, "size": len(self._cache), "maxsize": int(self._cache.maxsize)}
