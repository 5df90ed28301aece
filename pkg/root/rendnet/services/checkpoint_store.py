# ABOUTME: Binary checkpoint format: magic, version, JSON header, then named float64 arrays
# ABOUTME: Every read failure raises a distinct CheckpointError naming the failing field

"""
Layout (little-endian throughout):

    b"RNDN1"
    u32 version
    u32 header length, header JSON (pipeline config, config digest, metadata, array count)
    repeated: u32 name length, name (UTF-8), u32 rank, u32 dims x rank, f64 payload

Arrays are written in ModelParams.tensors() order, batch-norm running statistics included.
"""

import json
import logging
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
from pydantic import ValidationError

from rendnet.exceptions import (
    CheckpointDigestError,
    CheckpointError,
    CheckpointMagicError,
    CheckpointShapeError,
    CheckpointTruncatedError,
    CheckpointVersionError,
)
from rendnet.models.config import PipelineConfig
from rendnet.models.params import ModelParams, init_params
from rendnet.utils.serialization import atomic_write, canonical_json, digest_of

logger = logging.getLogger(__name__)

MAGIC = b"RNDN1"
FORMAT_VERSION = 1
U32 = struct.Struct("<I")


@dataclass
class Checkpoint:
    params: ModelParams
    pipeline: PipelineConfig
    metadata: Dict[str, Any] = field(default_factory=dict)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.offset = 0

    def take(self, n: int, field_name: str) -> bytes:
        if self.offset + n > len(self.data):
            raise CheckpointTruncatedError("unexpected end of checkpoint", field=field_name)
        chunk = self.data[self.offset:self.offset + n]
        self.offset += n
        return chunk

    def u32(self, field_name: str) -> int:
        return U32.unpack(self.take(U32.size, field_name))[0]

    @property
    def exhausted(self) -> bool:
        return self.offset == len(self.data)


def encode_checkpoint(params: ModelParams, pipeline: PipelineConfig, metadata: Optional[Dict[str, Any]] = None) -> bytes:
    if pipeline.model != params.config:
        raise CheckpointError("pipeline model config does not match the parameters", field="config")
    tensors = params.tensors()
    header = {
        "config": pipeline.model_dump(mode="json"),
        "config_digest": digest_of(pipeline),
        "metadata": metadata or {},
        "arrays": len(tensors),
    }
    header_bytes = canonical_json(header).encode("utf-8")

    out = bytearray(MAGIC)
    out += U32.pack(FORMAT_VERSION)
    out += U32.pack(len(header_bytes)) + header_bytes
    for name, array in tensors.items():
        array = np.asarray(array, dtype="<f8")
        name_bytes = name.encode("utf-8")
        out += U32.pack(len(name_bytes)) + name_bytes
        out += U32.pack(array.ndim)
        out += b"".join(U32.pack(d) for d in array.shape)
        out += array.tobytes(order="C")
    return bytes(out)


def decode_checkpoint(data: bytes) -> Checkpoint:
    reader = _Reader(data)
    if reader.take(len(MAGIC), "magic") != MAGIC:
        raise CheckpointMagicError("not a RendNet checkpoint", field="magic")
    version = reader.u32("version")
    if version != FORMAT_VERSION:
        raise CheckpointVersionError(f"unsupported checkpoint version {version} (expected {FORMAT_VERSION})", field="version")

    header_raw = reader.take(reader.u32("header length"), "header")
    try:
        header = json.loads(header_raw.decode("utf-8"))
        pipeline = PipelineConfig(**header["config"])
    except (UnicodeDecodeError, json.JSONDecodeError, KeyError, TypeError, ValidationError) as e:
        raise CheckpointError(f"unreadable checkpoint header: {e}", field="header") from e
    if digest_of(pipeline) != header.get("config_digest"):
        raise CheckpointDigestError("config digest does not match the embedded config", field="config_digest")

    params = init_params(pipeline.model)
    expected = params.tensors()
    if header.get("arrays") != len(expected):
        raise CheckpointShapeError(
            f"checkpoint lists {header.get('arrays')} arrays, config needs {len(expected)}", field="arrays"
        )

    loaded: Dict[str, np.ndarray] = {}
    for _ in range(len(expected)):
        name_raw = reader.take(reader.u32("name length"), "name")
        name = name_raw.decode("utf-8", errors="replace")
        if name not in expected or name in loaded:
            raise CheckpointShapeError(f"unexpected array '{name}'", field=name)
        rank = reader.u32(f"{name}.rank")
        shape = tuple(reader.u32(f"{name}.dims") for _ in range(rank))
        if shape != expected[name].shape:
            raise CheckpointShapeError(f"shape {shape} != expected {expected[name].shape}", field=name)
        count = int(np.prod(shape, dtype=np.int64))
        payload = reader.take(8 * count, name)
        loaded[name] = np.frombuffer(payload, dtype="<f8").astype(np.float64).reshape(shape)
    if not reader.exhausted:
        raise CheckpointShapeError("trailing bytes after the last array", field="arrays")

    params.load_tensors(loaded)
    return Checkpoint(params, pipeline, dict(header.get("metadata") or {}))


def save_checkpoint(
    params: ModelParams,
    pipeline: PipelineConfig,
    path: Union[str, Path],
    metadata: Optional[Dict[str, Any]] = None,
) -> None:
    atomic_write(path, encode_checkpoint(params, pipeline, metadata))
    logger.info(f"Checkpoint written to {path}")


def load_checkpoint(path: Union[str, Path]) -> Checkpoint:
    data = Path(path).read_bytes()
    checkpoint = decode_checkpoint(data)
    logger.debug(f"Loaded checkpoint {path} (mode {checkpoint.pipeline.model.mode})")
    return checkpoint
