"""
Serialization utilities for handling model serialization consistently across the application.
Provides functions to standardize serialization of configs, metrics and geometry to JSON,
content digests, and atomic file writes.
"""
import os
import json
import enum
import hashlib
import tempfile
import dataclasses
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np
from pydantic import BaseModel


def serialize_object(obj: Any, depth: int = 0, max_depth: int = 10) -> Any:
    """
    Recursively serialize an object to a JSON-serializable format.

    This function handles various types of objects:
    - Pydantic models using model_dump(mode="json")
    - Dataclasses field by field
    - numpy arrays and scalars as lists / Python numbers
    - Enums by value
    - Lists, tuples, and sets by recursively serializing elements
    - Dictionaries by recursively serializing keys and values

    Args:
        obj: Any object to serialize
        depth: Current recursion depth (used internally)
        max_depth: Maximum allowed recursion depth

    Returns:
        JSON-serializable representation of the object
    """
    if depth > max_depth:
        return str(obj)

    if obj is None:
        return None

    if isinstance(obj, BaseModel):
        return obj.model_dump(mode="json")

    if isinstance(obj, enum.Enum):
        return obj.value

    if isinstance(obj, np.ndarray):
        return obj.tolist()

    if isinstance(obj, np.generic):
        return obj.item()

    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {
            f.name: serialize_object(getattr(obj, f.name), depth + 1, max_depth)
            for f in dataclasses.fields(obj)
        }

    if isinstance(obj, (list, tuple, set)):
        return [serialize_object(item, depth + 1, max_depth) for item in obj]

    if isinstance(obj, dict):
        return {str(k): serialize_object(v, depth + 1, max_depth) for k, v in obj.items()}

    if isinstance(obj, (str, int, float, bool)):
        return obj

    return str(obj)


def to_json(obj: Any, indent: Optional[int] = None) -> str:
    """
    Convert an object to a JSON string.

    Args:
        obj: Any object to convert to JSON
        indent: Optional indentation level for pretty-printing

    Returns:
        JSON string representation of the object
    """
    return json.dumps(serialize_object(obj), indent=indent)


def canonical_json(obj: Any) -> str:
    """Compact, key-sorted JSON used for digests and checkpoint headers."""
    return json.dumps(serialize_object(obj), sort_keys=True, separators=(",", ":"))


def sha256_hex(data: Union[str, bytes]) -> str:
    if isinstance(data, str):
        data = data.encode("utf-8")
    return hashlib.sha256(data).hexdigest()


def digest_of(obj: Any) -> str:
    """SHA-256 over the canonical JSON of `obj`."""
    return sha256_hex(canonical_json(obj))


def atomic_write(file_path: Union[str, Path], data: Union[str, bytes]) -> None:
    """
    Atomically write text or bytes to file using temp file + rename.

    Args:
        file_path: Target file path
        data: Text (written as UTF-8) or raw bytes
    """
    file_path = Path(file_path)
    file_path.parent.mkdir(parents=True, exist_ok=True)
    temp_fd, temp_path = tempfile.mkstemp(
        dir=file_path.parent,
        prefix='.tmp_',
        suffix=file_path.suffix,
    )

    try:
        mode = 'wb' if isinstance(data, bytes) else 'w'
        kwargs = {} if isinstance(data, bytes) else {'encoding': 'utf-8', 'newline': ''}
        with os.fdopen(temp_fd, mode, **kwargs) as f:
            f.write(data)

        Path(temp_path).replace(file_path)

    except Exception as e:
        try:
            os.unlink(temp_path)
        except OSError:
            pass
        raise e


def write_json(file_path: Union[str, Path], obj: Any, indent: Optional[int] = 2) -> None:
    atomic_write(file_path, json.dumps(serialize_object(obj), indent=indent, ensure_ascii=False) + "\n")
