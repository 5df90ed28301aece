"""
Base parser interface for vector-graphics document files.
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional

from rendnet.vgdoc import VGDocument


@dataclass
class ParsedDocument:
    """A parsed document together with where it came from."""
    document: VGDocument
    source_format: str  # canonical or svg
    metadata: Optional[Dict[str, str]] = field(default_factory=dict)


class BaseParser(ABC):
    """Base parser for turning a file into a VGDocument."""

    source_format: str = ""

    def __init__(self, file_path: str):
        self.file_path = file_path
        if not self._is_valid_file():
            raise ValueError(f"Invalid or unreadable file: {file_path}")

    def _is_valid_file(self) -> bool:
        """Check if file exists and is readable."""
        path = Path(self.file_path)
        return path.exists() and path.is_file()

    def parse(self) -> ParsedDocument:
        """Read the file as UTF-8 and parse it."""
        text = Path(self.file_path).read_text(encoding="utf-8")
        return ParsedDocument(
            document=self.parse_text(text),
            source_format=self.source_format,
            metadata={"path": str(self.file_path)},
        )

    @abstractmethod
    def parse_text(self, text: str) -> VGDocument:
        """Parse document text."""
        pass
