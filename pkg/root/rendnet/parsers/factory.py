"""
Parser selection for document files, by extension or by an explicit format name.
"""
from pathlib import Path
from typing import Dict, List, Optional, Type, Union

from rendnet.vgdoc import VGDocument

from .base import BaseParser
from .canonical_parser import CanonicalParser
from .svg_parser import SvgParser


class ParserFactory:
    """Maps file extensions and format names to document parsers."""

    _FILE_EXTENSIONS: Dict[str, Type[BaseParser]] = {
        '.json': CanonicalParser,
        '.svg': SvgParser,
    }

    @classmethod
    def parser_class(cls, file_path: Union[str, Path], source_format: Optional[str] = None) -> Type[BaseParser]:
        """Parser class for `file_path`, or for `source_format` when given.

        Raises:
            ValueError: If neither the extension nor the format name is known
        """
        if source_format is not None:
            for parser_class in cls._FILE_EXTENSIONS.values():
                if parser_class.source_format == source_format:
                    return parser_class
            formats = sorted({p.source_format for p in cls._FILE_EXTENSIONS.values()})
            raise ValueError(f"Unknown document format: {source_format}. Known formats are: {', '.join(formats)}")

        file_ext = Path(file_path).suffix.lower()
        if file_ext not in cls._FILE_EXTENSIONS:
            raise ValueError(
                f"Unsupported file type: {file_ext or '(none)'}. "
                f"Supported types are: {', '.join(cls._FILE_EXTENSIONS)}"
            )
        return cls._FILE_EXTENSIONS[file_ext]

    @classmethod
    def get_parser(cls, file_path: Union[str, Path], source_format: Optional[str] = None) -> BaseParser:
        """Parser instance bound to `file_path`; fails if the file is missing."""
        return cls.parser_class(file_path, source_format)(str(file_path))

    @classmethod
    def register_parser(cls, extension: str, parser_class: Type[BaseParser]) -> None:
        """Route files ending in `extension` (e.g. '.vgjson') to `parser_class`."""
        if not extension.startswith('.'):
            raise ValueError("Extension must start with a dot")
        if not (isinstance(parser_class, type) and issubclass(parser_class, BaseParser)):
            raise ValueError("Parser class must inherit from BaseParser")
        cls._FILE_EXTENSIONS[extension.lower()] = parser_class

    @classmethod
    def supported_extensions(cls) -> List[str]:
        return list(cls._FILE_EXTENSIONS)


def load_document(file_path: Union[str, Path], source_format: Optional[str] = None) -> VGDocument:
    """Parse `file_path` with the parser for its extension, or for `source_format`."""
    return ParserFactory.get_parser(file_path, source_format).parse().document
