"""
Document parsers: the canonical JSON format and an SVG subset importer.
"""

from .base import BaseParser, ParsedDocument
from .canonical_parser import CanonicalParser, document_digest, parse_canonical, serialize_canonical
from .svg_parser import SvgParser, parse_svg
from .factory import ParserFactory, load_document

__all__ = [
    'BaseParser',
    'ParsedDocument',
    'CanonicalParser',
    'SvgParser',
    'ParserFactory',
    'document_digest',
    'load_document',
    'parse_canonical',
    'parse_svg',
    'serialize_canonical',
]
