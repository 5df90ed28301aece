# ABOUTME: Exception hierarchy shared by every RendNet subpackage
# ABOUTME: All errors derive from ValueError so callers can keep catching bad input the usual way

from typing import Optional


class RendNetError(ValueError):
    """Root of all errors raised for bad documents, models or files."""


class DocumentSyntaxError(RendNetError):
    """Malformed document text."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class DocumentValidationError(RendNetError):
    """Well-formed document that violates a geometric or schema invariant."""

    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{path}: {message}" if path else message)
        self.message = message
        self.path = path

    def under(self, prefix: str) -> "DocumentValidationError":
        """Same error with `prefix` prepended to the field path."""
        path = f"{prefix}.{self.path}" if self.path else prefix
        return DocumentValidationError(self.message, path=path)


class UnsupportedSvgError(RendNetError):
    """SVG element, attribute or path command outside the supported subset."""

    def __init__(self, message: str, offset: Optional[int] = None):
        super().__init__(message if offset is None else f"{message} at token offset {offset}")
        self.offset = offset


class PathSyntaxError(RendNetError):
    """Malformed SVG path data; `offset` is the index of the offending token."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at token offset {offset}")
        self.offset = offset


class DomainError(RendNetError):
    """Argument outside the domain of a geometric operation."""


class DegenerateGeometryError(RendNetError):
    """Zero extent, zero area, or otherwise collapsed geometry."""


class DegenerateTriangulationError(DegenerateGeometryError):
    """Fewer than three points, or all points collinear."""


class ShapeMismatchError(RendNetError):
    """Array shapes that do not line up."""


class TrainingDivergedError(RendNetError):
    """Loss became NaN or infinite."""


class DatasetError(RendNetError):
    """Dataset manifest or directory is unusable."""


class CheckpointError(RendNetError):
    """Base for checkpoint read failures; `field` names the failing part."""

    def __init__(self, message: str, field: str = ""):
        super().__init__(f"{message} [{field}]" if field else message)
        self.field = field


class CheckpointMagicError(CheckpointError):
    pass


class CheckpointVersionError(CheckpointError):
    pass


class CheckpointShapeError(CheckpointError):
    pass


class CheckpointDigestError(CheckpointError):
    pass


class CheckpointTruncatedError(CheckpointError):
    pass
