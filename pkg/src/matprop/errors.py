"""Exception types shared across the package."""


class MatrixSyntaxError(ValueError):
    """Bad matrix syntax; carries the character position."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class TermSyntaxError(ValueError):
    """Bad term syntax; carries the character position."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class RelationSyntaxError(ValueError):
    """Bad relation file; carries the 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"{message} (line {line})")
        self.line = line


class PointednessError(ValueError):
    """Pointed/non-pointed modes mixed or violated."""


class ResourceLimitError(RuntimeError):
    """A configured enumeration cap was exceeded."""
