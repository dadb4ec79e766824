"""
Exception hierarchy shared by every layer of cubeknot.

The CLI maps these onto exit codes: input problems (parse, IO, config) exit
with 3, an unresolved classification exits with 2.
"""

from typing import Any, List, Optional


class CubeknotError(Exception):
    """Base class for all cubeknot errors."""


class ComplexError(CubeknotError):
    """A cubical complex operation was called outside its preconditions."""


class DisconnectedComplexError(ComplexError):
    def __init__(self, components: int):
        self.components = components
        super().__init__(
            f"Complex is not connected: found {components} components"
        )


class CStructureError(CubeknotError):
    """Invalid alpha-collapse, broken boundary cycle or bad presentation request."""


class GroupError(CubeknotError):
    """Invalid coset table or malformed presentation text."""


class GridParseError(CubeknotError, ValueError):
    """
    Grid diagram text could not be turned into a valid diagram.

    `kind` is one of "syntax", "size", "marks", "rows" or "braid" so callers can tell
    the failure modes apart without matching on the message.
    """

    def __init__(self, kind: str, message: str):
        self.kind = kind
        super().__init__(message)


class EmbeddingError(CubeknotError):
    """The knot embedding violated one of its structural checks."""


class ClassificationIncomplete(CubeknotError):
    def __init__(self, record: Any, unresolved: Optional[List[List[str]]] = None):
        self.record = record
        self.unresolved = unresolved or []
        groups = "; ".join(", ".join(group) for group in self.unresolved)
        super().__init__(f"Classification unresolved at n_max: {groups}")
