"""
Exception hierarchy for the decomposition-space engine
Checks that fail return verdicts with witnesses; these are raised for bad input
and violated preconditions only
"""

from typing import Any, Optional


class DecompError(Exception):
    """Base class for all engine errors"""


class InvalidMapError(DecompError):
    """A monotone map, reduced cover, simplicial map or subobject is malformed"""


class ArityError(DecompError):
    """An operation needs a simplicial level above the declared cap"""


class SimplicialIdentityError(DecompError):
    """A simplicial set violates a simplicial identity"""

    def __init__(self, message: str, violations: Optional[list] = None):
        super().__init__(message)
        self.violations = violations or []


class NonCommutingSquareError(DecompError):
    """The two composites of a square disagree on some element"""

    def __init__(self, message: str, element: Any = None):
        super().__init__(message)
        self.element = element


class PreconditionError(DecompError):
    """An operation was called outside its domain"""


class CertificateError(DecompError):
    """A finiteness certificate is missing or was denied"""

    def __init__(self, message: str, witness_edge: Optional[str] = None):
        super().__init__(message)
        self.witness_edge = witness_edge


class CorruptionError(DecompError):
    """A property that was verified upstream is contradicted downstream"""


class DocumentError(DecompError):
    """A document failed schema or structural validation"""

    def __init__(self, message: str, location: Optional[str] = None):
        super().__init__(message if location is None else f"{location}: {message}")
        self.location = location
