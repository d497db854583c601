#!/usr/bin/env python3
"""
Workbench Errors
Exception hierarchy shared by every module, serializable for JSON reports
"""

from typing import Any, Dict, Optional


class WorkbenchError(Exception):
    """Base class for all workbench failures"""

    kind = "workbench-error"

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> Dict[str, Any]:
        data = {'error': self.kind, 'message': self.message}
        data.update({k: v for k, v in self.details.items() if v is not None})
        return data


class StructuralError(WorkbenchError):
    """Malformed tables or a subset that is not closed"""

    kind = "structural-error"

    def __init__(self, message: str, coordinates: Optional[tuple] = None, **details: Any):
        super().__init__(message, coordinates=list(coordinates) if coordinates is not None else None, **details)
        self.coordinates = coordinates


class DecompositionError(StructuralError):
    """Raised when a factor of the Boolean-center decomposition is not a chain"""

    kind = "decomposition-error"


class PreconditionError(WorkbenchError):
    """An operation was called outside its stated precondition"""

    kind = "precondition-error"

    def __init__(self, message: str, clause: str, **details: Any):
        super().__init__(message, clause=clause, **details)
        self.clause = clause


class SizeBoundError(WorkbenchError):
    """Enumeration refused because the algebra is larger than the configured cap"""

    kind = "size-bound"

    def __init__(self, size: int, bound: int, operation: str):
        super().__init__(
            f"{operation}: algebra has {size} elements, bound is {bound}",
            size=size, bound=bound, operation=operation,
        )
        self.size = size
        self.bound = bound


class InvalidInputError(WorkbenchError):
    """Bad user input: empty lists, unknown names, malformed flags"""

    kind = "invalid-input"


class FormulaSyntaxError(InvalidInputError):
    """Formula text does not match the grammar"""

    kind = "syntax-error"

    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(message, position=position, text=text or None)
        self.position = position
