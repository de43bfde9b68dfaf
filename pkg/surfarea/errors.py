"""
Exceptions raised by surfarea. Each one carries an ErrorCode so the CLI
can turn it into an ErrorResponse.
"""
from typing import Optional

from surfarea.constants import ErrorCode


class SurfAreaError(Exception):
    code = ErrorCode.INTERNAL_ERROR

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class InvalidParameter(SurfAreaError, ValueError):
    code = ErrorCode.INVALID_PARAMETER


class UnknownField(SurfAreaError, KeyError):
    code = ErrorCode.UNKNOWN_FIELD

    def __str__(self):
        # KeyError would otherwise repr() the message
        return self.message


class MeshMismatch(SurfAreaError, ValueError):
    code = ErrorCode.MESH_MISMATCH


class InsufficientData(SurfAreaError, ValueError):
    code = ErrorCode.INSUFFICIENT_DATA


class NonpositiveError(SurfAreaError, ValueError):
    code = ErrorCode.NONPOSITIVE_ERROR


class DegenerateTriangle(SurfAreaError, ValueError):
    code = ErrorCode.DEGENERATE_TRIANGLE

    def __init__(self, message: str, triangle_index: Optional[int] = None):
        if triangle_index is not None:
            message = f"triangle {triangle_index}: {message}"
        super().__init__(message)
        self.triangle_index = triangle_index


class InterpolationError(SurfAreaError, ArithmeticError):
    code = ErrorCode.INTERPOLATION_FAILURE

    def __init__(self, message: str, triangle_index: Optional[int] = None):
        if triangle_index is not None:
            message = f"triangle {triangle_index}: {message}"
        super().__init__(message)
        self.triangle_index = triangle_index
