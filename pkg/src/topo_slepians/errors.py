"""Exception hierarchy. Every error carries a short machine-readable code."""


class TopoSlepianError(Exception):
    code = "ERROR"

    def __init__(self, message: str = "", **context):
        super().__init__(message)
        self.context = context

    def __str__(self) -> str:
        return f"{self.code}: {super().__str__()}"


class MissingFace(TopoSlepianError):
    code = "MISSING_FACE"


class DuplicateSimplex(TopoSlepianError):
    code = "DUPLICATE_SIMPLEX"


class IndexOutOfRange(TopoSlepianError):
    code = "INDEX_OUT_OF_RANGE"


class OrderOutOfRange(TopoSlepianError):
    code = "ORDER_OUT_OF_RANGE"


class EigenFailure(TopoSlepianError):
    code = "EIGEN_FAILURE"


class DimensionMismatch(TopoSlepianError):
    code = "DIMENSION_MISMATCH"


class EmptySet(TopoSlepianError):
    code = "EMPTY_SET"


class EmptyDictionary(TopoSlepianError):
    code = "EMPTY_DICTIONARY"


class NoProgress(TopoSlepianError):
    """OMP could not reduce the residual any further.

    The partially built code is attached as ``partial``.
    """

    code = "NO_PROGRESS"

    def __init__(self, message: str = "", partial=None, **context):
        super().__init__(message, **context)
        self.partial = partial


class MaxIterExceeded(TopoSlepianError):
    code = "MAX_ITER_EXCEEDED"

    def __init__(self, message: str = "", partial=None, **context):
        super().__init__(message, **context)
        self.partial = partial


class ZeroSignal(TopoSlepianError):
    code = "ZERO_SIGNAL"


class DegenerateGrid(TopoSlepianError):
    code = "DEGENERATE_GRID"


class FormatError(TopoSlepianError):
    code = "FORMAT_ERROR"


class FrameDegenerate(TopoSlepianError):
    code = "FRAME_DEGENERATE"
