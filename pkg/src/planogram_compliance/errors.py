"""Exception hierarchy for the compliance engine.

All errors derive from ``ValueError`` so callers that only care about
"bad input" can keep catching that.
"""


class PlanogramError(ValueError):
    """Base class for engine errors."""


class DegenerateOffsetError(PlanogramError):
    """Two centers coincide, so no direction can be assigned."""

    def __init__(self) -> None:
        super().__init__("degenerate offset")


class DuplicateDetectionError(PlanogramError):
    """A detection id appears more than once in one detection set."""

    def __init__(self, det_id: str):
        self.det_id = det_id
        super().__init__(f"duplicate det_id: {det_id}")


class EmptyHypothesisSetError(PlanogramError):
    """The solver was given no hypotheses to work with."""

    def __init__(self) -> None:
        super().__init__("hypothesis set is empty")


class InstanceTooLargeError(PlanogramError):
    """The brute-force oracle refuses instances above its node limit."""

    def __init__(self, size: int, limit: int):
        self.size = size
        self.limit = limit
        super().__init__(f"instance too large for oracle: {size} > {limit}")


class UnconstrainedTargetError(PlanogramError):
    """A missing node has no assigned neighbour to anchor its ROI."""

    def __init__(self, node_id: str):
        self.node_id = node_id
        super().__init__(f"unconstrained target: {node_id}")


class CanvasOverflowError(PlanogramError):
    """An item does not fit inside the render canvas."""


class FormatError(PlanogramError):
    """An input file is malformed."""


class UnknownMatcherError(PlanogramError):
    """No matcher is registered under the requested name."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown matcher: {name}")


class EmptyDatasetError(PlanogramError):
    """Dataset-level evaluation was asked to average zero scenes."""

    def __init__(self) -> None:
        super().__init__("dataset is empty")
