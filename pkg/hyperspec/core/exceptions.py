"""
Exception hierarchy for the hyperspectral benchmark toolkit.

Every error raised on purpose by the toolkit derives from HyperspecError so
the command line can report it as a single diagnostic line.
"""


class HyperspecError(Exception):
    """Base class for all toolkit errors."""


class DataLoadError(HyperspecError, ValueError):
    """A cube or ground-truth file is missing, garbled or inconsistent."""

    def __init__(self, message: str, path: str = None, byte_offset: int = None):
        self.path = path
        self.byte_offset = byte_offset
        details = message
        if path is not None:
            details = f"{path}: {details}"
        if byte_offset is not None:
            details = f"{details} (byte offset {byte_offset})"
        super().__init__(details)


class DimensionMismatchError(HyperspecError, ValueError):
    """Two objects that must share dimensions do not."""


class SplitError(HyperspecError, ValueError):
    """Samples cannot be extracted or split as requested."""

    def __init__(self, message: str, class_id: int = None):
        self.class_id = class_id
        super().__init__(message)


class SelectionError(HyperspecError, ValueError):
    """Band selection cannot run on the given inputs."""


class TrainingError(HyperspecError, ValueError):
    """A classifier cannot be trained on the given data or spec."""

    def __init__(self, message: str, dimension: int = None):
        self.dimension = dimension
        super().__init__(message)


class ConfigurationError(HyperspecError, ValueError):
    """Configuration values are missing or invalid."""


class ReportError(HyperspecError, OSError):
    """Output files cannot be written."""


class EvaluationError(HyperspecError, ValueError):
    """Metrics cannot be computed for the given labels."""
