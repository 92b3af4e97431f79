"""Custom exceptions for alopt."""


class ALOError(Exception):
    """Base exception for alopt errors."""


class SpecError(ALOError):
    """Raised when aircraft, payload or configuration values are invalid."""

    def __init__(self, field: str, reason: str) -> None:
        self.field = field
        self.reason = reason
        super().__init__(f"Invalid {field}: {reason}")


class BinIndexError(ALOError, IndexError):
    """Raised when a bin index lies outside the domain of a container size."""

    def __init__(self, size: int, bin_index: int, bin_count: int) -> None:
        self.size = size
        self.bin_index = bin_index
        self.bin_count = bin_count
        last = bin_count - 1 if size == 3 else bin_count
        super().__init__(
            f"Bin {bin_index} out of range for size {size} (valid: 1..{last})"
        )


class DimensionError(ALOError):
    """Raised when an assignment does not match its payload or aircraft."""


class GenerationError(ALOError):
    """Raised when the mass generator cannot fill the requested payload."""

    def __init__(self, size: int, requested: int, accepted: int) -> None:
        self.size = size
        self.requested = requested
        self.accepted = accepted
        super().__init__(
            f"Size {size}: only {accepted} of {requested} masses fell inside "
            "the truncation window"
        )


class DocumentError(ALOError):
    """Raised when a JSON document violates its schema."""

    def __init__(self, path: str, reason: str) -> None:
        self.path = path
        self.reason = reason
        super().__init__(f"{path}: {reason}")


class ModelFormatError(ALOError):
    """Raised when a constraint system cannot be written or parsed."""


class SearchSpaceError(ALOError):
    """Raised when an exhaustive search would exceed its enumeration guard."""

    def __init__(self, estimate: int, limit: int) -> None:
        self.estimate = estimate
        self.limit = limit
        super().__init__(
            f"Search space of {estimate:.3e} assignments exceeds the guard of {limit:.0e}"
        )


class FitError(ALOError):
    """Raised when a scaling fit does not have enough data."""


class StorageError(ALOError):
    """Raised when file operations fail."""

    def __init__(self, operation: str, path: str, cause: Exception | None = None) -> None:
        self.operation = operation
        self.path = path
        self.cause = cause
        msg = f"Storage {operation} failed for: {path}"
        if cause:
            msg += f" ({cause})"
        super().__init__(msg)
