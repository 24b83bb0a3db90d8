"""Custom exceptions for fedloc."""

from typing import Iterable, Optional


class FedLocError(Exception):
    """Base exception for fedloc."""

    category = "runtime"


class ContractViolationError(FedLocError):
    """Raised when arguments break a structural contract (shapes, architectures)."""

    category = "contract-violation"


class InvalidInputError(FedLocError):
    """Raised when numeric input is not finite or otherwise unusable."""

    category = "invalid-input"


class DivergenceError(FedLocError):
    """Raised when local training produces a non-finite objective."""

    category = "divergence"

    def __init__(self, message: str, epoch: int):
        super().__init__(message)
        self.epoch = epoch


class RoundDivergenceError(DivergenceError):
    """Raised when a client diverges inside a federated round."""

    def __init__(self, message: str, client_id: int, round_index: int, epoch: int):
        super().__init__(message, epoch=epoch)
        self.client_id = client_id
        self.round_index = round_index


class SchemaError(FedLocError):
    """Raised when an input file lacks expected columns."""

    category = "schema"

    def __init__(self, message: str, missing: Optional[Iterable[str]] = None):
        super().__init__(message)
        self.missing = list(missing or [])


class RowParseError(FedLocError):
    """Raised when a data row holds an unparseable field."""

    category = "row-parse"

    def __init__(self, message: str, row_index: int, column: str):
        super().__init__(message)
        self.row_index = row_index
        self.column = column


class EmptySelectionError(FedLocError):
    """Raised when a filter selects nothing."""

    category = "empty-selection"


class ParameterError(FedLocError):
    """Raised when a numeric parameter is out of its admissible range."""

    category = "parameter"


class CapacityError(FedLocError):
    """Raised when partition demand exceeds the available samples."""

    category = "capacity"


class InvalidStateError(FedLocError):
    """Raised when intermediate state is not finite."""

    category = "invalid-state"


class DegenerateFusionError(FedLocError):
    """Raised when every label is ruled out by some model."""

    category = "degenerate-fusion"


class EvaluationError(FedLocError):
    """Raised when a model cannot be evaluated."""

    category = "evaluation"


class ConfigError(FedLocError):
    """Raised when a configuration file or override is unusable."""

    category = "usage"


USAGE_ERRORS = (ConfigError, SchemaError)


def exit_code_for(exc: BaseException) -> int:
    """Map an exception to a CLI exit code."""
    if isinstance(exc, USAGE_ERRORS):
        return 2
    return 1


def category_for(exc: BaseException) -> str:
    """Machine-readable error category for CLI output."""
    if isinstance(exc, FedLocError):
        return exc.category
    return "internal"
