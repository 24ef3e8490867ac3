import json
import sys
import traceback
from typing import Any, Dict, Optional
from pydantic import ValidationError

from app.utils.logger import log


class ResonanceLabError(Exception):
    """Base class for every domain error raised by the lab."""
    code: str = "resonance_lab_error"
    exit_code: int = 1

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details


class InvalidSpecError(ResonanceLabError, ValueError):
    """Malformed chain-product spec or run configuration."""
    code = "invalid_spec"
    exit_code = 2


class InvalidPosetError(ResonanceLabError, ValueError):
    """Cover relation is cyclic, not transitively reduced, or not ranked."""
    code = "invalid_poset"
    exit_code = 2


class ElementIndexError(ResonanceLabError, IndexError):
    """Element index outside the poset."""
    code = "element_index"
    exit_code = 2


class InvalidIdealError(ResonanceLabError, ValueError):
    """Subset is not downward closed."""
    code = "invalid_ideal"
    exit_code = 2


class InvalidExtensionError(ResonanceLabError, ValueError):
    """Sequence is not a linear extension of the poset."""
    code = "invalid_extension"
    exit_code = 2


class InvalidProjectionError(ResonanceLabError, ValueError):
    """Projection is not order, rank and cover preserving."""
    code = "invalid_projection"
    exit_code = 2


class DimensionMismatchError(ResonanceLabError, ValueError):
    code = "dimension_mismatch"
    exit_code = 2


class InvalidSweepError(ResonanceLabError, ValueError):
    """Sweep order is not a permutation of the support."""
    code = "invalid_sweep"
    exit_code = 2


class InvalidTableauError(ResonanceLabError, ValueError):
    code = "invalid_tableau"
    exit_code = 2


class LabelRangeError(ResonanceLabError, ValueError):
    code = "label_range"
    exit_code = 2


class ShapeError(ResonanceLabError, ValueError):
    code = "shape"
    exit_code = 2


class InvalidConfigurationError(ResonanceLabError, ValueError):
    """Edge set is not a fully-packed loop configuration."""
    code = "invalid_configuration"
    exit_code = 2


class ContractViolationError(ResonanceLabError):
    """Successor function leaves its domain or is not a bijection."""
    code = "contract_violation"
    exit_code = 3


class ResourceLimitError(ResonanceLabError):
    """State space larger than the configured cap."""
    code = "resource_limit"
    exit_code = 4


class UnknownSystemError(ResonanceLabError, KeyError):
    """Name not present in the system registry."""
    code = "unknown_system"
    exit_code = 2

    def __str__(self) -> str:
        return self.message


class ExceptionHandler:
    """Turns exceptions into log records and the CLI error contract."""

    def __init__(self, stream=None):
        self.logger = log
        self.stream = stream or sys.stderr

    def format_exception_for_logging(self, exc: Exception) -> dict:
        """Format exception details for logging in a serializable format."""
        return {
            "type": exc.__class__.__name__,
            "message": str(exc),
            "traceback": traceback.format_exc(),
            "args": [str(arg) for arg in getattr(exc, "args", ())],
            "details": getattr(exc, "details", None),
        }

    def error_payload(self, exc: Exception) -> Dict[str, Any]:
        if isinstance(exc, ResonanceLabError):
            return {
                "error": exc.code,
                "message": exc.message,
                "details": {k: _jsonable(v) for k, v in sorted(exc.details.items())},
            }
        if isinstance(exc, ValidationError):
            return {
                "error": "invalid_spec",
                "message": "Validation error",
                "details": {"errors": json.loads(exc.json())},
            }
        return {"error": "internal", "message": str(exc), "details": {}}

    def exit_code_for(self, exc: Exception) -> int:
        if isinstance(exc, ResonanceLabError):
            return exc.exit_code
        if isinstance(exc, ValidationError):
            return InvalidSpecError.exit_code
        return 70

    def handle(self, exc: Exception, command: Optional[str] = None) -> int:
        """Log `exc`, write its JSON payload to the error stream and return the exit code."""
        payload = self.error_payload(exc)
        if isinstance(exc, (ResonanceLabError, ValidationError)):
            self.logger.warning(f"{command or 'command'} failed: {payload['message']}", error=payload["error"])
        else:
            self.logger.critical(
                f"Unexpected error in {command or 'command'}: {str(exc)}",
                exception=self.format_exception_for_logging(exc)["type"]
            )
        self.stream.write(json.dumps(payload, sort_keys=True) + "\n")
        self.stream.flush()
        return self.exit_code_for(exc)


def _jsonable(value: Any) -> Any:
    try:
        json.dumps(value)
        return value
    except TypeError:
        return str(value)
