"""
Error types and exit-code mapping for the ensemble-control toolkit.

Library code raises the exceptions below; only the CLI converts them into
process exit codes through ``CommandErrorHandler``.
"""

import logging
from typing import Any, Dict, Optional

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NUMERIC = 1
EXIT_USAGE = 2


class EnsembleControlError(Exception):
    """Base class for all toolkit errors."""

    exit_code: int = EXIT_NUMERIC

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.context = context


class ConstraintViolationError(EnsembleControlError):
    """A point or vector does not satisfy its manifold constraint."""

    exit_code = EXIT_USAGE


class DimensionMismatchError(EnsembleControlError):
    """Array shapes or manifolds do not agree."""

    exit_code = EXIT_USAGE


class InvalidEnsembleError(EnsembleControlError):
    """Ensemble is empty or has coinciding members."""

    exit_code = EXIT_USAGE


class IntegrationError(EnsembleControlError):
    """The flow produced a non-finite state."""

    exit_code = EXIT_NUMERIC

    def __init__(self, message: str, step: int, **context: Any):
        super().__init__(message, step=step, **context)
        self.step = step


class QuadratureError(EnsembleControlError):
    """Quadrature rule too coarse for the requested expansion order."""

    exit_code = EXIT_USAGE


class ScenarioConfigError(EnsembleControlError):
    """Scenario file is malformed or fails schema validation."""

    exit_code = EXIT_USAGE


class UnknownSuiteError(EnsembleControlError):
    """Requested verification suite does not exist."""

    exit_code = EXIT_USAGE


class CommandErrorHandler:
    """Logs error detail with context and maps the error onto an exit code."""

    @staticmethod
    def log_and_exit_code(
        error: Exception,
        context: Optional[Dict[str, Any]] = None,
    ) -> int:
        """
        Log detailed error information and return the process exit code.

        Args:
            error: The original exception
            context: Additional context for logging

        Returns:
            Exit code (1 numeric failure, 2 usage/config error)
        """
        merged = dict(context or {})
        if isinstance(error, EnsembleControlError):
            merged.update(error.context)
            code = error.exit_code
        else:
            code = EXIT_NUMERIC
        context_str = f" Context: {merged}" if merged else ""
        if code == EXIT_USAGE:
            logger.error(f"Usage error: {error}{context_str}")
        else:
            logger.error(f"Numeric failure: {error}{context_str}", exc_info=True)
        return code

    @staticmethod
    def log_config_error(error: Exception, source: Optional[str] = None) -> int:
        """Handle scenario/config errors."""
        wrapped = (
            error
            if isinstance(error, EnsembleControlError)
            else ScenarioConfigError(str(error))
        )
        return CommandErrorHandler.log_and_exit_code(
            wrapped, context={"source": source} if source else None
        )


# Convenience functions
def handle_config_error(error: Exception, source: Optional[str] = None) -> int:
    """Convenience function for scenario/config errors."""
    return CommandErrorHandler.log_config_error(error, source)


def handle_numeric_error(error: Exception, **context) -> int:
    """Convenience function for numeric failures."""
    return CommandErrorHandler.log_and_exit_code(error, context)
