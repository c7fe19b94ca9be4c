"""Error handling and formatting for emh-rank.

This module provides the exception hierarchy shared by the library and the
CLI, together with the exit-code mapping used by the command handlers.
"""

import difflib
import logging
from pathlib import Path
from typing import Any, Callable, Sequence

from .output import OutputFormatter

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_RUNTIME = 3


class EmhRankError(Exception):
    """Base exception for emh-rank errors."""

    exit_code = EXIT_RUNTIME

    def __init__(
        self,
        message: str,
        details: str | None = None,
        suggestions: list[str] | None = None,
    ):
        """Initialize the error.

        Args:
            message: Main error message
            details: Optional technical details
            suggestions: Optional list of suggestions
        """
        super().__init__(message)
        self.message = message
        self.details = details
        self.suggestions = suggestions or []

    def print_error(self) -> None:
        """Print formatted error message."""
        OutputFormatter.print_error(f"Error: {self.message}")

        if self.details:
            print(f"\nDetails:\n{self.details}")

        if self.suggestions:
            print("\nSuggestions:")
            for suggestion in self.suggestions:
                print(f"  • {suggestion}")


class UsageError(EmhRankError):
    """Invalid command-line usage or configuration."""

    exit_code = EXIT_USAGE


class ParameterError(UsageError, ValueError):
    """A parameter value violates its documented range."""


class UnknownMeasureError(UsageError):
    """Error for measure names outside the supported set."""

    def __init__(self, name: str, available: Sequence[str]):
        """Initialize unknown measure error.

        Args:
            name: The measure name that was requested
            available: Valid measure names
        """
        suggestions = [f"Valid measures: {', '.join(available)}"]
        close = difflib.get_close_matches(name, list(available), n=3, cutoff=0.5)
        if close:
            suggestions.insert(0, f"Did you mean: {', '.join(close)}?")
        suggestions.append("List measures: emh-rank measures")
        super().__init__(f"Unknown measure '{name}'", suggestions=suggestions)
        self.name = name


class DataError(EmhRankError):
    """Input data cannot be used."""

    exit_code = EXIT_DATA


class EdgeListParseError(DataError):
    """Malformed edge-list input."""

    def __init__(
        self,
        reason: str,
        line_number: int | None = None,
        line: str | None = None,
        source: str | None = None,
    ):
        """Initialize parse error.

        Args:
            reason: What is wrong with the input
            line_number: 1-based line number, if the error is line-specific
            line: Offending line content
            source: File name or other description of the input
        """
        location = source or "<input>"
        if line_number is not None:
            location = f"{location}:{line_number}"
        message = f"{location}: {reason}"
        details = f"Line content: {line!r}" if line is not None else None
        suggestions = [
            "Each data line needs exactly two labels: 'source target'",
            "Separate labels with whitespace or a comma",
            "Prefix comment lines with '#' or '%'",
        ]
        super().__init__(message, details=details, suggestions=suggestions)
        self.reason = reason
        self.line_number = line_number
        self.source = source


class UnknownNodeError(DataError, KeyError):
    """Error for node labels that are not in the graph."""

    def __init__(self, label: str, known_labels: Sequence[str]):
        """Initialize unknown node error.

        Args:
            label: The requested label
            known_labels: Labels present in the graph
        """
        close = difflib.get_close_matches(label, list(known_labels), n=3, cutoff=0.5)
        suggestions = []
        if close:
            suggestions.append(f"Nearest labels: {', '.join(close)}")
        suggestions.append("Labels are matched as exact strings")
        super().__init__(f"Node '{label}' not found in graph", suggestions=suggestions)
        self.label = label
        self.nearest = close

    def __str__(self) -> str:
        return self.message


class DatasetNotFoundError(DataError):
    """Error for missing dataset files."""

    def __init__(self, path: Path, known: Sequence[str] | None = None):
        """Initialize dataset error.

        Args:
            path: Path or manifest name that could not be resolved
            known: Dataset names listed in the manifest
        """
        suggestions = [f"Check the file exists: ls -la {path}"]
        if known:
            suggestions.append(f"Manifest datasets: {', '.join(known)}")
        suggestions.append("See data/README.md for where edge-list files go")
        super().__init__(f"Dataset not found: {path}", suggestions=suggestions)
        self.path = path


class UndefinedMetricError(DataError, ArithmeticError):
    """A quantity is mathematically undefined for the given graph."""


class SimulationError(EmhRankError):
    """SIR simulation failed."""


def handle_common_errors(func: Callable[..., int]) -> Callable[..., int]:
    """Decorator to handle common errors with better messages.

    Args:
        func: Function to wrap

    Returns:
        Wrapped function returning the exit code for the error category
    """

    def wrapper(*args: Any, **kwargs: Any) -> int:
        try:
            return func(*args, **kwargs)
        except EmhRankError as e:
            logger.debug("Command failed", exc_info=True)
            e.print_error()
            return e.exit_code
        except FileNotFoundError as e:
            error = DatasetNotFoundError(Path(e.filename or str(e)))
            error.print_error()
            return error.exit_code
        except PermissionError as e:
            OutputFormatter.print_error(f"Error: Permission denied: {e.filename or e}")
            return EXIT_DATA
        except Exception as e:  # pylint: disable=broad-exception-caught
            logger.exception("Unexpected failure")
            OutputFormatter.print_error(f"Error: {e}")
            print("\nSuggestions:")
            print("  • Run with --verbose or --log-level DEBUG for more details")
            return EXIT_RUNTIME

    wrapper.__name__ = func.__name__
    wrapper.__doc__ = func.__doc__
    return wrapper
