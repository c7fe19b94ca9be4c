"""Simplified output formatting utilities for CLI commands."""

from typing import Any, Mapping, Sequence


class OutputFormatter:
    """Handle formatted output for CLI commands."""

    # Status symbols
    SUCCESS = "✓"
    ERROR = "✗"
    WARNING = "⚠"
    INFO = "•"

    @staticmethod
    def _safe_print(message: str, fallback: str) -> None:
        try:
            print(message)
        except (UnicodeEncodeError, UnicodeDecodeError):
            print(fallback)

    @staticmethod
    def print_success(message: str) -> None:
        """Print success message with checkmark."""
        OutputFormatter._safe_print(
            f"{OutputFormatter.SUCCESS} {message}", f"[OK] {message}"
        )

    @staticmethod
    def print_error(message: str) -> None:
        """Print error message with X mark."""
        OutputFormatter._safe_print(
            f"{OutputFormatter.ERROR} {message}", f"[ERROR] {message}"
        )

    @staticmethod
    def print_info(message: str) -> None:
        """Print informational message."""
        OutputFormatter._safe_print(
            f"{OutputFormatter.INFO} {message}", f"- {message}"
        )

    @staticmethod
    def print_warning(message: str) -> None:
        """Print warning message."""
        OutputFormatter._safe_print(
            f"{OutputFormatter.WARNING} {message}", f"[WARNING] {message}"
        )

    @staticmethod
    def format_table(
        headers: Sequence[str], rows: Sequence[Sequence[Any]], float_digits: int = 4
    ) -> str:
        """Render rows as a left-aligned plain-text table.

        Args:
            headers: Column titles
            rows: Row values; floats are rendered with ``float_digits`` decimals
            float_digits: Decimal places for float cells

        Returns:
            The table as a single string (no trailing newline)
        """

        def cell(value: Any) -> str:
            if value is None:
                return "-"
            if isinstance(value, float):
                return f"{value:.{float_digits}f}"
            return str(value)

        text_rows = [[cell(v) for v in row] for row in rows]
        widths = [len(h) for h in headers]
        for row in text_rows:
            for i, value in enumerate(row):
                widths[i] = max(widths[i], len(value))

        lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
        lines.append("  ".join("-" * w for w in widths))
        for row in text_rows:
            lines.append("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip())
        return "\n".join(lines)

    @staticmethod
    def print_table(
        title: str,
        headers: Sequence[str],
        rows: Sequence[Sequence[Any]],
        float_digits: int = 4,
    ) -> None:
        """Print a titled table.

        Args:
            title: Heading printed above the table
            headers: Column titles
            rows: Row values
            float_digits: Decimal places for float cells
        """
        print(f"\n{title}")
        print(OutputFormatter.format_table(headers, rows, float_digits))

    @staticmethod
    def print_dataset_check(
        name: str, mismatches: Mapping[str, tuple[Any, Any]]
    ) -> None:
        """Print the result of comparing graph statistics with the manifest.

        Args:
            name: Dataset name from the manifest
            mismatches: Column name -> (expected, observed) for failing columns
        """
        if not mismatches:
            OutputFormatter.print_success(f"{name}: matches manifest statistics")
            return

        OutputFormatter.print_warning(f"{name}: differs from manifest statistics")
        for column, (expected, observed) in mismatches.items():
            print(f"    {column}: expected {expected}, got {observed}")

    @staticmethod
    def print_written_files(paths: Sequence[Any]) -> None:
        """Print the list of files produced by a command."""
        if not paths:
            return
        print("\nWrote:")
        for path in paths:
            print(f"  {OutputFormatter.INFO} {path}")
