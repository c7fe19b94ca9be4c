"""Tests for output formatting, error reporting and file helpers."""

import json
from pathlib import Path

import pytest

from src.emh_rank.errors import (
    EXIT_DATA,
    EXIT_OK,
    EXIT_RUNTIME,
    EXIT_USAGE,
    DataError,
    EdgeListParseError,
    ParameterError,
    UnknownMeasureError,
    handle_common_errors,
)
from src.emh_rank.file_utils import format_float, load_json, save_csv, save_json
from src.emh_rank.output import OutputFormatter


class TestOutputFormatter:
    """Test the OutputFormatter class."""

    def test_status_symbols(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Each message kind has its own symbol."""
        OutputFormatter.print_success("done")
        OutputFormatter.print_error("failed")
        OutputFormatter.print_info("note")
        OutputFormatter.print_warning("careful")
        out = capsys.readouterr().out
        assert "✓ done" in out
        assert "✗ failed" in out
        assert "• note" in out
        assert "⚠ careful" in out

    def test_format_table(self) -> None:
        """Columns are padded; floats rounded; None shown as '-'."""
        table = OutputFormatter.format_table(
            ["measure", "tau"], [("EMH", 0.81234), ("DC", None)], float_digits=3
        )
        lines = table.splitlines()
        assert lines[0] == "measure  tau"
        assert lines[1] == "-------  -----"
        assert lines[2] == "EMH      0.812"
        assert lines[3] == "DC       -"

    def test_dataset_check(self, capsys: pytest.CaptureFixture[str]) -> None:
        OutputFormatter.print_dataset_check("Dolphins", {})
        OutputFormatter.print_dataset_check("Jazz", {"edges": (2742, 2741)})
        out = capsys.readouterr().out
        assert "✓ Dolphins: matches manifest statistics" in out
        assert "⚠ Jazz: differs from manifest statistics" in out
        assert "    edges: expected 2742, got 2741" in out

    def test_written_files(self, capsys: pytest.CaptureFixture[str]) -> None:
        OutputFormatter.print_written_files([])
        assert capsys.readouterr().out == ""
        OutputFormatter.print_written_files([Path("results") / "monotonicity.csv"])
        assert "monotonicity.csv" in capsys.readouterr().out


class TestErrors:
    """Test the error hierarchy and the command error handler."""

    def test_parse_error_message(self) -> None:
        error = EdgeListParseError("expected 2 labels", 3, "a b c", "g.txt")
        assert error.message == "g.txt:3: expected 2 labels"
        assert error.line_number == 3
        assert error.exit_code == EXIT_DATA

    def test_parameter_error_is_value_error(self) -> None:
        """Library callers can catch range errors as ValueError."""
        with pytest.raises(ValueError):
            raise ParameterError("alpha out of range")

    def test_print_error(self, capsys: pytest.CaptureFixture[str]) -> None:
        error = UnknownMeasureError("EMG", ["EMH", "DC"])
        error.print_error()
        out = capsys.readouterr().out
        assert "✗ Error: Unknown measure 'EMG'" in out
        assert "Suggestions:" in out
        assert "Did you mean: EMH?" in out

    @pytest.mark.parametrize(
        "exception,code",
        [
            (ParameterError("bad"), EXIT_USAGE),
            (DataError("broken"), EXIT_DATA),
            (FileNotFoundError(2, "No such file", "missing.txt"), EXIT_DATA),
            (RuntimeError("boom"), EXIT_RUNTIME),
        ],
    )
    def test_handle_common_errors(
        self,
        exception: Exception,
        code: int,
        capsys: pytest.CaptureFixture[str],
    ) -> None:
        """Exceptions become exit codes by category."""

        @handle_common_errors
        def command() -> int:
            raise exception

        assert command() == code
        assert "✗ Error:" in capsys.readouterr().out

    def test_handle_common_errors_success(self) -> None:
        @handle_common_errors
        def command() -> int:
            """Docstring kept."""
            return EXIT_OK

        assert command() == EXIT_OK
        assert command.__doc__ == "Docstring kept."


class TestFileUtils:
    """Test the file helpers behind every output file."""

    def test_save_json(self, tmp_path: Path) -> None:
        """Indented, newline-terminated, parent directories created."""
        path = tmp_path / "nested" / "report.json"
        save_json(path, {"tau": 0.5})
        assert path.read_text(encoding="utf-8") == '{\n  "tau": 0.5\n}\n'
        assert load_json(path) == {"tau": 0.5}
        assert not path.with_suffix(".json.tmp").exists()

    def test_load_json_default(self, tmp_path: Path) -> None:
        """Missing files give a copy of the default."""
        default: dict[str, list[int]] = {"a": []}
        loaded = load_json(tmp_path / "absent.json", default)
        loaded["a"].append(1)
        assert default == {"a": []}

    def test_save_csv(self, tmp_path: Path) -> None:
        path = tmp_path / "scores.csv"
        save_csv(path, ["node", "score"], [("a", "1.000000"), ("b,c", "2.5")])
        assert path.read_text(encoding="utf-8") == (
            'node,score\na,1.000000\n"b,c",2.5\n'
        )

    def test_format_float(self) -> None:
        assert format_float(0.5) == "0.500000"
        assert format_float(-1e-9) == "0.000000"
        assert format_float(2.0 / 3.0, digits=3) == "0.667"
        assert json.loads(format_float(1.25)) == 1.25
