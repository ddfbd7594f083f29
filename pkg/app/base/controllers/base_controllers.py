import csv
import io
import json
import os
from typing import Any, Iterable, List, Optional, Sequence

import click

from app.base.models.base_model import to_builtin
from app.core.exceptions import ValidationError

OUTPUT_FORMATS = ("json", "csv", "text")


class BaseController:
    """
    Base controller class that provides common functionality for all controllers.
    """

    def __init__(self, out: Optional[str] = None, fmt: str = "json"):
        if fmt not in OUTPUT_FORMATS:
            self.handle_bad_request(f"Unknown output format {fmt!r}")
        self.out = out
        self.fmt = fmt

    def handle_bad_request(self, message: str = "Bad request"):
        raise ValidationError(message)

    def emit(self, text: str) -> None:
        """Write text to the --out file, or stdout when no file is set"""
        if not text.endswith("\n"):
            text += "\n"
        if self.out:
            directory = os.path.dirname(self.out)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(self.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            click.echo(text, nl=False)

    def emit_json(self, document: Any) -> None:
        self.emit(json.dumps(to_builtin(document), indent=2, sort_keys=True))

    def emit_csv(self, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_csv_cell(v) for v in row])
        self.emit(buffer.getvalue())

    def emit_document(self, response, header: Sequence[str], rows: List[Sequence[Any]]) -> None:
        """Write a response in the configured format"""
        if self.fmt == "json":
            self.emit(response.to_json())
        elif self.fmt == "csv":
            self.emit_csv(header, rows)
        else:
            self.emit_table(header, rows)

    def emit_table(self, header: Sequence[str], rows: List[Sequence[Any]]) -> None:
        """Aligned plain-text table"""
        cells = [[str(h) for h in header]] + [[_text_cell(v) for v in row] for row in rows]
        widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
        lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
        self.emit("\n".join(lines))


def _csv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _text_cell(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)
