"""Small helpers for the workbench's tab-separated file formats.

All formats share the same conventions: UTF-8, LF line endings, a fixed
header line, one record per line. Free-text cells escape backslash, tab,
and newline so every value round-trips byte-exactly.
"""

from __future__ import annotations

from typing import IO, Iterator

from .errors import DataFormatError

_ESCAPES = {"\\": "\\\\", "\t": "\\t", "\n": "\\n", "\r": "\\r"}
_UNESCAPES = {"\\": "\\", "t": "\t", "n": "\n", "r": "\r"}


def escape_cell(value: str) -> str:
    if not any(ch in value for ch in _ESCAPES):
        return value
    return "".join(_ESCAPES.get(ch, ch) for ch in value)


def unescape_cell(value: str) -> str:
    if "\\" not in value:
        return value
    out: list[str] = []
    it = iter(value)
    for ch in it:
        if ch != "\\":
            out.append(ch)
            continue
        nxt = next(it, None)
        if nxt is None or nxt not in _UNESCAPES:
            raise ValueError(f"bad escape sequence in cell: {value!r}")
        out.append(_UNESCAPES[nxt])
    return "".join(out)


def iter_rows(source: IO[str], header: str) -> Iterator[tuple[int, list[str]]]:
    """Yield (line_number, cells) for each data line after checking the header.

    Line numbers are 1-based; the header is line 1. Raises DataFormatError
    when the header differs or a row has the wrong number of columns.
    """
    width = header.count("\t") + 1
    first = source.readline()
    if first.rstrip("\r\n") != header:
        raise DataFormatError(1, f"expected header {header!r}")
    for lineno, raw in enumerate(source, start=2):
        line = raw.rstrip("\r\n")
        cells = line.split("\t")
        if len(cells) != width:
            raise DataFormatError(
                lineno, f"expected {width} columns, found {len(cells)}"
            )
        yield lineno, cells


def write_rows(sink: IO[str], header: str, rows: list[list[str]]) -> int:
    """Write a header plus rows, returning the number of UTF-8 bytes written."""
    parts = [header + "\n"]
    for cells in rows:
        parts.append("\t".join(cells) + "\n")
    payload = "".join(parts)
    sink.write(payload)
    return len(payload.encode("utf-8"))
