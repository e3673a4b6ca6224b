"""Preposition instance extraction and the tab-separated instance file.

An instance is one occurrence of a target preposition that introduces a
frame element: the FE span starts exactly where the preposition token
starts. Subcorpora are selected by the pp-token in their name; a selected
subcorpus that yields nothing still contributes a "No instances" row so
coverage gaps stay visible.

File format (UTF-8, LF):

    Frame\tFrameElement\tLexicalUnit\tSubcorpus\tIdentifier-Position
    Arrest\tAuthorities\tarrest.v\tV-730-s20-ppby\t875350-43

"No instances" rows leave the final column empty.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import IO

from . import tsvio
from .corpus import Corpus, frame_element_at, iter_sentences, parse_subcorpus_name
from .errors import DataError, DataFormatError

NO_INSTANCES = "No instances"

INSTANCE_HEADER = "Frame\tFrameElement\tLexicalUnit\tSubcorpus\tIdentifier-Position"

_ID_RE = re.compile(r"^(\d+)-(\d+)$")


@dataclass(frozen=True)
class InstanceRecord:
    frame: str
    frame_element: str
    lexical_unit: str
    subcorpus: str
    sentence_id: int | None
    prep_start: int | None
    instance_id: str = field(init=False)

    def __post_init__(self) -> None:
        if self.frame_element == NO_INSTANCES:
            if self.sentence_id is not None or self.prep_start is not None:
                raise ValueError("No-instances record cannot carry a position")
            iid = f"{self.lexical_unit}/{self.subcorpus}#none"
        else:
            if self.sentence_id is None or self.prep_start is None:
                raise ValueError(
                    "instance record needs both sentence_id and prep_start"
                )
            if self.sentence_id < 0 or self.prep_start < 0:
                raise ValueError("sentence_id and prep_start must be >= 0")
            iid = f"{self.sentence_id}-{self.prep_start}"
        object.__setattr__(self, "instance_id", iid)

    @property
    def is_placeholder(self) -> bool:
        return self.frame_element == NO_INSTANCES


def _sort_key(rec: InstanceRecord):
    return (
        rec.frame,
        rec.frame_element,
        rec.lexical_unit,
        rec.subcorpus,
        rec.sentence_id if rec.sentence_id is not None else -1,
        rec.prep_start if rec.prep_start is not None else -1,
    )


@lru_cache(maxsize=256)
def _word_re(prep: str) -> re.Pattern:
    # bounded by non-letters or string edges; [^\W\d_] is "any letter"
    return re.compile(
        r"(?<![^\W\d_])" + re.escape(prep) + r"(?![^\W\d_])", re.IGNORECASE
    )


def find_occurrences(text: str, prep: str) -> list[int]:
    """Start offsets of whole-word, case-insensitive occurrences of prep."""
    return [m.start() for m in _word_re(prep).finditer(text)]


def extract_instances(corpus: Corpus, prep: str) -> list[InstanceRecord]:
    """All instances of prep across subcorpora targeting it, sorted.

    Sort order is (frame, frame_element, lexical_unit, subcorpus,
    sentence_id, prep_start), which puts frames first as in the
    generated instance files.
    """
    if not prep or prep != prep.lower():
        raise ValueError(f"preposition must be non-empty lowercase: {prep!r}")
    records: list[InstanceRecord] = []
    seen_positions: dict[tuple[int, int], str] = {}
    for lu in corpus.lexical_units:
        for sub in lu.subcorpora:
            if parse_subcorpus_name(sub.name).target_preposition != prep:
                continue
            found = 0
            for sent in sub.sentences:
                for start in find_occurrences(sent.text, prep):
                    span = frame_element_at(sent, start)
                    if span is None:
                        continue
                    pos = (sent.sentence_id, start)
                    if pos in seen_positions:
                        raise DataError(
                            f"instance id {sent.sentence_id}-{start} arises "
                            f"in both {seen_positions[pos]} and {lu.name}; "
                            f"sentence ids must be corpus-wide unique"
                        )
                    seen_positions[pos] = lu.name
                    records.append(
                        InstanceRecord(
                            lu.frame, span.frame_element, lu.name, sub.name,
                            sent.sentence_id, start,
                        )
                    )
                    found += 1
            if found == 0:
                records.append(
                    InstanceRecord(lu.frame, NO_INSTANCES, lu.name, sub.name,
                                   None, None)
                )
    records.sort(key=_sort_key)
    return records


def write_instance_file(records: list[InstanceRecord], sink: IO[str]) -> int:
    """Write the instance TSV; returns UTF-8 byte count."""
    rows = []
    for rec in records:
        rows.append([
            tsvio.escape_cell(rec.frame),
            tsvio.escape_cell(rec.frame_element),
            tsvio.escape_cell(rec.lexical_unit),
            tsvio.escape_cell(rec.subcorpus),
            "" if rec.is_placeholder else rec.instance_id,
        ])
    return tsvio.write_rows(sink, INSTANCE_HEADER, rows)


def read_instance_file(source: IO[str]) -> list[InstanceRecord]:
    """Inverse of write_instance_file; raises DataFormatError with line numbers."""
    records: list[InstanceRecord] = []
    for lineno, cells in tsvio.iter_rows(source, INSTANCE_HEADER):
        frame, fe, lu, sub = (tsvio.unescape_cell(c) for c in cells[:4])
        ident = cells[4]
        if fe == NO_INSTANCES:
            if ident:
                raise DataFormatError(
                    lineno, "No-instances row must leave the identifier empty"
                )
            records.append(InstanceRecord(frame, fe, lu, sub, None, None))
            continue
        m = _ID_RE.match(ident)
        if not m:
            raise DataFormatError(
                lineno, f"bad identifier-position {ident!r}, want <id>-<offset>"
            )
        records.append(
            InstanceRecord(frame, fe, lu, sub, int(m.group(1)), int(m.group(2)))
        )
    return records
