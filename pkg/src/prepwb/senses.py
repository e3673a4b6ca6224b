"""Per-preposition sense inventories.

A sense is keyed two ways at once: a running ordinal (1, 2, 3, ...) and a
dictionary-style key of core number plus optional subsense letter, written
"(1)", "(1a)", "(2)". The rendered form used in files combines both:
"2 (1a)". Ordinals are append-only; creating a subsense never renumbers
anything, so existing tags stay valid.

Keys parsed from bare "(1a)" text have no ordinal; they compare by the
dictionary part only. core_of strips the letter, yielding such a bare key.

Inventory file `<prep>.senses.tsv` columns:

    Sense  RelationName  QuirkSyntax  QuirkParagraphs  ComplementProperties
    AttachmentProperties  SimilarPreps  ComplementCats  AttachmentCats  Origin

Multi-valued cells are comma-separated. QuirkSyntax codes come from the
fixed grammar-pattern set {1, 2a, 2b, 2c, 2d, 3a, 3b}; an AttachmentCats
token "kind=verb|noun|adjective|copula" constrains the attachment word
class instead of naming a category.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import IO, Iterable

from . import tsvio
from .errors import DataFormatError, UnknownSenseError

QUIRK_CODES = ("1", "2a", "2b", "2c", "2d", "3a", "3b")
ORIGINS = ("imported", "subsense_added", "new_sense_added")

SENSES_HEADER = (
    "Sense\tRelationName\tQuirkSyntax\tQuirkParagraphs\tComplementProperties"
    "\tAttachmentProperties\tSimilarPreps\tComplementCats\tAttachmentCats\tOrigin"
)

_KEY_RE = re.compile(r"^(?:(\d+) )?\((\d+)([a-z]?)\)$")
_RELATION_RE = re.compile(r"^[A-Z][A-Za-z0-9]*$")
_LETTERS = "abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True, slots=True)
class SenseKey:
    """ordinal may be None for bare dictionary keys like "(1)"."""

    ordinal: int | None
    number: int
    letter: str = ""

    def __post_init__(self) -> None:
        if self.ordinal is not None and self.ordinal < 1:
            raise ValueError("ordinal must be positive")
        if self.number < 1:
            raise ValueError("sense number must be positive")
        if self.letter and (len(self.letter) != 1 or self.letter not in _LETTERS):
            raise ValueError(f"subsense letter must be a-z, not {self.letter!r}")

    @property
    def ode_key(self) -> str:
        return f"({self.number}{self.letter})"

    @property
    def is_core(self) -> bool:
        return self.letter == ""

    def __str__(self) -> str:
        if self.ordinal is None:
            return self.ode_key
        return f"{self.ordinal} {self.ode_key}"


def parse_sense_key(text: str) -> SenseKey:
    """Parse "2 (1a)" or the bare "(1a)" form."""
    m = _KEY_RE.match(text)
    if not m:
        raise ValueError(f"bad sense key {text!r}")
    ordinal = int(m.group(1)) if m.group(1) else None
    return SenseKey(ordinal, int(m.group(2)), m.group(3))


def core_of(key: SenseKey) -> SenseKey:
    """Strip the subsense letter; core keys map to themselves."""
    if key.is_core:
        return key
    return SenseKey(None, key.number, "")


@dataclass(frozen=True)
class SenseRecord:
    preposition: str
    key: SenseKey
    relation_name: str
    quirk_syntax: frozenset[str]
    quirk_paragraphs: tuple[str, ...] = ()
    complement_properties: str = ""
    attachment_properties: str = ""
    similar_prepositions: tuple[str, ...] = ()
    complement_categories: tuple[str, ...] = ()
    attachment_categories: tuple[str, ...] = ()
    origin: str = "imported"

    def __post_init__(self) -> None:
        object.__setattr__(self, "quirk_syntax", frozenset(self.quirk_syntax))
        object.__setattr__(self, "quirk_paragraphs", tuple(self.quirk_paragraphs))
        object.__setattr__(
            self, "similar_prepositions", tuple(self.similar_prepositions)
        )
        object.__setattr__(
            self, "complement_categories", tuple(self.complement_categories)
        )
        object.__setattr__(
            self, "attachment_categories", tuple(self.attachment_categories)
        )
        if not self.preposition:
            raise ValueError("preposition must be non-empty")
        if self.key.ordinal is None:
            raise ValueError("inventory records need a full key with ordinal")
        if not _RELATION_RE.match(self.relation_name):
            raise ValueError(
                f"relation name {self.relation_name!r} must be CamelCase"
            )
        if not self.quirk_syntax:
            raise ValueError("quirk_syntax must be non-empty")
        bad = self.quirk_syntax - set(QUIRK_CODES)
        if bad:
            raise ValueError(f"unknown quirk syntax codes {sorted(bad)}")
        for group in (
            self.quirk_paragraphs,
            self.similar_prepositions,
            self.complement_categories,
            self.attachment_categories,
        ):
            for token in group:
                if not token or any(ch in token for ch in ",\t\n\r"):
                    raise ValueError(f"bad list token {token!r}")
        if self.origin not in ORIGINS:
            raise ValueError(f"origin must be one of {ORIGINS}")

    def quirk_syntax_sorted(self) -> list[str]:
        return [c for c in QUIRK_CODES if c in self.quirk_syntax]


@dataclass
class Inventory:
    preposition: str
    senses: list[SenseRecord] = field(default_factory=list)
    notes: str = ""
    summary: str = ""

    def __post_init__(self) -> None:
        _check_sense_order(self.senses)

    def find(self, key: SenseKey | str) -> SenseRecord | None:
        if isinstance(key, str):
            key = parse_sense_key(key)
        for rec in self.senses:
            if rec.key.number != key.number or rec.key.letter != key.letter:
                continue
            if key.ordinal is None or key.ordinal == rec.key.ordinal:
                return rec
        return None

    def require(self, key: SenseKey | str) -> SenseRecord:
        rec = self.find(key)
        if rec is None:
            raise UnknownSenseError([str(key)], self.preposition)
        return rec


def _check_sense_order(senses: Iterable[SenseRecord]) -> None:
    last = 0
    ode_seen: set[str] = set()
    for rec in senses:
        if rec.key.ordinal <= last:
            raise ValueError(
                f"ordinals must be strictly increasing; {rec.key} after {last}"
            )
        last = rec.key.ordinal
        if rec.key.ode_key in ode_seen:
            raise ValueError(f"duplicate sense key {rec.key.ode_key}")
        ode_seen.add(rec.key.ode_key)


def add_subsense(inv: Inventory, parent: SenseKey | str, fields: dict) -> SenseKey:
    """Append a subsense under a core sense; returns the new key.

    The new record inherits any field the fragment leaves out from the
    parent. Never renumbers: ordinal is max + 1, letter is the first
    unused one under the parent's number.
    """
    if isinstance(parent, str):
        parent = parse_sense_key(parent)
    parent_rec = inv.find(parent)
    if parent_rec is None:
        raise UnknownSenseError([str(parent)], inv.preposition)
    if not parent_rec.key.is_core:
        raise ValueError(f"parent {parent_rec.key} is not a core sense")
    used = {
        rec.key.letter
        for rec in inv.senses
        if rec.key.number == parent_rec.key.number and rec.key.letter
    }
    letter = next((c for c in _LETTERS if c not in used), None)
    if letter is None:
        raise ValueError(
            f"no subsense letters left under {parent_rec.key.ode_key}"
        )
    ordinal = max(rec.key.ordinal for rec in inv.senses) + 1
    key = SenseKey(ordinal, parent_rec.key.number, letter)
    allowed = {
        "relation_name", "quirk_syntax", "quirk_paragraphs",
        "complement_properties", "attachment_properties",
        "similar_prepositions", "complement_categories",
        "attachment_categories",
    }
    unknown = set(fields) - allowed
    if unknown:
        raise ValueError(f"unknown sense fields {sorted(unknown)}")
    rec = replace(
        parent_rec, key=key, origin="subsense_added",
        **{k: v for k, v in fields.items() if v is not None},
    )
    inv.senses.append(rec)
    return key


def _split(cell: str) -> tuple[str, ...]:
    cell = cell.strip()
    if not cell:
        return ()
    return tuple(part.strip() for part in cell.split(","))


def load_inventory(
    source: IO[str] | str | Path, preposition: str | None = None
) -> Inventory:
    """Load `<prep>.senses.tsv`. The preposition comes from the filename
    unless passed explicitly (required for bare streams)."""
    if isinstance(source, (str, Path)):
        path = Path(source)
        if preposition is None:
            stem = path.name
            if not stem.endswith(".senses.tsv"):
                raise ValueError(
                    f"cannot infer preposition from filename {path.name!r}"
                )
            preposition = stem[: -len(".senses.tsv")]
        with open(path, encoding="utf-8", newline="") as handle:
            return load_inventory(handle, preposition)
    if not preposition:
        raise ValueError("preposition required when loading from a stream")

    senses: list[SenseRecord] = []
    for lineno, cells in tsvio.iter_rows(source, SENSES_HEADER):
        try:
            key = parse_sense_key(cells[0])
            rec = SenseRecord(
                preposition=preposition,
                key=key,
                relation_name=cells[1],
                quirk_syntax=frozenset(_split(cells[2])),
                quirk_paragraphs=_split(cells[3]),
                complement_properties=tsvio.unescape_cell(cells[4]),
                attachment_properties=tsvio.unescape_cell(cells[5]),
                similar_prepositions=_split(cells[6]),
                complement_categories=_split(cells[7]),
                attachment_categories=_split(cells[8]),
                origin=cells[9],
            )
            senses.append(rec)
            _check_sense_order(senses)
        except ValueError as exc:
            raise DataFormatError(lineno, str(exc)) from None
    return Inventory(preposition, senses)


def save_inventory(inv: Inventory, sink: IO[str]) -> int:
    """Write the senses TSV; returns UTF-8 byte count."""
    rows = []
    for rec in inv.senses:
        rows.append([
            str(rec.key),
            rec.relation_name,
            ",".join(rec.quirk_syntax_sorted()),
            ",".join(rec.quirk_paragraphs),
            tsvio.escape_cell(rec.complement_properties),
            tsvio.escape_cell(rec.attachment_properties),
            ",".join(rec.similar_prepositions),
            ",".join(rec.complement_categories),
            ",".join(rec.attachment_categories),
            rec.origin,
        ])
    return tsvio.write_rows(sink, SENSES_HEADER, rows)
