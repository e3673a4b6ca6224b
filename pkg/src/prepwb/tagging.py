"""Sense tags over extracted instances, grouping, and progress counts.

Tags point at instance ids, not sentence text, so re-running extraction
over an unchanged corpus keeps every tag valid. Ids that no longer
resolve are reported by progress(), never silently dropped.

Tag file `<prep>.tags.tsv` columns: InstanceId, SenseKeys (semicolon-
separated rendered keys), Tagger, Note (may be empty).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import IO, Iterable

from . import tsvio
from .errors import DataFormatError
from .instances import InstanceRecord
from .senses import Inventory, SenseKey, parse_sense_key

TAGS_HEADER = "InstanceId\tSenseKeys\tTagger\tNote"

DEFAULT_TAGGER = "lexicographer"


@dataclass(frozen=True)
class TaggedInstance:
    instance_id: str
    sense_keys: tuple[str, ...]
    tagger: str = DEFAULT_TAGGER
    note: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "sense_keys", tuple(self.sense_keys))
        if not self.instance_id:
            raise ValueError("instance_id must be non-empty")
        if not self.sense_keys:
            raise ValueError("a tag needs at least one sense key")
        if len(set(self.sense_keys)) != len(self.sense_keys):
            raise ValueError(f"duplicate sense keys in tag: {self.sense_keys}")
        for key in self.sense_keys:
            parse_sense_key(key)
        if not self.tagger:
            raise ValueError("tagger must be non-empty")
        if self.note == "":
            object.__setattr__(self, "note", None)


@dataclass(frozen=True)
class InstanceGroup:
    frame: str
    frame_element: str
    lexical_unit: str
    members: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", tuple(self.members))
        if not self.members:
            raise ValueError("group must have members")


@dataclass
class TagSet:
    preposition: str
    tags: dict[str, TaggedInstance] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for iid, tag in self.tags.items():
            if iid != tag.instance_id:
                raise ValueError(f"tag map key {iid!r} != {tag.instance_id!r}")


@dataclass
class ProgressReport:
    tagged: int
    total: int
    per_sense: dict[str, int]
    unknown_ids: list[str]


def taggable_records(records: Iterable[InstanceRecord]) -> list[InstanceRecord]:
    return [rec for rec in records if not rec.is_placeholder]


def group_instances(records: list[InstanceRecord]) -> list[InstanceGroup]:
    """Partition taggable records by (frame, frame_element, lexical_unit)."""
    buckets: dict[tuple[str, str, str], list[str]] = {}
    for rec in records:
        if rec.is_placeholder:
            raise ValueError("group_instances expects placeholder rows filtered out")
        key = (rec.frame, rec.frame_element, rec.lexical_unit)
        buckets.setdefault(key, []).append(rec.instance_id)
    return [
        InstanceGroup(frame, fe, lu, tuple(sorted(members)))
        for (frame, fe, lu), members in sorted(buckets.items())
    ]


def canonical_keys(senses: Iterable[SenseKey | str], inventory: Inventory) -> list[str]:
    """Resolve keys against the inventory and render them fully.

    Raises UnknownSenseError for any key the inventory lacks. Output is
    deduplicated and sorted by ordinal; co-assigned senses are an
    unordered set.
    """
    resolved = {}
    for key in senses:
        rec = inventory.require(key)
        resolved[rec.key.ordinal] = str(rec.key)
    return [resolved[o] for o in sorted(resolved)]


def assign(
    tagset: TagSet,
    ids: list[str],
    senses: list[SenseKey | str],
    inventory: Inventory,
    tagger: str = DEFAULT_TAGGER,
    note: str | None = None,
) -> tuple[int, int]:
    """Tag every id with the given senses, overwriting prior tags.

    Returns (new, overwritten) counts.
    """
    if not ids:
        raise ValueError("assign needs at least one instance id")
    if not senses:
        raise ValueError("assign needs at least one sense key")
    keys = tuple(canonical_keys(senses, inventory))
    new = overwritten = 0
    for iid in ids:
        if iid in tagset.tags:
            overwritten += 1
        else:
            new += 1
        tagset.tags[iid] = TaggedInstance(iid, keys, tagger, note)
    return new, overwritten


def progress(tagset: TagSet, records: list[InstanceRecord]) -> ProgressReport:
    """Count tagged vs taggable instances and per-sense tag totals."""
    known = {rec.instance_id for rec in taggable_records(records)}
    tagged = 0
    per_sense: dict[str, int] = {}
    unknown: list[str] = []
    for iid, tag in sorted(tagset.tags.items()):
        if iid not in known:
            unknown.append(iid)
            continue
        tagged += 1
        for key in tag.sense_keys:
            per_sense[key] = per_sense.get(key, 0) + 1
    return ProgressReport(tagged, len(known), per_sense, unknown)


def save_tags(tagset: TagSet, sink: IO[str]) -> int:
    """Write the tags TSV (rows sorted by instance id); returns byte count."""
    rows = []
    for iid in sorted(tagset.tags):
        tag = tagset.tags[iid]
        rows.append([
            tsvio.escape_cell(iid),
            ";".join(tag.sense_keys),
            tsvio.escape_cell(tag.tagger),
            tsvio.escape_cell(tag.note or ""),
        ])
    return tsvio.write_rows(sink, TAGS_HEADER, rows)


def load_tags(source: IO[str], preposition: str) -> TagSet:
    """Inverse of save_tags; duplicate instance ids are an error."""
    tags: dict[str, TaggedInstance] = {}
    for lineno, cells in tsvio.iter_rows(source, TAGS_HEADER):
        iid = tsvio.unescape_cell(cells[0])
        if iid in tags:
            raise DataFormatError(lineno, f"duplicate instance id {iid!r}")
        try:
            tags[iid] = TaggedInstance(
                iid,
                tuple(cells[1].split(";")),
                tsvio.unescape_cell(cells[2]),
                tsvio.unescape_cell(cells[3]) or None,
            )
        except ValueError as exc:
            raise DataFormatError(lineno, str(exc)) from None
    return TagSet(preposition, tags)
