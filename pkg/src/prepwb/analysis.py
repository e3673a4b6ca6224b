"""Aggregations over tags and corpus annotation.

Four artifacts, all deterministic:

  pairs_by_sense       which (frame, frame element) pairs a sense covers
  lexical_units_by_pair  which lexical units attest a sense's pairs
  expand_realizations  every unique way a seeded pair is realized
                       (grammatical function, phrase type, preposition)
  substitutable_prepositions / alternation_patterns  summaries over the
                       expansion output

Expansion reads the GF and PT labels co-extensive with each seeded FE
span (exact start/end match). A missing label becomes the marker "-" and
is counted in the report's diagnostics. GF "DNI" stands alone: the
element is anaphoric, so it carries no phrase type and no preposition.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import IO, Iterable

from . import tsvio
from .corpus import Corpus, iter_sentences
from .errors import DanglingInstanceError, DataError, DataFormatError
from .instances import InstanceRecord
from .preplist import DEFAULT_PREPOSITIONS
from .senses import Inventory, SenseKey, parse_sense_key
from .tagging import TagSet, taggable_records

EXPANSION_HEADER = "Frame\tFrameElement\tLexicalUnit\tGF\tPT\tPreposition"

MISSING = "-"

_WORD_RE = re.compile(r"[^\W\d_]+")


@dataclass(frozen=True)
class PairBySense:
    sense: SenseKey
    pairs: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "pairs", tuple(self.pairs))
        if list(self.pairs) != sorted(set(self.pairs)):
            raise ValueError("pairs must be sorted and unique")


@dataclass(frozen=True)
class RealizationTuple:
    frame: str
    frame_element: str
    lexical_unit: str
    grammatical_function: str
    phrase_type: str | None
    preposition: str | None

    def __post_init__(self) -> None:
        if (self.phrase_type == "PP") != (self.preposition is not None):
            raise ValueError(
                "preposition must be present exactly for PT == PP: "
                f"{self.phrase_type!r} / {self.preposition!r}"
            )

    def sort_key(self):
        return (
            self.frame, self.frame_element, self.lexical_unit,
            self.grammatical_function, self.phrase_type or "",
            self.preposition or "",
        )


@dataclass
class ExpansionReport:
    tuples: list[RealizationTuple]
    missing_gf: int = 0
    missing_pt: int = 0
    headless_pp: int = 0


@dataclass(frozen=True)
class AlternationPattern:
    lexical_unit_pos: str
    grammatical_function: str
    phrase_type: str | None
    support: int

    def __post_init__(self) -> None:
        if self.lexical_unit_pos not in ("v", "n", "a"):
            raise ValueError(f"bad pattern POS {self.lexical_unit_pos!r}")
        if self.support < 1:
            raise ValueError("support must be >= 1")

    @property
    def rendered(self) -> str:
        if self.grammatical_function == "DNI" and self.phrase_type is None:
            return "DNI"
        return f"{self.grammatical_function} {self.phrase_type or MISSING}"


def _record_index(records: list[InstanceRecord]) -> dict[str, InstanceRecord]:
    return {rec.instance_id: rec for rec in taggable_records(records)}


def pairs_by_sense(
    tags: TagSet, records: list[InstanceRecord]
) -> list[PairBySense]:
    """The deduplicated (frame, FE) pair list per sense key used in tags."""
    index = _record_index(records)
    dangling = sorted(set(tags.tags) - set(index))
    if dangling:
        raise DanglingInstanceError(dangling)
    buckets: dict[str, set[tuple[str, str]]] = {}
    for iid, tag in tags.tags.items():
        rec = index[iid]
        for key in tag.sense_keys:
            buckets.setdefault(key, set()).add((rec.frame, rec.frame_element))
    out = []
    for key_text in sorted(buckets, key=lambda k: parse_sense_key(k).ordinal):
        out.append(
            PairBySense(parse_sense_key(key_text), tuple(sorted(buckets[key_text])))
        )
    return out


def lexical_units_by_pair(
    tags: TagSet, records: list[InstanceRecord], sense: SenseKey | str
) -> dict[tuple[str, str], list[str]]:
    """For one sense: pair -> sorted lexical units attesting it.

    An unused sense yields an empty map.
    """
    if isinstance(sense, str):
        sense = parse_sense_key(sense)
    index = _record_index(records)
    dangling = sorted(set(tags.tags) - set(index))
    if dangling:
        raise DanglingInstanceError(dangling)
    found: dict[tuple[str, str], set[str]] = {}
    for iid, tag in tags.tags.items():
        rec = index[iid]
        for key_text in tag.sense_keys:
            key = parse_sense_key(key_text)
            if key.number != sense.number or key.letter != sense.letter:
                continue
            if sense.ordinal is not None and key.ordinal != sense.ordinal:
                continue
            found.setdefault((rec.frame, rec.frame_element), set()).add(
                rec.lexical_unit
            )
    return {pair: sorted(units) for pair, units in sorted(found.items())}


def leading_preposition(
    span_text: str, prep_list: Iterable[str] = DEFAULT_PREPOSITIONS
) -> str | None:
    """First whole word of the span, lowercased, extended to the longest
    matching multiword preposition ("out of" beats "out")."""
    m = _WORD_RE.search(span_text)
    if not m:
        return None
    lowered = span_text.lower()
    best = m.group(0).lower()
    for prep in prep_list:
        if " " not in prep or len(prep) <= len(best):
            continue
        if not lowered.startswith(prep, m.start()):
            continue
        tail = m.start() + len(prep)
        if tail < len(lowered) and _WORD_RE.match(lowered[tail]):
            continue
        best = prep
    return best


def expand_realizations(
    corpus: Corpus,
    seeds: set[tuple[str, str]],
    prep_list: Iterable[str] = DEFAULT_PREPOSITIONS,
) -> ExpansionReport:
    """Unique realization tuples for every seeded (frame, FE) pair."""
    if not seeds:
        raise ValueError("expand_realizations needs at least one seed pair")
    prep_list = tuple(prep_list)
    report = ExpansionReport([])
    seen: set[RealizationTuple] = set()
    for lu, _sub, sent in iter_sentences(corpus):
        for span in sent.fe_spans:
            if (lu.frame, span.frame_element) not in seeds:
                continue
            gf = pt = None
            for lab in sent.layer_labels:
                if (lab.start, lab.end) != (span.start, span.end):
                    continue
                if lab.layer == "GF" and gf is None:
                    gf = lab.label
                elif lab.layer == "PT" and pt is None:
                    pt = lab.label
            if gf == "DNI":
                tup = RealizationTuple(
                    lu.frame, span.frame_element, lu.name, "DNI", None, None
                )
            else:
                if gf is None:
                    report.missing_gf += 1
                    gf = MISSING
                if pt is None:
                    report.missing_pt += 1
                    pt = MISSING
                prep = None
                if pt == "PP":
                    prep = leading_preposition(
                        sent.text[span.start:span.end], prep_list
                    )
                    if prep is None:
                        report.headless_pp += 1
                        prep = MISSING
                tup = RealizationTuple(
                    lu.frame, span.frame_element, lu.name, gf, pt, prep
                )
            seen.add(tup)
    report.tuples = sorted(seen, key=RealizationTuple.sort_key)
    return report


def substitutable_prepositions(
    tuples: list[RealizationTuple],
    sense_pairs: PairBySense,
    study_preposition: str,
) -> list[str]:
    """Other prepositions attested for the sense's pairs, by support."""
    wanted = set(sense_pairs.pairs)
    counts: Counter[str] = Counter()
    for tup in tuples:
        if (tup.frame, tup.frame_element) not in wanted:
            continue
        prep = tup.preposition
        if prep is None or prep == MISSING or prep == study_preposition:
            continue
        counts[prep] += 1
    return sorted(counts, key=lambda p: (-counts[p], p))


def alternation_patterns(
    tuples: list[RealizationTuple],
) -> list[AlternationPattern]:
    """Distinct (GF, PT) realizations per lexical-unit part of speech."""
    counts: Counter[tuple[str, str, str | None]] = Counter()
    for tup in tuples:
        pos = tup.lexical_unit.rsplit(".", 1)[-1]
        if pos not in ("v", "n", "a"):
            raise DataError(
                f"lexical unit {tup.lexical_unit!r} is not verb/noun/adjective"
            )
        counts[(pos, tup.grammatical_function, tup.phrase_type)] += 1
    pos_rank = {"v": 0, "n": 1, "a": 2}
    patterns = [
        AlternationPattern(pos, gf, pt, n)
        for (pos, gf, pt), n in counts.items()
    ]
    patterns.sort(
        key=lambda p: (pos_rank[p.lexical_unit_pos], -p.support, p.rendered)
    )
    return patterns


def write_expansion(tuples: list[RealizationTuple], sink: IO[str]) -> int:
    """Write the expansion TSV; empty PT/Preposition cells mean absent."""
    rows = []
    for tup in tuples:
        rows.append([
            tsvio.escape_cell(tup.frame),
            tsvio.escape_cell(tup.frame_element),
            tsvio.escape_cell(tup.lexical_unit),
            tsvio.escape_cell(tup.grammatical_function),
            tsvio.escape_cell(tup.phrase_type or ""),
            tsvio.escape_cell(tup.preposition or ""),
        ])
    return tsvio.write_rows(sink, EXPANSION_HEADER, rows)


def read_expansion(source: IO[str]) -> list[RealizationTuple]:
    tuples = []
    for lineno, cells in tsvio.iter_rows(source, EXPANSION_HEADER):
        frame, fe, lu, gf, pt, prep = (tsvio.unescape_cell(c) for c in cells)
        try:
            tuples.append(
                RealizationTuple(frame, fe, lu, gf, pt or None, prep or None)
            )
        except ValueError as exc:
            raise DataFormatError(lineno, str(exc)) from None
    return tuples


def write_pairs(
    pairs: list[PairBySense], inventory: Inventory, sink: IO[str]
) -> int:
    """One row per (sense, frame, FE) with the sense's relation name."""
    rows = []
    for entry in pairs:
        rec = inventory.find(entry.sense)
        relation = rec.relation_name if rec else ""
        for frame, fe in entry.pairs:
            rows.append([
                str(entry.sense), relation,
                tsvio.escape_cell(frame), tsvio.escape_cell(fe),
            ])
    return tsvio.write_rows(sink, "Sense\tRelationName\tFrame\tFrameElement", rows)


def write_units(
    units: dict[tuple[str, str], list[str]], sink: IO[str]
) -> int:
    rows = [
        [tsvio.escape_cell(frame), tsvio.escape_cell(fe), ",".join(lus)]
        for (frame, fe), lus in units.items()
    ]
    return tsvio.write_rows(sink, "Frame\tFrameElement\tLexicalUnits", rows)


def write_substitutables(preps: list[str], sink: IO[str]) -> int:
    return tsvio.write_rows(sink, "Preposition", [[p] for p in preps])


def write_patterns(patterns: list[AlternationPattern], sink: IO[str]) -> int:
    rows = [
        [p.lexical_unit_pos, p.rendered, str(p.support)] for p in patterns
    ]
    return tsvio.write_rows(sink, "Pos\tPattern\tSupport", rows)
