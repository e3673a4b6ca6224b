"""Corpus model and XML ingestion for lexical-unit annotation files.

One XML file per lexical unit:

    <lexunit name="arrest.v" frame="Arrest">
      <subcorpus name="V-730-s20-ppby">
        <sentence id="875350">
          <text>...the man was arrested by the local police...</text>
          <label layer="FE" name="Authorities" start="43" end="62"/>
          <label layer="GF" name="Comp"        start="43" end="62"/>
          <label layer="PT" name="PP"          start="43" end="62"/>
        </sentence>
      </subcorpus>
    </lexunit>

Offsets are 0-based character positions into the sentence text; end is
exclusive. Layer names are restricted to FE, GF, and PT. The <text>
element must precede the labels so spans can be checked on sight.

Subcorpus names are hyphen-separated alphanumeric tokens; a token of the
form "pp" + letters marks the target preposition (e.g. "ppby").
"""

from __future__ import annotations

import re
import xml.parsers.expat
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

from .errors import CorpusFormatError, CorpusLoadError

_POS_TAGS = ("v", "n", "a", "adv", "prep")
_LU_NAME_RE = re.compile(r"^(.+)\.(%s)$" % "|".join(_POS_TAGS))
_NAME_TOKEN_RE = re.compile(r"^[A-Za-z0-9]+$")
_PP_TOKEN_RE = re.compile(r"^pp([a-z]+)$")

LAYERS = ("FE", "GF", "PT")


@dataclass(frozen=True, slots=True)
class FESpan:
    """A frame-element annotation over [start, end) of the sentence text."""

    frame_element: str
    start: int
    end: int

    def __post_init__(self) -> None:
        if not self.frame_element:
            raise ValueError("frame_element must be non-empty")
        if not (0 <= self.start < self.end):
            raise ValueError(
                f"bad span [{self.start}, {self.end}) for {self.frame_element!r}"
            )


@dataclass(frozen=True, slots=True)
class LayerLabel:
    """A GF or PT annotation over [start, end) of the sentence text."""

    layer: str
    label: str
    start: int
    end: int

    def __post_init__(self) -> None:
        if self.layer not in ("GF", "PT"):
            raise ValueError(f"layer must be GF or PT, not {self.layer!r}")
        if not self.label:
            raise ValueError("label must be non-empty")
        if not (0 <= self.start < self.end):
            raise ValueError(f"bad span [{self.start}, {self.end})")


@dataclass(frozen=True)
class AnnotatedSentence:
    sentence_id: int
    text: str
    fe_spans: tuple[FESpan, ...]
    layer_labels: tuple[LayerLabel, ...]
    _fe_by_start: dict = field(
        init=False, repr=False, compare=False, default_factory=dict
    )

    def __post_init__(self) -> None:
        object.__setattr__(self, "fe_spans", tuple(self.fe_spans))
        object.__setattr__(self, "layer_labels", tuple(self.layer_labels))
        if self.sentence_id < 0:
            raise ValueError(f"sentence_id must be >= 0, not {self.sentence_id}")
        n = len(self.text)
        for span in self.fe_spans:
            if span.end > n:
                raise ValueError(f"span end {span.end} past text length {n}")
            if span.start in self._fe_by_start:
                raise ValueError(
                    f"two FE spans start at offset {span.start} "
                    f"in sentence {self.sentence_id}"
                )
            self._fe_by_start[span.start] = span
        for lab in self.layer_labels:
            if lab.end > n:
                raise ValueError(f"label end {lab.end} past text length {n}")


def frame_element_at(sentence: AnnotatedSentence, offset: int) -> FESpan | None:
    """Return the FE span starting exactly at offset, if any."""
    return sentence._fe_by_start.get(offset)


@dataclass(frozen=True)
class Subcorpus:
    name: str
    sentences: tuple[AnnotatedSentence, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "sentences", tuple(self.sentences))
        check_subcorpus_name(self.name)


def check_subcorpus_name(name: str) -> None:
    """Raise ValueError unless name is hyphen-joined [A-Za-z0-9]+ tokens."""
    if not name:
        raise ValueError("subcorpus name must be non-empty")
    for token in name.split("-"):
        if not _NAME_TOKEN_RE.match(token):
            raise ValueError(f"bad token {token!r} in subcorpus name {name!r}")


@dataclass(frozen=True)
class SubcorpusDescriptor:
    raw_name: str
    target_preposition: str | None
    other_tokens: tuple[str, ...]


def parse_subcorpus_name(name: str) -> SubcorpusDescriptor:
    """Split a subcorpus name; the last pp-token names the target preposition.

    Total over non-empty strings: a name with no pp-token simply has no
    target preposition.
    """
    if not name:
        raise ValueError("subcorpus name must be non-empty")
    tokens = name.split("-")
    pick = -1
    for i, token in enumerate(tokens):
        if _PP_TOKEN_RE.match(token):
            pick = i
    if pick < 0:
        return SubcorpusDescriptor(name, None, tuple(tokens))
    others = tuple(tokens[:pick] + tokens[pick + 1 :])
    return SubcorpusDescriptor(name, tokens[pick][2:], others)


@dataclass(frozen=True)
class LexicalUnit:
    name: str
    frame: str
    subcorpora: tuple[Subcorpus, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "subcorpora", tuple(self.subcorpora))
        if not _LU_NAME_RE.match(self.name):
            raise ValueError(
                f"lexical unit name {self.name!r} must be lemma.pos "
                f"with pos in {_POS_TAGS}"
            )
        if not self.frame:
            raise ValueError("frame must be non-empty")
        names = [sub.name for sub in self.subcorpora]
        if len(names) != len(set(names)):
            # instance ids embed the subcorpus name, so reuse would collide
            raise ValueError(f"duplicate subcorpus name in {self.name!r}")

    @property
    def lemma(self) -> str:
        return self.name.rsplit(".", 1)[0]

    @property
    def pos(self) -> str:
        return self.name.rsplit(".", 1)[1]


@dataclass(frozen=True)
class Corpus:
    lexical_units: tuple[LexicalUnit, ...]
    source_root: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "lexical_units", tuple(self.lexical_units))
        seen = set()
        for lu in self.lexical_units:
            key = (lu.name, lu.frame)
            if key in seen:
                raise ValueError(f"duplicate lexical unit {lu.name!r} in {lu.frame!r}")
            seen.add(key)


def iter_sentences(
    corpus: Corpus,
) -> Iterator[tuple[LexicalUnit, Subcorpus, AnnotatedSentence]]:
    for lu in corpus.lexical_units:
        for sub in lu.subcorpora:
            for sent in sub.sentences:
                yield lu, sub, sent


class _LexUnitParser:
    """Expat-driven builder; expat keeps exact line numbers for errors."""

    def __init__(self, path: str) -> None:
        self.path = path
        self.parser = xml.parsers.expat.ParserCreate()
        self.parser.StartElementHandler = self._start
        self.parser.EndElementHandler = self._end
        self.parser.CharacterDataHandler = self._chars
        self.lu_name: str | None = None
        self.frame: str | None = None
        self.subcorpora: list[Subcorpus] = []
        self.sub_name: str | None = None
        self.sentences: list[AnnotatedSentence] = []
        self.sent_id: int | None = None
        self.sent_line = 0
        self.text: str | None = None
        self.fe_spans: list[FESpan] = []
        self.fe_starts: set[int] = set()
        self.layer_labels: list[LayerLabel] = []
        self.in_text = False
        self.text_parts: list[str] = []

    def fail(self, message: str) -> CorpusFormatError:
        return CorpusFormatError(self.path, self.parser.CurrentLineNumber, message)

    def _attr(self, attrs: dict, name: str, elem: str) -> str:
        try:
            return attrs[name]
        except KeyError:
            raise self.fail(f"<{elem}> missing required attribute {name!r}") from None

    def _int_attr(self, attrs: dict, name: str, elem: str) -> int:
        raw = self._attr(attrs, name, elem)
        if not raw.isdigit():
            raise self.fail(f"<{elem}> attribute {name}={raw!r} is not an integer")
        return int(raw)

    def _start(self, name: str, attrs: dict) -> None:
        if self.in_text:
            raise self.fail(f"unexpected <{name}> inside <text>")
        if name == "lexunit":
            if self.lu_name is not None:
                raise self.fail("nested <lexunit>")
            self.lu_name = self._attr(attrs, "name", name)
            self.frame = self._attr(attrs, "frame", name)
            if not _LU_NAME_RE.match(self.lu_name):
                raise self.fail(f"bad lexical unit name {self.lu_name!r}")
            if not self.frame:
                raise self.fail("empty frame attribute")
        elif name == "subcorpus":
            if self.lu_name is None or self.sub_name is not None:
                raise self.fail("<subcorpus> out of place")
            self.sub_name = self._attr(attrs, "name", name)
            try:
                check_subcorpus_name(self.sub_name)
            except ValueError as exc:
                raise self.fail(str(exc)) from None
            self.sentences = []
        elif name == "sentence":
            if self.sub_name is None or self.sent_id is not None:
                raise self.fail("<sentence> out of place")
            self.sent_id = self._int_attr(attrs, "id", name)
            self.sent_line = self.parser.CurrentLineNumber
            self.text = None
            self.fe_spans = []
            self.fe_starts = set()
            self.layer_labels = []
        elif name == "text":
            if self.sent_id is None:
                raise self.fail("<text> outside <sentence>")
            if self.text is not None:
                raise self.fail("second <text> in sentence")
            self.in_text = True
            self.text_parts = []
        elif name == "label":
            self._label(attrs)
        else:
            raise self.fail(f"unexpected element <{name}>")

    def _label(self, attrs: dict) -> None:
        if self.sent_id is None:
            raise self.fail("<label> outside <sentence>")
        if self.text is None:
            raise self.fail("<label> before <text>")
        layer = self._attr(attrs, "layer", "label")
        label = self._attr(attrs, "name", "label")
        start = self._int_attr(attrs, "start", "label")
        end = self._int_attr(attrs, "end", "label")
        if layer not in LAYERS:
            raise self.fail(f"unknown layer {layer!r}")
        if not label:
            raise self.fail("empty label name")
        if not (0 <= start < end <= len(self.text)):
            raise self.fail(
                f"span [{start}, {end}) out of bounds for text of "
                f"length {len(self.text)}"
            )
        if layer == "FE":
            if start in self.fe_starts:
                raise self.fail(f"two FE spans start at offset {start}")
            self.fe_starts.add(start)
            self.fe_spans.append(FESpan(label, start, end))
        else:
            self.layer_labels.append(LayerLabel(layer, label, start, end))

    def _end(self, name: str) -> None:
        if name == "text":
            self.in_text = False
            self.text = "".join(self.text_parts)
        elif name == "sentence":
            if self.text is None:
                raise self.fail("<sentence> without <text>")
            try:
                sent = AnnotatedSentence(
                    self.sent_id, self.text, tuple(self.fe_spans),
                    tuple(self.layer_labels),
                )
            except ValueError as exc:
                raise CorpusFormatError(self.path, self.sent_line, str(exc)) from None
            self.sentences.append(sent)
            self.sent_id = None
        elif name == "subcorpus":
            self.subcorpora.append(Subcorpus(self.sub_name, tuple(self.sentences)))
            self.sub_name = None

    def _chars(self, data: str) -> None:
        if self.in_text:
            self.text_parts.append(data)
        elif data.strip():
            raise self.fail(f"unexpected text {data.strip()!r} between elements")

    def parse(self, payload: bytes) -> LexicalUnit:
        try:
            self.parser.Parse(payload, True)
        except xml.parsers.expat.ExpatError as exc:
            raise CorpusFormatError(
                self.path, exc.lineno, xml.parsers.expat.errors.messages[exc.code]
            ) from None
        if self.lu_name is None:
            raise CorpusFormatError(self.path, 1, "no <lexunit> element")
        try:
            return LexicalUnit(self.lu_name, self.frame, tuple(self.subcorpora))
        except ValueError as exc:
            raise CorpusFormatError(self.path, 1, str(exc)) from None


def load_lexical_unit(path: str | Path) -> LexicalUnit:
    """Parse one lexical-unit XML file. Raises CorpusFormatError."""
    payload = Path(path).read_bytes()
    return _LexUnitParser(str(path)).parse(payload)


def load_corpus(root: str | Path) -> Corpus:
    """Load every *.xml file under root (non-recursive, sorted by filename).

    All malformed files are collected and reported together in a
    CorpusLoadError; nothing is skipped silently.
    """
    rootp = Path(root)
    if not rootp.is_dir():
        raise FileNotFoundError(f"corpus root {root} is not a directory")
    units: list[LexicalUnit] = []
    seen: dict[tuple[str, str], str] = {}
    failures: list[CorpusFormatError] = []
    for path in sorted(rootp.glob("*.xml")):
        try:
            lu = load_lexical_unit(path)
        except CorpusFormatError as exc:
            failures.append(exc)
            continue
        key = (lu.name, lu.frame)
        if key in seen:
            failures.append(
                CorpusFormatError(
                    str(path), 1,
                    f"duplicate lexical unit {lu.name!r} in frame {lu.frame!r} "
                    f"(first seen in {seen[key]})",
                )
            )
            continue
        seen[key] = path.name
        units.append(lu)
    if failures:
        raise CorpusLoadError(failures)
    return Corpus(tuple(units), source_root=str(rootp))


def _q(value: str) -> str:
    from xml.sax.saxutils import quoteattr

    return quoteattr(value)


def _esc(value: str) -> str:
    from xml.sax.saxutils import escape

    return escape(value)


def render_lexical_unit(lu: LexicalUnit) -> str:
    """Serialize one lexical unit back to the XML format above."""
    out: list[str] = [f"<lexunit name={_q(lu.name)} frame={_q(lu.frame)}>\n"]
    for sub in lu.subcorpora:
        out.append(f"  <subcorpus name={_q(sub.name)}>\n")
        for sent in sub.sentences:
            out.append(f'    <sentence id="{sent.sentence_id}">\n')
            out.append(f"      <text>{_esc(sent.text)}</text>\n")
            for span in sent.fe_spans:
                out.append(
                    f'      <label layer="FE" name={_q(span.frame_element)} '
                    f'start="{span.start}" end="{span.end}"/>\n'
                )
            for lab in sent.layer_labels:
                out.append(
                    f"      <label layer={_q(lab.layer)} name={_q(lab.label)} "
                    f'start="{lab.start}" end="{lab.end}"/>\n'
                )
            out.append("    </sentence>\n")
        out.append("  </subcorpus>\n")
    out.append("</lexunit>\n")
    return "".join(out)


def save_corpus(corpus: Corpus, dest: str | Path) -> list[Path]:
    """Write one XML file per lexical unit into dest; returns paths written."""
    destp = Path(dest)
    destp.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    for lu in corpus.lexical_units:
        path = destp / f"{lu.name}__{lu.frame}.xml"
        path.write_text(render_lexical_unit(lu), encoding="utf-8")
        written.append(path)
    return written
