"""Rule-based preposition sense selection.

Each sense contributes one rule compiled from its category columns. A
rule has up to three constraint slots: complement categories, attachment
categories, and a required attachment word class (written as a
"kind=verb" style token in the attachment column). Slots are conjunctive;
the categories inside a slot are disjunctive. A sense with no constraints
at all becomes a catch-all that ranks behind everything else.

Scoring gives partial credit: one point per satisfied slot. Ties break by
inventory order, so earlier (more core) senses win.

Category membership is delegated to an oracle so different lexical
resources can back the same rules. The bundled oracle is a plain TSV
lexicon: CategoryId, Lemma, Pos.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import IO, Protocol

from . import tsvio
from .errors import DataError, DataFormatError
from .senses import Inventory, SenseKey

ATTACHMENT_KINDS = ("verb", "noun", "adjective", "copula")

LEXICON_HEADER = "CategoryId\tLemma\tPos"

_HEAD_POS = ("v", "n", "a")


class CategoryOracle(Protocol):
    def member(self, lemma: str, pos: str, category_id: str) -> bool: ...

    def known(self, category_id: str) -> bool: ...


@dataclass(frozen=True)
class DisambiguationContext:
    preposition: str
    complement_head: tuple[str, str]
    attachment_head: tuple[str, str]
    attachment_kind: str

    def __post_init__(self) -> None:
        for lemma, pos in (self.complement_head, self.attachment_head):
            if not lemma:
                raise ValueError("head lemma must be non-empty")
            if pos not in _HEAD_POS:
                raise ValueError(f"head pos must be one of {_HEAD_POS}: {pos!r}")
        if self.attachment_kind not in ATTACHMENT_KINDS:
            raise ValueError(
                f"attachment kind must be one of {ATTACHMENT_KINDS}: "
                f"{self.attachment_kind!r}"
            )


@dataclass(frozen=True)
class SenseRule:
    preposition: str
    sense: SenseKey
    complement_categories: tuple[str, ...]
    attachment_categories: tuple[str, ...]
    required_attachment_kind: str | None

    @property
    def catch_all(self) -> bool:
        return (
            not self.complement_categories
            and not self.attachment_categories
            and self.required_attachment_kind is None
        )


@dataclass(frozen=True)
class RankedSense:
    sense: SenseKey
    score: int
    matched_constraints: tuple[str, ...]
    matched: bool


def compile_rules(inv: Inventory, oracle: CategoryOracle | None = None) -> list[SenseRule]:
    """One rule per sense, in inventory order.

    With an oracle, unknown category ids are tolerated (the sense text
    may reference resources not yet built); check_rule_categories lists
    them for warning output.
    """
    rules = []
    for rec in inv.senses:
        kind = None
        att = []
        for token in rec.attachment_categories:
            if token.startswith("kind="):
                value = token[len("kind="):]
                if value not in ATTACHMENT_KINDS:
                    raise DataError(
                        f"sense {rec.key}: bad attachment kind {value!r}"
                    )
                if kind is not None and kind != value:
                    raise DataError(
                        f"sense {rec.key}: conflicting attachment kinds"
                    )
                kind = value
            else:
                att.append(token)
        rules.append(
            SenseRule(
                rec.preposition, rec.key,
                tuple(rec.complement_categories), tuple(att), kind,
            )
        )
    return rules


def check_rule_categories(
    rules: list[SenseRule], oracle: CategoryOracle
) -> list[str]:
    """Category ids referenced by the rules but unknown to the oracle."""
    unknown = set()
    for rule in rules:
        for cat in rule.complement_categories + rule.attachment_categories:
            if not oracle.known(cat):
                unknown.add(cat)
    return sorted(unknown)


def disambiguate(
    rules: list[SenseRule],
    oracle: CategoryOracle,
    ctx: DisambiguationContext,
) -> list[RankedSense]:
    """Rank every sense for the context; the best candidate comes first."""
    if not rules:
        raise DataError(f"unknown preposition {ctx.preposition!r}")
    for rule in rules:
        if rule.preposition != ctx.preposition:
            raise ValueError(
                f"rule for {rule.preposition!r} applied to {ctx.preposition!r}"
            )
    comp_lemma, comp_pos = ctx.complement_head
    att_lemma, att_pos = ctx.attachment_head
    scored: list[tuple[tuple, RankedSense]] = []
    for index, rule in enumerate(rules):
        satisfied: list[str] = []
        full = True
        if rule.complement_categories:
            hit = next(
                (c for c in rule.complement_categories
                 if oracle.member(comp_lemma, comp_pos, c)),
                None,
            )
            if hit is None:
                full = False
            else:
                satisfied.append(f"complement:{hit}")
        if rule.attachment_categories:
            hit = next(
                (c for c in rule.attachment_categories
                 if oracle.member(att_lemma, att_pos, c)),
                None,
            )
            if hit is None:
                full = False
            else:
                satisfied.append(f"attachment:{hit}")
        if rule.required_attachment_kind is not None:
            if ctx.attachment_kind == rule.required_attachment_kind:
                satisfied.append(f"attachment_kind:{rule.required_attachment_kind}")
            else:
                full = False
        ranked = RankedSense(rule.sense, len(satisfied), tuple(satisfied), full)
        scored.append(((-ranked.score, rule.catch_all, index), ranked))
    scored.sort(key=lambda item: item[0])
    return [ranked for _key, ranked in scored]


def render_ranking(ranking: list[RankedSense]) -> str:
    """TSV rendering used by the command line."""
    lines = ["Sense\tScore\tMatched\tConstraints\n"]
    for entry in ranking:
        lines.append(
            f"{entry.sense}\t{entry.score}\t"
            f"{'yes' if entry.matched else 'no'}\t"
            f"{','.join(entry.matched_constraints)}\n"
        )
    return "".join(lines)


class TsvLexicon:
    """CategoryOracle backed by an in-memory TSV lexicon."""

    def __init__(self, categories: dict[str, set[tuple[str, str]]]) -> None:
        self._categories = categories

    def member(self, lemma: str, pos: str, category_id: str) -> bool:
        rows = self._categories.get(category_id)
        return rows is not None and (lemma, pos) in rows

    def known(self, category_id: str) -> bool:
        return category_id in self._categories

    def category_ids(self) -> list[str]:
        return sorted(self._categories)


def oracle_from_lexicon(source: IO[str] | str | Path) -> TsvLexicon:
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8", newline="") as handle:
            return oracle_from_lexicon(handle)
    categories: dict[str, set[tuple[str, str]]] = {}
    for lineno, cells in tsvio.iter_rows(source, LEXICON_HEADER):
        cat, lemma, pos = cells
        if not cat or not lemma:
            raise DataFormatError(lineno, "empty category or lemma")
        if pos not in _HEAD_POS:
            raise DataFormatError(
                lineno, f"pos must be one of {_HEAD_POS}: {pos!r}"
            )
        categories.setdefault(cat, set()).add((lemma, pos))
    return TsvLexicon(categories)
