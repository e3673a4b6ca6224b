"""Definition digraph and the two-level core/subsense hierarchy.

Dictionary definitions of prepositions often bottom out in another
preposition ("carried out or achieved by ..."). Glosses here are original
paraphrases; the digraph links each (preposition, sense) node to the
preposition its gloss terminates in, when any. The companion hierarchy
just groups an inventory's subsenses under their cores.

Definition file columns: Preposition, Sense, Gloss.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable

from . import tsvio
from .errors import DataError, DataFormatError
from .senses import Inventory, SenseKey, SenseRecord, core_of, parse_sense_key

DEFINITIONS_HEADER = "Preposition\tSense\tGloss"

EDGES_HEADER = "FromPrep\tFromSense\tToPrep\tEvidence"

_TRAILING_PUNCT = ".,;:!?…'\"’” "


@dataclass(frozen=True)
class DefinitionRef:
    preposition: str
    sense: SenseKey
    gloss: str

    def __post_init__(self) -> None:
        if not self.preposition:
            raise ValueError("preposition must be non-empty")
        if not self.gloss.strip():
            raise ValueError("gloss must be non-empty")


@dataclass(frozen=True)
class DigraphEdge:
    from_preposition: str
    from_sense: str
    to_preposition: str
    evidence: str


@dataclass(frozen=True)
class SenseDigraph:
    nodes: tuple[tuple[str, str], ...]
    edges: tuple[DigraphEdge, ...]


@dataclass(frozen=True)
class HierarchyNode:
    core: SenseRecord
    subsenses: tuple[SenseRecord, ...]


def _strip_tail(text: str) -> str:
    out = text.strip().rstrip(_TRAILING_PUNCT)
    if out.endswith(")"):
        depth = 0
        for i in range(len(out) - 1, -1, -1):
            if out[i] == ")":
                depth += 1
            elif out[i] == "(":
                depth -= 1
                if depth == 0:
                    out = out[:i]
                    break
        else:
            return out  # unbalanced; leave the parenthetical alone
        out = out.strip().rstrip(_TRAILING_PUNCT)
    return out


def terminal_preposition(
    gloss: str, prep_list: Iterable[str]
) -> str | None:
    """The longest known preposition the gloss ends in, if any.

    Trailing punctuation and one trailing parenthetical are ignored;
    matching is case-insensitive and requires a word boundary.
    """
    body = _strip_tail(gloss).lower()
    best = None
    for prep in prep_list:
        if not body.endswith(prep):
            continue
        cut = len(body) - len(prep)
        if cut > 0 and body[cut - 1].isalpha():
            continue
        if best is None or len(prep) > len(best):
            best = prep
    return best


def build_digraph(
    defs: list[DefinitionRef], prep_list: Iterable[str]
) -> SenseDigraph:
    """One node per definition; one edge per terminal-preposition hit."""
    prep_list = tuple(prep_list)
    nodes = []
    edges = []
    for ref in defs:
        node = (ref.preposition, str(ref.sense))
        nodes.append(node)
        target = terminal_preposition(ref.gloss, prep_list)
        if target is not None:
            edges.append(DigraphEdge(node[0], node[1], target, target))

    def node_key(node: tuple[str, str]):
        key = parse_sense_key(node[1])
        return (node[0], key.ordinal or 0, key.number, key.letter)

    nodes = sorted(set(nodes), key=node_key)
    edges = sorted(
        set(edges),
        key=lambda e: (node_key((e.from_preposition, e.from_sense)),
                       e.to_preposition),
    )
    return SenseDigraph(tuple(nodes), tuple(edges))


def hierarchy(inv: Inventory) -> list[HierarchyNode]:
    """Group subsenses under their core senses, inventory order throughout."""
    cores = [rec for rec in inv.senses if rec.key.is_core]
    children: dict[str, list[SenseRecord]] = {rec.key.ode_key: [] for rec in cores}
    for rec in inv.senses:
        if rec.key.is_core:
            continue
        parent = core_of(rec.key).ode_key
        if parent not in children:
            raise DataError(
                f"subsense {rec.key} of {inv.preposition!r} has no core {parent}"
            )
        children[parent].append(rec)
    return [
        HierarchyNode(rec, tuple(children[rec.key.ode_key])) for rec in cores
    ]


def render_hierarchy(nodes: list[HierarchyNode]) -> str:
    """Indented text tree: cores flush left, subsenses nested."""
    lines = []
    for node in nodes:
        lines.append(f"{node.core.key} {node.core.relation_name}\n")
        for sub in node.subsenses:
            lines.append(f"  {sub.key} {sub.relation_name}\n")
    return "".join(lines)


def load_definitions(source: IO[str] | str | Path) -> list[DefinitionRef]:
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8", newline="") as handle:
            return load_definitions(handle)
    defs = []
    for lineno, cells in tsvio.iter_rows(source, DEFINITIONS_HEADER):
        try:
            defs.append(
                DefinitionRef(
                    cells[0],
                    parse_sense_key(cells[1]),
                    tsvio.unescape_cell(cells[2]),
                )
            )
        except ValueError as exc:
            raise DataFormatError(lineno, str(exc)) from None
    return defs


def write_edges(graph: SenseDigraph, sink: IO[str]) -> int:
    rows = [
        [e.from_preposition, e.from_sense, e.to_preposition, e.evidence]
        for e in graph.edges
    ]
    return tsvio.write_rows(sink, EDGES_HEADER, rows)


def write_dot(graph: SenseDigraph, sink: IO[str]) -> int:
    """DOT rendering: sense nodes point at plain preposition nodes."""
    lines = ["digraph prepositions {\n"]
    for prep, sense in graph.nodes:
        lines.append(f'  "{prep} {sense}";\n')
    for edge in graph.edges:
        lines.append(
            f'  "{edge.from_preposition} {edge.from_sense}" -> '
            f'"{edge.to_preposition}" [label="{edge.evidence}"];\n'
        )
    lines.append("}\n")
    payload = "".join(lines)
    sink.write(payload)
    return len(payload.encode("utf-8"))
