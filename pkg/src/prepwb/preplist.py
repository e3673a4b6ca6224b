"""The known-preposition list used for multiword detection and digraphs.

One preposition per line, lowercase; blank lines and #-comments skipped.
Multiword entries ("out of") matter: expansion and gloss analysis match
them greedily, longest first.
"""

from __future__ import annotations

from pathlib import Path

DEFAULT_PREPOSITIONS: tuple[str, ...] = (
    "aboard", "about", "above", "across", "after", "against", "along",
    "alongside", "amid", "among", "around", "as", "at", "atop", "before",
    "behind", "below", "beneath", "beside", "besides", "between", "beyond",
    "by", "despite", "down", "during", "for", "from", "in", "inside",
    "into", "near", "of", "off", "on", "onto", "opposite", "out", "out of",
    "outside", "over", "past", "per", "round", "since", "through",
    "throughout", "to", "toward", "towards", "under", "underneath",
    "until", "up", "upon", "via", "with", "within", "without",
)


def load_preposition_list(path: str | Path) -> tuple[str, ...]:
    preps = []
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line != line.lower():
            raise ValueError(f"prepositions must be lowercase: {line!r}")
        preps.append(line)
    return tuple(preps)
