"""Exception hierarchy shared by the workbench modules."""

from __future__ import annotations


class PrepwbError(Exception):
    """Base class for all workbench errors."""


class CorpusFormatError(PrepwbError):
    """A lexical-unit XML file violates the corpus schema."""

    def __init__(self, path: str, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line
        self.reason = message


class CorpusLoadError(PrepwbError):
    """One or more files in a corpus directory failed to load."""

    def __init__(self, errors: list[CorpusFormatError]):
        lines = "; ".join(str(e) for e in errors)
        super().__init__(f"{len(errors)} malformed corpus file(s): {lines}")
        self.errors = errors


class DataFormatError(PrepwbError):
    """A tab-separated data file is malformed at a specific line."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.reason = message


class DataError(PrepwbError):
    """A semantic violation in otherwise well-formed data."""


class UnknownSenseError(DataError):
    """A sense key is not present in the relevant inventory."""

    def __init__(self, keys: list[str], preposition: str):
        super().__init__(
            f"unknown sense key(s) for {preposition!r}: {', '.join(keys)}"
        )
        self.keys = keys
        self.preposition = preposition


class DanglingInstanceError(DataError):
    """Instance ids that do not resolve to any extracted record."""

    def __init__(self, instance_ids: list[str]):
        super().__init__(f"unresolvable instance id(s): {', '.join(instance_ids)}")
        self.instance_ids = instance_ids


class StaleVersionError(DataError):
    """A mutation was submitted against an outdated tag-set version."""

    def __init__(self, expected: int, actual: int):
        super().__init__(f"stale version {actual}, current is {expected}")
        self.expected = expected
        self.actual = actual
