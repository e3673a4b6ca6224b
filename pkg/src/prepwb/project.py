"""Project wiring: configuration, on-disk layout, and the mutation path.

A project is a corpus directory plus a data directory holding, per
preposition:

    <prep>.senses.tsv      sense inventory (presence makes the
                           preposition part of the project)
    <prep>.tags.tsv        sense tags, created on first write
    <prep>.tags.version    optimistic-concurrency counter for the tags

plus optional shared files: categories.tsv (disambiguation lexicon) and
prepositions.txt (known-preposition list).

All writes go through _write_atomic: temp file, fsync, rename. A tag
mutation is acknowledged only after both the tag file and the bumped
version file are durable, so a killed process never loses an
acknowledged write. One lock serializes all mutations; reads don't block.
"""

from __future__ import annotations

import io
import json
import os
import threading
from dataclasses import dataclass
from pathlib import Path

from . import instances, senses, tagging
from .corpus import AnnotatedSentence, Corpus, load_corpus
from .errors import DanglingInstanceError, DataError, StaleVersionError
from .preplist import DEFAULT_PREPOSITIONS, load_preposition_list

DATA_DIR_ENV = "PREPWB_DATA_DIR"

SENSES_SUFFIX = ".senses.tsv"


@dataclass
class ProjectConfig:
    corpus_root: Path
    data_dir: Path
    listen_address: str = "127.0.0.1:8743"
    preposition_list_file: Path | None = None

    def __post_init__(self) -> None:
        self.corpus_root = Path(self.corpus_root)
        self.data_dir = Path(self.data_dir)
        if self.preposition_list_file is not None:
            self.preposition_list_file = Path(self.preposition_list_file)
        host, _, port = self.listen_address.rpartition(":")
        if not host or not port.isdigit():
            raise ValueError(
                f"listen_address must be host:port, not {self.listen_address!r}"
            )

    @property
    def host(self) -> str:
        return self.listen_address.rpartition(":")[0]

    @property
    def port(self) -> int:
        return int(self.listen_address.rpartition(":")[2])


def load_config(path: str | Path) -> ProjectConfig:
    """Read a JSON config; relative paths resolve against the file.

    PREPWB_DATA_DIR in the environment overrides the configured data_dir.
    """
    path = Path(path)
    raw = json.loads(path.read_text(encoding="utf-8"))
    if not isinstance(raw, dict):
        raise DataError(f"config {path} must be a JSON object")
    unknown = set(raw) - {
        "corpus_root", "data_dir", "listen_address", "preposition_list_file"
    }
    if unknown:
        raise DataError(f"config {path}: unknown keys {sorted(unknown)}")
    base = path.parent

    def _path(key: str) -> Path | None:
        value = raw.get(key)
        if value is None:
            return None
        return base / str(value)

    corpus_root = _path("corpus_root")
    data_dir = _path("data_dir")
    if corpus_root is None or data_dir is None:
        raise DataError(f"config {path} needs corpus_root and data_dir")
    env_dir = os.environ.get(DATA_DIR_ENV)
    if env_dir:
        data_dir = Path(env_dir)
    return ProjectConfig(
        corpus_root=corpus_root,
        data_dir=data_dir,
        listen_address=str(raw.get("listen_address", "127.0.0.1:8743")),
        preposition_list_file=_path("preposition_list_file"),
    )


def _write_atomic(path: Path, payload: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="") as handle:
        handle.write(payload)
        handle.flush()
        os.fsync(handle.fileno())
    os.replace(tmp, path)
    dir_fd = os.open(path.parent, os.O_RDONLY)
    try:
        os.fsync(dir_fd)
    finally:
        os.close(dir_fd)


class ProjectStore:
    """Loaded project state plus the serialized mutation path."""

    def __init__(self, config: ProjectConfig) -> None:
        if not config.corpus_root.is_dir():
            raise FileNotFoundError(f"corpus root {config.corpus_root} missing")
        config.data_dir.mkdir(parents=True, exist_ok=True)
        self.config = config
        self.corpus: Corpus = load_corpus(config.corpus_root)
        if config.preposition_list_file is not None:
            self.preposition_list = load_preposition_list(
                config.preposition_list_file
            )
        else:
            default = config.data_dir / "prepositions.txt"
            if default.is_file():
                self.preposition_list = load_preposition_list(default)
            else:
                self.preposition_list = DEFAULT_PREPOSITIONS
        self._lock = threading.Lock()
        self._inventories: dict[str, senses.Inventory] = {}
        self._instances: dict[str, list[instances.InstanceRecord]] = {}
        self._sentences: dict[tuple[str, str, str, int], AnnotatedSentence] = {}
        for lu in self.corpus.lexical_units:
            for sub in lu.subcorpora:
                for sent in sub.sentences:
                    key = (lu.frame, lu.name, sub.name, sent.sentence_id)
                    self._sentences[key] = sent

    # ---- paths ----

    def _senses_path(self, prep: str) -> Path:
        return self.config.data_dir / f"{prep}{SENSES_SUFFIX}"

    def _tags_path(self, prep: str) -> Path:
        return self.config.data_dir / f"{prep}.tags.tsv"

    def _version_path(self, prep: str) -> Path:
        return self.config.data_dir / f"{prep}.tags.version"

    def lexicon_path(self) -> Path:
        return self.config.data_dir / "categories.tsv"

    # ---- reads ----

    def prepositions(self) -> list[str]:
        found = []
        for path in sorted(self.config.data_dir.glob(f"*{SENSES_SUFFIX}")):
            found.append(path.name[: -len(SENSES_SUFFIX)])
        return found

    def has_preposition(self, prep: str) -> bool:
        return self._senses_path(prep).is_file()

    def inventory(self, prep: str) -> senses.Inventory:
        if prep not in self._inventories:
            path = self._senses_path(prep)
            if not path.is_file():
                raise FileNotFoundError(f"no sense inventory for {prep!r} at {path}")
            self._inventories[prep] = senses.load_inventory(path)
        return self._inventories[prep]

    def records(self, prep: str) -> list[instances.InstanceRecord]:
        if prep not in self._instances:
            self._instances[prep] = instances.extract_instances(self.corpus, prep)
        return self._instances[prep]

    def tagset(self, prep: str) -> tagging.TagSet:
        path = self._tags_path(prep)
        if not path.is_file():
            return tagging.TagSet(prep)
        with open(path, encoding="utf-8", newline="") as handle:
            return tagging.load_tags(handle, prep)

    def tags_version(self, prep: str) -> int:
        path = self._version_path(prep)
        if not path.is_file():
            return 0
        text = path.read_text(encoding="utf-8").strip()
        if not text.isdigit():
            raise DataError(f"corrupt version file {path}: {text!r}")
        return int(text)

    def sentence(self, rec: instances.InstanceRecord) -> AnnotatedSentence | None:
        if rec.sentence_id is None:
            return None
        return self._sentences.get(
            (rec.frame, rec.lexical_unit, rec.subcorpus, rec.sentence_id)
        )

    # ---- mutations ----

    def assign_tags(
        self,
        prep: str,
        version: int,
        ids: list[str],
        sense_keys: list[str],
        tagger: str = tagging.DEFAULT_TAGGER,
        note: str | None = None,
    ) -> dict:
        """Apply one bulk tag mutation; durable before return."""
        with self._lock:
            current = self.tags_version(prep)
            if version != current:
                raise StaleVersionError(expected=current, actual=version)
            known = {
                rec.instance_id
                for rec in tagging.taggable_records(self.records(prep))
            }
            missing = sorted(set(ids) - known)
            if missing:
                raise DanglingInstanceError(missing)
            tagset = self.tagset(prep)
            inv = self.inventory(prep)
            new, overwritten = tagging.assign(
                tagset, ids, sense_keys, inv, tagger=tagger, note=note
            )
            buffer = io.StringIO()
            tagging.save_tags(tagset, buffer)
            _write_atomic(self._tags_path(prep), buffer.getvalue())
            _write_atomic(self._version_path(prep), f"{current + 1}\n")
            return {"version": current + 1, "new": new, "overwritten": overwritten}

    def add_subsense(self, prep: str, parent: str, fields: dict) -> senses.SenseKey:
        with self._lock:
            inv = self.inventory(prep)
            key = senses.add_subsense(inv, parent, fields)
            buffer = io.StringIO()
            senses.save_inventory(inv, buffer)
            _write_atomic(self._senses_path(prep), buffer.getvalue())
            return key
