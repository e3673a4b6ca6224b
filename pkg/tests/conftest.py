"""Shared fixtures: the bundled corpora and data files, loaded once."""

from __future__ import annotations

import json
import shutil
from pathlib import Path

import pytest

from prepwb.corpus import load_corpus
from prepwb.senses import load_inventory
from prepwb.tagging import load_tags

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

# One line per acceptance criterion, filled in by tests/test_acceptance.py
# and echoed after the run so the verdicts survive output capture.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def table1_corpus():
    return load_corpus(FIXTURES / "table1")


@pytest.fixture(scope="session")
def through_corpus():
    return load_corpus(FIXTURES / "through")


@pytest.fixture(scope="session")
def realizations_corpus():
    return load_corpus(FIXTURES / "realizations")


@pytest.fixture(scope="session")
def through_inv():
    return load_inventory(FIXTURES / "data" / "through.senses.tsv")


@pytest.fixture(scope="session")
def by_inv():
    return load_inventory(FIXTURES / "data" / "by.senses.tsv")


@pytest.fixture(scope="session")
def through_tags():
    with open(FIXTURES / "data" / "through.tags.tsv", encoding="utf-8",
              newline="") as handle:
        return load_tags(handle, "through")


@pytest.fixture()
def project_dir(tmp_path: Path) -> Path:
    """A writable copy of the bundled project (through corpus + data)."""
    shutil.copytree(FIXTURES / "through", tmp_path / "corpus")
    shutil.copytree(FIXTURES / "data", tmp_path / "data")
    (tmp_path / "config.json").write_text(
        json.dumps({
            "corpus_root": "corpus",
            "data_dir": "data",
            "listen_address": "127.0.0.1:8743",
        }) + "\n",
        encoding="utf-8",
    )
    return tmp_path
