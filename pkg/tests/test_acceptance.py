"""Acceptance gate: one test per shipped guarantee, one verdict line each.

Each test prints PASS or FAIL with its label through the terminal-summary
hook in conftest.py, so a plain pytest run ends with the full scorecard.
"""

import functools
import io
import os
import random
import signal
import socket
import string
import subprocess
import sys
import time
from pathlib import Path

import httpx
import pytest

import conftest
from prepwb import analysis, instances, network, senses, tagging
from prepwb.cli import main
from prepwb.disambig import (
    DisambiguationContext,
    compile_rules,
    disambiguate,
    oracle_from_lexicon,
)
from prepwb.preplist import DEFAULT_PREPOSITIONS
from prepwb.senses import add_subsense, core_of, load_inventory, parse_sense_key
from prepwb.tsvio import iter_rows
from randcorpus import as_tuples, oracle_extract, random_corpus
from test_instances import EXPECTED_TABLE1

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def criterion(label):
    """Record a one-line verdict for the wrapped acceptance test."""
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            try:
                result = fn(*args, **kwargs)
            except BaseException:
                conftest.ACCEPTANCE_LINES.append(f"FAIL  {label}")
                raise
            conftest.ACCEPTANCE_LINES.append(f"PASS  {label}")
            return result
        return run
    return wrap


@criterion("reference instance file reproduced byte-identically in under 1s")
def test_reference_extraction_bytes(capsys):
    started = time.perf_counter()
    code = main(["extract", "--corpus", str(FIXTURES / "table1"),
                 "--prep", "by"])
    elapsed = time.perf_counter() - started
    assert code == 0
    assert capsys.readouterr().out == EXPECTED_TABLE1
    assert elapsed < 1.0, f"took {elapsed:.3f}s"


@criterion("extraction equals the exhaustive-scan oracle on 100 random corpora")
def test_extraction_oracle_equivalence():
    started = time.perf_counter()
    for seed in range(100):
        rng = random.Random(31000 + seed)
        corpus, prep = random_corpus(rng, min_sentences=100)
        got = as_tuples(instances.extract_instances(corpus, prep))
        assert got == oracle_extract(corpus, prep), f"seed {31000 + seed}"
    elapsed = time.perf_counter() - started
    assert elapsed < 30.0, f"took {elapsed:.1f}s"


@criterion("sense-to-pair table: 4 pairs under (1a), 6 under (1b)")
def test_pairs_reference(through_corpus, through_tags):
    records = instances.extract_instances(through_corpus, "through")
    pairs = {str(p.sense): set(p.pairs)
             for p in analysis.pairs_by_sense(through_tags, records)}
    assert pairs["2 (1a)"] == {
        ("Cause_harm", "Body_part"), ("Impact", "Impactee"),
        ("Natural_features", "Relative_location"), ("Use_firearm", "Path"),
    }
    assert pairs["3 (1b)"] == {
        ("Emotion_heat", "Location"), ("Path_shape", "Area"),
        ("Ride_Vehicle", "Path"), ("Roadways", "Path"),
        ("Self_motion", "Self_mover"), ("Travel", "Path"),
    }


@criterion("unit table: the Roadways:Path row lists its 10 lexical units")
def test_units_reference(through_corpus, through_tags):
    records = instances.extract_instances(through_corpus, "through")
    units = analysis.lexical_units_by_pair(through_tags, records, "3 (1b)")
    assert units[("Roadways", "Path")] == [
        "bypass.n", "highway.n", "line.n", "motorway.n", "path.n",
        "pathway.n", "road.n", "street.n", "track.n", "trail.n",
    ]


@criterion("realization table: exactly 23 tuples including the non-PP rows")
def test_realizations_reference(realizations_corpus):
    report = analysis.expand_realizations(
        realizations_corpus,
        {("Arriving", "Mode_of_transportation"), ("Arriving", "Path")},
    )
    raw = [
        (t.frame, t.frame_element, t.lexical_unit, t.grammatical_function,
         t.phrase_type, t.preposition)
        for t in report.tuples
    ]
    assert len(raw) == 23
    assert ("Arriving", "Path", "come.v", "Obj", "NP", None) in raw
    assert ("Arriving", "Path", "reach.v", "Comp", "PPing", None) in raw
    assert ("Arriving", "Path", "enter.v", "Comp", "PP", "through") in raw
    assert raw == sorted(raw, key=lambda r: (r[0], r[1], r[2], r[3],
                                             r[4] or "", r[5] or ""))


@criterion("1000 randomized expansions: tuples unique, preposition iff PT=PP")
def test_expansion_properties():
    done = 0
    seed = 52000
    while done < 1000:
        seed += 1
        rng = random.Random(seed)
        corpus, _prep = random_corpus(rng)
        all_seeds = {
            (lu.frame, span.frame_element)
            for lu in corpus.lexical_units
            for sub in lu.subcorpora
            for sent in sub.sentences
            for span in sent.fe_spans
        }
        if not all_seeds:
            continue
        # one full expansion plus several single-seed ones
        subsets = [all_seeds] + [{s} for s in sorted(all_seeds)[:9]]
        for seeds in subsets:
            report = analysis.expand_realizations(corpus, seeds)
            assert len(report.tuples) == len(set(report.tuples))
            for tup in report.tuples:
                assert (tup.phrase_type == "PP") == (tup.preposition is not None)
            done += 1
    assert done >= 1000


def _random_word(rng, pool=string.ascii_lowercase):
    return "".join(rng.choice(pool) for _ in range(rng.randrange(3, 9)))


def _random_inventory(rng):
    prep = _random_word(rng)
    records = []
    ordinal = 0
    for number in range(1, rng.randrange(2, 5)):
        for letter in [""] + list("abcdef")[: rng.randrange(0, 3)]:
            ordinal += 1
            records.append(senses.SenseRecord(
                prep,
                senses.SenseKey(ordinal, number, letter),
                "Rel" + _random_word(rng).capitalize(),
                frozenset(rng.sample(senses.QUIRK_CODES,
                                     rng.randrange(1, 4))),
                tuple(f"9.{rng.randrange(1, 40)}"
                      for _ in range(rng.randrange(0, 3))),
                rng.choice(["", "plain words", "tab\there",
                            "line\nbreak", "back\\slash"]),
                rng.choice(["", "with, comma", "quote \"x\""]),
                tuple({_random_word(rng) for _ in range(rng.randrange(0, 3))}),
                tuple({_random_word(rng) + "_things"
                       for _ in range(rng.randrange(0, 3))}),
                (),
                rng.choice(senses.ORIGINS),
            ))
    return senses.Inventory(prep, records)


def _random_tagset(rng, inventory):
    keys = [str(rec.key) for rec in inventory.senses]
    tags = {}
    for _ in range(rng.randrange(1, 30)):
        iid = f"{rng.randrange(1, 10**6)}-{rng.randrange(0, 300)}"
        chosen = tuple(rng.sample(keys, rng.randrange(1, min(3, len(keys)) + 1)))
        tags[iid] = tagging.TaggedInstance(
            iid, chosen, _random_word(rng),
            rng.choice([None, "note", "multi\nline", "tab\tnote"]),
        )
    return tagging.TagSet(inventory.preposition, tags)


def _random_tuples(rng):
    out = set()
    for _ in range(rng.randrange(1, 40)):
        gf = rng.choice(["Comp", "Obj", "Ext", "DNI", "-"])
        if gf == "DNI":
            pt, prep = None, None
        else:
            pt = rng.choice(["PP", "NP", "AVP", "PPing", "-"])
            prep = _random_word(rng) if pt == "PP" else None
        out.add(analysis.RealizationTuple(
            "Frame_" + _random_word(rng), "FE_" + _random_word(rng),
            _random_word(rng) + rng.choice([".v", ".n", ".a"]),
            gf, pt, prep,
        ))
    return sorted(out, key=analysis.RealizationTuple.sort_key)


@criterion("write/read identity for all four persisted file formats")
def test_round_trip_identity():
    for seed in range(71000, 71025):
        rng = random.Random(seed)

        corpus, prep = random_corpus(rng)
        records = instances.extract_instances(corpus, prep)
        first = io.StringIO()
        instances.write_instance_file(records, first)
        again = instances.read_instance_file(io.StringIO(first.getvalue()))
        assert again == records
        second = io.StringIO()
        instances.write_instance_file(again, second)
        assert second.getvalue() == first.getvalue()

        inventory = _random_inventory(rng)
        first = io.StringIO()
        senses.save_inventory(inventory, first)
        loaded = senses.load_inventory(
            io.StringIO(first.getvalue()), inventory.preposition
        )
        assert loaded.senses == inventory.senses
        second = io.StringIO()
        senses.save_inventory(loaded, second)
        assert second.getvalue() == first.getvalue()

        tagset = _random_tagset(rng, inventory)
        first = io.StringIO()
        tagging.save_tags(tagset, first)
        loaded = tagging.load_tags(
            io.StringIO(first.getvalue()), tagset.preposition
        )
        assert loaded.tags == tagset.tags
        second = io.StringIO()
        tagging.save_tags(loaded, second)
        assert second.getvalue() == first.getvalue()

        tuples = _random_tuples(rng)
        first = io.StringIO()
        analysis.write_expansion(tuples, first)
        assert analysis.read_expansion(io.StringIO(first.getvalue())) == tuples
        second = io.StringIO()
        analysis.write_expansion(tuples, second)
        assert second.getvalue() == first.getvalue()


GOLD_HEADER = (
    "ComplementLemma\tComplementPos\tAttachmentLemma\tAttachmentPos"
    "\tAttachmentKind\tExpected"
)


@criterion("hand-labeled contexts: 30/30 top-1, stable across runs and shuffles")
def test_gold_disambiguation(through_inv):
    gold = []
    with open(FIXTURES / "disambig" / "gold.tsv", encoding="utf-8") as handle:
        for _lineno, cells in iter_rows(handle, GOLD_HEADER):
            gold.append((
                DisambiguationContext("through", (cells[0], cells[1]),
                                      (cells[2], cells[3]), cells[4]),
                cells[5],
            ))
    assert len(gold) == 30
    rules = compile_rules(through_inv)
    lexicon_text = (FIXTURES / "data" / "categories.tsv").read_text(
        encoding="utf-8"
    )
    header, *rows = lexicon_text.splitlines()
    rng = random.Random(9)
    baseline = None
    for run in range(10):
        rng.shuffle(rows)
        oracle = oracle_from_lexicon(
            io.StringIO("\n".join([header] + rows) + "\n")
        )
        tops = []
        for ctx, expected in gold:
            ranking = disambiguate(rules, oracle, ctx)
            assert str(ranking[0].sense) == expected, (run, ctx)
            tops.append(str(ranking[0].sense))
        if baseline is None:
            baseline = tops
        assert tops == baseline
    correct = sum(1 for (_ctx, e), t in zip(gold, baseline) if e == t)
    assert correct == 30


@criterion("subsense keying appends (1e) after (1a)-(1d); core of (1a) is (1)")
def test_subsense_keying():
    inv = load_inventory(FIXTURES / "data" / "through.senses.tsv")
    existing = [rec.key.ode_key for rec in inv.senses
                if rec.key.number == 1]
    assert existing == ["(1)", "(1a)", "(1b)", "(1c)", "(1d)"]
    key = add_subsense(inv, "(1)", {})
    assert key.ode_key == "(1e)"
    assert str(core_of(parse_sense_key("2 (1a)"))) == "(1)"


@criterion("definition digraph: 18 edges into 'by' and 6 into 'through'")
def test_digraph_reference():
    defs = network.load_definitions(
        FIXTURES / "network" / "definitions.tsv"
    )
    graph = network.build_digraph(defs, DEFAULT_PREPOSITIONS)
    targets = [e.to_preposition for e in graph.edges]
    assert targets.count("by") == 18
    assert targets.count("through") == 6


def _free_port():
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


def _start_server(project_dir):
    port = _free_port()
    proc = subprocess.Popen(
        [sys.executable, "-m", "prepwb", "serve",
         "--corpus", str(project_dir / "corpus"),
         "--data", str(project_dir / "data"),
         "--address", f"127.0.0.1:{port}"],
        stdout=subprocess.DEVNULL,
        stderr=subprocess.DEVNULL,
    )
    base = f"http://127.0.0.1:{port}"
    for _ in range(200):
        try:
            httpx.get(f"{base}/api/prepositions", timeout=0.5)
            return proc, base
        except httpx.TransportError:
            if proc.poll() is not None:
                raise RuntimeError("server died during startup")
            time.sleep(0.1)
    proc.kill()
    raise RuntimeError("server never came up")


@criterion("acknowledged tag writes survive kill -9 and restart (5 trials)")
def test_service_durability(project_dir):
    ids = [rec.instance_id
           for rec in instances.read_instance_file(
               io.StringIO(_extracted(project_dir)))
           if not rec.is_placeholder]
    assert len(ids) >= 5
    proc, base = _start_server(project_dir)
    try:
        for trial in range(5):
            version = httpx.get(
                f"{base}/api/prepositions/through/tags", timeout=5
            ).json()["version"]
            marker = f"trial-{trial}"
            resp = httpx.post(
                f"{base}/api/prepositions/through/tags",
                json={"version": version, "ids": [ids[trial]],
                      "sense_keys": ["13 (5)"], "tagger": marker},
                timeout=5,
            )
            assert resp.status_code == 200, resp.text
            acknowledged = resp.json()["version"]
            os.kill(proc.pid, signal.SIGKILL)
            proc.wait(timeout=10)
            proc, base = _start_server(project_dir)
            listed = httpx.get(
                f"{base}/api/prepositions/through/tags", timeout=5
            ).json()
            assert listed["version"] == acknowledged
            by_id = {t["instance_id"]: t for t in listed["tags"]}
            assert by_id[ids[trial]]["sense_keys"] == ["13 (5)"]
            assert by_id[ids[trial]]["tagger"] == marker
    finally:
        if proc.poll() is None:
            proc.kill()
            proc.wait(timeout=10)


def _extracted(project_dir):
    from prepwb.corpus import load_corpus
    corpus = load_corpus(project_dir / "corpus")
    sink = io.StringIO()
    instances.write_instance_file(
        instances.extract_instances(corpus, "through"), sink
    )
    return sink.getvalue()
