"""Instance extraction against the bundled corpus and a brute-force oracle."""

import io
import random

import pytest

from prepwb.corpus import (
    AnnotatedSentence,
    Corpus,
    FESpan,
    LexicalUnit,
    Subcorpus,
)
from prepwb.errors import DataError, DataFormatError
from prepwb.instances import (
    InstanceRecord,
    extract_instances,
    find_occurrences,
    read_instance_file,
    write_instance_file,
)
from randcorpus import as_tuples, oracle_extract, random_corpus

EXPECTED_TABLE1 = (
    "Frame\tFrameElement\tLexicalUnit\tSubcorpus\tIdentifier-Position\n"
    "Achieving_first\tNo instances\toriginate.v\tV-570-s20-np-ppby\t\n"
    "Arrest\tAuthorities\tarrest.v\tV-730-s20-ppby\t875350-43\n"
    "Arrest\tAuthorities\tarrest.v\tV-730-s20-ppby\t875353-71\n"
    "Arrest\tAuthorities\tarrest.v\tV-730-s20-ppby\t875362-160\n"
    "Arrest\tNo instances\tapprehend.v\tV-730-s20-ppby\t\n"
)


def test_instance_file_for_table1_fixture(table1_corpus):
    records = extract_instances(table1_corpus, "by")
    sink = io.StringIO()
    write_instance_file(records, sink)
    assert sink.getvalue() == EXPECTED_TABLE1


def test_instance_ids_encode_sentence_and_offset(table1_corpus):
    records = [
        r for r in extract_instances(table1_corpus, "by")
        if not r.is_placeholder
    ]
    assert [r.instance_id for r in records] == [
        "875350-43", "875353-71", "875362-160",
    ]


@pytest.mark.parametrize("text,prep,starts", [
    ("walked by the river", "by", [7]),
    ("Stand By me, by and by", "by", [6, 13, 20]),
    ("thereby hangs a tale", "by", []),
    ("a by-road by night", "by", [2, 10]),
    ("BY", "by", [0]),
    ("byte by byte", "by", [5]),
    ("through and THROUGH", "through", [0, 12]),
    ("over2 over", "over", [0, 6]),
])
def test_whole_word_matching(text, prep, starts):
    assert find_occurrences(text, prep) == starts


def _one_sentence_corpus(text, spans, sub="V-5-s20-ppby"):
    sent = AnnotatedSentence(42, text, tuple(spans), ())
    return Corpus((
        LexicalUnit("walk.v", "Motion", (Subcorpus(sub, (sent,)),)),
    ))


def test_occurrence_without_fe_is_skipped():
    corpus = _one_sentence_corpus(
        "stood by the gate by the wall",
        [FESpan("Place", 18, 29)],
    )
    records = extract_instances(corpus, "by")
    assert [r.instance_id for r in records] == ["42-18"]


def test_placeholder_only_when_nothing_matches():
    corpus = _one_sentence_corpus("stood near the gate", [])
    (record,) = extract_instances(corpus, "by")
    assert record.is_placeholder
    assert record.frame_element == "No instances"
    assert record.sentence_id is None and record.prep_start is None


def test_non_target_subcorpus_is_not_scanned():
    corpus = _one_sentence_corpus(
        "stood by the gate", [FESpan("Place", 6, 17)], sub="V-5-s20-np",
    )
    assert extract_instances(corpus, "by") == []


def test_duplicate_position_across_units_rejected():
    sent = AnnotatedSentence(
        42, "stood by the gate", (FESpan("Place", 6, 17),), ()
    )
    corpus = Corpus((
        LexicalUnit("stand.v", "Posture",
                    (Subcorpus("V-1-s20-ppby", (sent,)),)),
        LexicalUnit("stay.v", "Posture",
                    (Subcorpus("V-2-s20-ppby", (sent,)),)),
    ))
    with pytest.raises(DataError) as err:
        extract_instances(corpus, "by")
    assert "stand.v" in str(err.value) and "stay.v" in str(err.value)


def test_extract_rejects_bad_preposition(table1_corpus):
    with pytest.raises(ValueError):
        extract_instances(table1_corpus, "By")
    with pytest.raises(ValueError):
        extract_instances(table1_corpus, "")


def test_oracle_equivalence_randomized():
    rng = random.Random(90125)
    for _ in range(25):
        corpus, prep = random_corpus(rng, min_sentences=40)
        got = as_tuples(extract_instances(corpus, prep))
        assert got == oracle_extract(corpus, prep)


def test_round_trip_randomized():
    rng = random.Random(777)
    for _ in range(20):
        corpus, prep = random_corpus(rng, min_sentences=30)
        records = extract_instances(corpus, prep)
        sink = io.StringIO()
        write_instance_file(records, sink)
        again = read_instance_file(io.StringIO(sink.getvalue()))
        assert again == records


def test_read_rejects_bad_identifier():
    body = EXPECTED_TABLE1.replace("875350-43", "875350/43")
    with pytest.raises(DataFormatError) as err:
        read_instance_file(io.StringIO(body))
    assert err.value.line == 3


def test_read_rejects_placeholder_with_identifier():
    body = EXPECTED_TABLE1.replace(
        "Achieving_first\tNo instances\toriginate.v\tV-570-s20-np-ppby\t",
        "Achieving_first\tNo instances\toriginate.v\tV-570-s20-np-ppby\t1-2",
    )
    with pytest.raises(DataFormatError) as err:
        read_instance_file(io.StringIO(body))
    assert err.value.line == 2


def test_record_validation():
    with pytest.raises(ValueError):
        InstanceRecord("F", "Fe", "a.v", "V-1-s20-ppby", None, 3)
    with pytest.raises(ValueError):
        InstanceRecord("F", "No instances", "a.v", "V-1-s20-ppby", 1, 2)
