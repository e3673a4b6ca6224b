"""Command-line entry point.

Subcommands: ingest-check, extract, senses, tag, analyze (pairs, units,
expand, subst, patterns), disambiguate, network (digraph, hierarchy),
serve. Exit codes: 0 success, 1 usage error, 2 data error.

Analysis commands print exactly the library's TSV serialization, so a
shell pipeline and the Python API always agree byte for byte.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import sys
from pathlib import Path

from . import analysis, disambig, instances, network, project, senses, tagging
from .corpus import iter_sentences, load_corpus
from .errors import CorpusLoadError, PrepwbError
from .preplist import DEFAULT_PREPOSITIONS, load_preposition_list


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage problems; the contract here is 1
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _head_arg(text: str) -> tuple[str, str]:
    lemma, sep, pos = text.rpartition(".")
    if not sep or not lemma or pos not in ("v", "n", "a"):
        raise argparse.ArgumentTypeError(
            f"{text!r} must look like lemma.pos with pos v, n, or a"
        )
    return lemma, pos


def _seed_arg(text: str) -> tuple[str, str]:
    frame, sep, fe = text.partition(":")
    if not sep or not frame or not fe:
        raise argparse.ArgumentTypeError(f"{text!r} must look like Frame:FE")
    return frame, fe


@contextlib.contextmanager
def _out_stream(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            yield handle


def _senses_path(data_dir: str, prep: str) -> Path:
    return Path(data_dir) / f"{prep}.senses.tsv"


def _load_inventory(data_dir: str, prep: str) -> senses.Inventory:
    return senses.load_inventory(_senses_path(data_dir, prep))


def _load_tags(data_dir: str, prep: str) -> tagging.TagSet:
    path = Path(data_dir) / f"{prep}.tags.tsv"
    if not path.is_file():
        return tagging.TagSet(prep)
    with open(path, encoding="utf-8", newline="") as handle:
        return tagging.load_tags(handle, prep)


def _prep_list(args) -> tuple[str, ...]:
    if getattr(args, "preps", None):
        return load_preposition_list(args.preps)
    return DEFAULT_PREPOSITIONS


def _seeds_for(args, corpus) -> set[tuple[str, str]]:
    """Seed pairs either given literally or read off a sense's tags."""
    if args.seeds:
        return set(args.seeds)
    if not (args.data and args.prep and args.sense):
        raise _UsageError(
            "need either --seeds or all of --data/--prep/--sense"
        )
    tags = _load_tags(args.data, args.prep)
    records = instances.extract_instances(corpus, args.prep)
    for entry in analysis.pairs_by_sense(tags, records):
        key = entry.sense
        want = senses.parse_sense_key(args.sense)
        if key.number == want.number and key.letter == want.letter:
            if want.ordinal is None or want.ordinal == key.ordinal:
                return set(entry.pairs)
    return set()


def cmd_ingest_check(args) -> int:
    corpus = load_corpus(args.corpus)
    sentence_count = sum(1 for _ in iter_sentences(corpus))
    print(
        f"{len(corpus.lexical_units)} lexical units, "
        f"{sentence_count} sentences, no format errors"
    )
    return 0


def cmd_extract(args) -> int:
    corpus = load_corpus(args.corpus)
    records = instances.extract_instances(corpus, args.prep)
    with _out_stream(args.out) as sink:
        instances.write_instance_file(records, sink)
    return 0


def cmd_senses(args) -> int:
    inv = _load_inventory(args.data, args.prep)
    if args.add_subsense:
        fields = {}
        if args.relation:
            fields["relation_name"] = args.relation
        if args.complement_properties is not None:
            fields["complement_properties"] = args.complement_properties
        if args.attachment_properties is not None:
            fields["attachment_properties"] = args.attachment_properties
        key = senses.add_subsense(inv, args.add_subsense, fields)
        buffer = io.StringIO()
        senses.save_inventory(inv, buffer)
        project._write_atomic(_senses_path(args.data, args.prep), buffer.getvalue())
        print(str(key))
        return 0
    with _out_stream(args.out) as sink:
        senses.save_inventory(inv, sink)
    return 0


def cmd_tag(args) -> int:
    config = project.ProjectConfig(corpus_root=args.corpus, data_dir=args.data)
    store = project.ProjectStore(config)
    ids = [i for i in args.ids.split(",") if i]
    keys = [k for k in args.senses.split(";") if k]
    result = store.assign_tags(
        args.prep, store.tags_version(args.prep), ids, keys,
        tagger=args.tagger, note=args.note,
    )
    print(
        f"tagged {result['new']} new, {result['overwritten']} overwritten; "
        f"version {result['version']}"
    )
    return 0


def cmd_analyze_pairs(args) -> int:
    corpus = load_corpus(args.corpus)
    inv = _load_inventory(args.data, args.prep)
    records = instances.extract_instances(corpus, args.prep)
    pairs = analysis.pairs_by_sense(_load_tags(args.data, args.prep), records)
    with _out_stream(args.out) as sink:
        analysis.write_pairs(pairs, inv, sink)
    return 0


def cmd_analyze_units(args) -> int:
    corpus = load_corpus(args.corpus)
    records = instances.extract_instances(corpus, args.prep)
    units = analysis.lexical_units_by_pair(
        _load_tags(args.data, args.prep), records, args.sense
    )
    with _out_stream(args.out) as sink:
        analysis.write_units(units, sink)
    return 0


def cmd_analyze_expand(args) -> int:
    corpus = load_corpus(args.corpus)
    seeds = _seeds_for(args, corpus)
    if not seeds:
        raise PrepwbError("no seed pairs: the sense has no tagged instances")
    report = analysis.expand_realizations(corpus, seeds, _prep_list(args))
    with _out_stream(args.out) as sink:
        analysis.write_expansion(report.tuples, sink)
    if report.missing_gf or report.missing_pt or report.headless_pp:
        print(
            f"diagnostics: {report.missing_gf} spans without GF, "
            f"{report.missing_pt} without PT, "
            f"{report.headless_pp} PP spans without a head word",
            file=sys.stderr,
        )
    return 0


def cmd_analyze_subst(args) -> int:
    corpus = load_corpus(args.corpus)
    records = instances.extract_instances(corpus, args.prep)
    tags = _load_tags(args.data, args.prep)
    want = senses.parse_sense_key(args.sense)
    chosen = None
    for entry in analysis.pairs_by_sense(tags, records):
        if entry.sense.number == want.number and entry.sense.letter == want.letter:
            if want.ordinal is None or want.ordinal == entry.sense.ordinal:
                chosen = entry
    if chosen is None:
        raise PrepwbError(f"sense {args.sense} has no tagged instances")
    report = analysis.expand_realizations(
        corpus, set(chosen.pairs), _prep_list(args)
    )
    preps = analysis.substitutable_prepositions(report.tuples, chosen, args.prep)
    with _out_stream(args.out) as sink:
        analysis.write_substitutables(preps, sink)
    return 0


def cmd_analyze_patterns(args) -> int:
    corpus = load_corpus(args.corpus)
    seeds = _seeds_for(args, corpus)
    if not seeds:
        raise PrepwbError("no seed pairs: the sense has no tagged instances")
    report = analysis.expand_realizations(corpus, seeds, _prep_list(args))
    patterns = analysis.alternation_patterns(report.tuples)
    with _out_stream(args.out) as sink:
        analysis.write_patterns(patterns, sink)
    return 0


def cmd_disambiguate(args) -> int:
    inv = _load_inventory(args.data, args.prep)
    rules = disambig.compile_rules(inv)
    lexicon = args.lexicon or str(Path(args.data) / "categories.tsv")
    if Path(lexicon).is_file():
        oracle = disambig.oracle_from_lexicon(lexicon)
    else:
        oracle = disambig.TsvLexicon({})
    unknown = disambig.check_rule_categories(rules, oracle)
    if unknown:
        print(
            f"warning: categories not in the lexicon: {', '.join(unknown)}",
            file=sys.stderr,
        )
    ctx = disambig.DisambiguationContext(
        args.prep, args.complement, args.attachment, args.kind
    )
    ranking = disambig.disambiguate(rules, oracle, ctx)
    sys.stdout.write(disambig.render_ranking(ranking))
    return 0


def cmd_network_digraph(args) -> int:
    defs = network.load_definitions(args.definitions)
    graph = network.build_digraph(defs, _prep_list(args))
    with _out_stream(args.out) as sink:
        if args.format == "dot":
            network.write_dot(graph, sink)
        else:
            network.write_edges(graph, sink)
    return 0


def cmd_network_hierarchy(args) -> int:
    inv = _load_inventory(args.data, args.prep)
    with _out_stream(args.out) as sink:
        sink.write(network.render_hierarchy(network.hierarchy(inv)))
    return 0


def cmd_serve(args) -> int:
    from . import service

    if args.config:
        config = project.load_config(args.config)
    else:
        if not (args.corpus and args.data):
            raise _UsageError("serve needs --config or both --corpus and --data")
        config = project.ProjectConfig(
            corpus_root=args.corpus, data_dir=args.data,
            listen_address=args.address,
        )
    service.serve(config)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="prepwb", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest-check", help="validate a corpus directory")
    p.add_argument("--corpus", required=True)
    p.set_defaults(func=cmd_ingest_check)

    p = sub.add_parser("extract", help="write the instance file for a preposition")
    p.add_argument("--corpus", required=True)
    p.add_argument("--prep", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("senses", help="print an inventory or add a subsense")
    p.add_argument("--data", required=True)
    p.add_argument("--prep", required=True)
    p.add_argument("--out")
    p.add_argument("--add-subsense", metavar="PARENT",
                   help='core key like "(1)" to append a subsense under')
    p.add_argument("--relation")
    p.add_argument("--complement-properties")
    p.add_argument("--attachment-properties")
    p.set_defaults(func=cmd_senses)

    p = sub.add_parser("tag", help="assign senses to instance ids")
    p.add_argument("--corpus", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--prep", required=True)
    p.add_argument("--ids", required=True, help="comma-separated instance ids")
    p.add_argument("--senses", required=True,
                   help='semicolon-separated keys like "2 (1a)"')
    p.add_argument("--tagger", default=tagging.DEFAULT_TAGGER)
    p.add_argument("--note")
    p.set_defaults(func=cmd_tag)

    analyze = sub.add_parser("analyze", help="aggregation reports")
    asub = analyze.add_subparsers(dest="report", required=True)

    p = asub.add_parser("pairs", help="frame:FE pairs per sense")
    p.add_argument("--corpus", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--prep", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze_pairs)

    p = asub.add_parser("units", help="lexical units per pair for one sense")
    p.add_argument("--corpus", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--prep", required=True)
    p.add_argument("--sense", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze_units)

    for name, func, blurb in (
        ("expand", cmd_analyze_expand, "realization tuples for seed pairs"),
        ("patterns", cmd_analyze_patterns, "GF/PT alternations by POS"),
    ):
        p = asub.add_parser(name, help=blurb)
        p.add_argument("--corpus", required=True)
        p.add_argument("--seeds", type=_seed_arg, nargs="*", default=[],
                       help="Frame:FE pairs; alternative to --sense")
        p.add_argument("--data")
        p.add_argument("--prep")
        p.add_argument("--sense")
        p.add_argument("--preps", help="preposition list file")
        p.add_argument("--out")
        p.set_defaults(func=func)

    p = asub.add_parser("subst", help="other prepositions for a sense's pairs")
    p.add_argument("--corpus", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--prep", required=True)
    p.add_argument("--sense", required=True)
    p.add_argument("--preps")
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze_subst)

    p = sub.add_parser("disambiguate", help="rank senses for a context")
    p.add_argument("--data", required=True)
    p.add_argument("--prep", required=True)
    p.add_argument("--complement", required=True, type=_head_arg,
                   metavar="LEMMA.POS")
    p.add_argument("--attachment", required=True, type=_head_arg,
                   metavar="LEMMA.POS")
    p.add_argument("--kind", required=True,
                   choices=disambig.ATTACHMENT_KINDS)
    p.add_argument("--lexicon", help="category lexicon TSV")
    p.set_defaults(func=cmd_disambiguate)

    net = sub.add_parser("network", help="definition digraph and hierarchy")
    nsub = net.add_subparsers(dest="view", required=True)

    p = nsub.add_parser("digraph", help="gloss terminal-preposition digraph")
    p.add_argument("--definitions", required=True)
    p.add_argument("--preps")
    p.add_argument("--format", choices=("edges", "dot"), default="edges")
    p.add_argument("--out")
    p.set_defaults(func=cmd_network_digraph)

    p = nsub.add_parser("hierarchy", help="core/subsense tree for a preposition")
    p.add_argument("--data", required=True)
    p.add_argument("--prep", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_network_hierarchy)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--config", help="JSON project config")
    p.add_argument("--corpus")
    p.add_argument("--data")
    p.add_argument("--address", default="127.0.0.1:8743")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except SystemExit as exc:
        # argparse --help path
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except CorpusLoadError as exc:
        for err in exc.errors:
            print(f"{err.path}:{err.line}: {err.reason}", file=sys.stderr)
        print(f"{len(exc.errors)} malformed file(s)", file=sys.stderr)
        return 2
    except (PrepwbError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
