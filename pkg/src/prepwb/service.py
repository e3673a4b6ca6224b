"""HTTP face of the workbench; the annotation UI's only backend.

JSON in and out, snake_case fields mirroring the domain types. Errors
are always `{"code", "message", "detail"}` with a code from the closed
set:

    bad_request         malformed body, query, or field types
    unknown_preposition the path or body names a preposition without an
                        inventory file               (404)
    unknown_sense       sense key not in the inventory (404)
    unknown_parent      subsense parent key not found  (404)
    parent_not_core     subsense parent is itself a subsense (400)
    unknown_instance    tag id matches no extracted instance (404)
    stale_version       optimistic-concurrency miss    (409)

Tag mutations carry the version the client read; the store persists the
tag file and the bumped version before the response leaves, so an
acknowledged write survives a kill -9.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import analysis, disambig, tagging
from .corpus import frame_element_at
from .errors import (
    DanglingInstanceError,
    DataError,
    StaleVersionError,
    UnknownSenseError,
)
from .project import ProjectConfig, ProjectStore
from .senses import SenseRecord, parse_sense_key


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, detail=None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.detail = detail


def _bad_request(message: str, detail=None) -> ApiError:
    return ApiError(400, "bad_request", message, detail)


def _sense_dict(rec: SenseRecord) -> dict:
    return {
        "key": str(rec.key),
        "ordinal": rec.key.ordinal,
        "ode_key": rec.key.ode_key,
        "is_core": rec.key.is_core,
        "relation_name": rec.relation_name,
        "quirk_syntax": rec.quirk_syntax_sorted(),
        "quirk_paragraphs": list(rec.quirk_paragraphs),
        "complement_properties": rec.complement_properties,
        "attachment_properties": rec.attachment_properties,
        "similar_prepositions": list(rec.similar_prepositions),
        "complement_categories": list(rec.complement_categories),
        "attachment_categories": list(rec.attachment_categories),
        "origin": rec.origin,
    }


def _require_str(body: dict, key: str) -> str:
    value = body.get(key)
    if not isinstance(value, str) or not value:
        raise _bad_request(f"field {key!r} must be a non-empty string")
    return value


def _require_str_list(body: dict, key: str) -> list[str]:
    value = body.get(key)
    if (
        not isinstance(value, list)
        or not value
        or not all(isinstance(v, str) and v for v in value)
    ):
        raise _bad_request(f"field {key!r} must be a non-empty list of strings")
    return value


def create_app(store: ProjectStore) -> FastAPI:
    app = FastAPI(title="preposition workbench", docs_url=None, redoc_url=None)

    @app.exception_handler(ApiError)
    async def _api_error(_request: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={"code": exc.code, "message": exc.message,
                     "detail": exc.detail},
        )

    def _known(prep: str) -> str:
        if not store.has_preposition(prep):
            raise ApiError(
                404, "unknown_preposition", f"no inventory for {prep!r}",
                {"preposition": prep},
            )
        return prep

    @app.get("/api/prepositions")
    def list_prepositions():
        return {"prepositions": store.prepositions()}

    @app.get("/api/prepositions/{prep}/senses")
    def get_senses(prep: str):
        inv = store.inventory(_known(prep))
        return {
            "preposition": prep,
            "notes": inv.notes,
            "summary": inv.summary,
            "senses": [_sense_dict(rec) for rec in inv.senses],
        }

    @app.post("/api/prepositions/{prep}/senses/subsense")
    async def post_subsense(prep: str, request: Request):
        inv = store.inventory(_known(prep))
        body = await _json_body(request)
        parent_text = _require_str(body, "parent")
        try:
            parent = parse_sense_key(parent_text)
        except ValueError as exc:
            raise _bad_request(str(exc)) from None
        parent_rec = inv.find(parent)
        if parent_rec is None:
            raise ApiError(
                404, "unknown_parent", f"no sense {parent_text!r} for {prep!r}",
                {"parent": parent_text},
            )
        if not parent_rec.key.is_core:
            raise ApiError(
                400, "parent_not_core",
                f"{parent_text!r} is a subsense; pick its core instead",
                {"parent": parent_text},
            )
        fields = body.get("fields", {})
        if not isinstance(fields, dict):
            raise _bad_request("field 'fields' must be an object")
        try:
            converted = _convert_fields(fields)
            key = store.add_subsense(prep, parent_text, converted)
        except (ValueError, DataError) as exc:
            raise _bad_request(str(exc)) from None
        return {"key": str(key), "sense": _sense_dict(inv.require(key))}

    @app.get("/api/prepositions/{prep}/instances")
    def get_instances(prep: str, grouped: str = ""):
        records = store.records(_known(prep))
        if grouped.lower() not in ("true", "1", "yes"):
            return {
                "preposition": prep,
                "instances": [
                    {
                        "frame": rec.frame,
                        "frame_element": rec.frame_element,
                        "lexical_unit": rec.lexical_unit,
                        "subcorpus": rec.subcorpus,
                        "sentence_id": rec.sentence_id,
                        "prep_start": rec.prep_start,
                        "instance_id": rec.instance_id,
                    }
                    for rec in records
                ],
            }
        taggable = tagging.taggable_records(records)
        groups = tagging.group_instances(taggable)
        by_id = {rec.instance_id: rec for rec in taggable}
        tagset = store.tagset(prep)
        payload = []
        for group in groups:
            members = []
            for iid in group.members:
                rec = by_id[iid]
                sent = store.sentence(rec)
                tag = tagset.tags.get(iid)
                fe_span = None
                text = None
                prep_span = None
                if sent is not None:
                    text = sent.text
                    prep_span = [rec.prep_start, rec.prep_start + len(prep)]
                    span = frame_element_at(sent, rec.prep_start)
                    if span is not None:
                        fe_span = [span.start, span.end]
                members.append({
                    "instance_id": iid,
                    "sentence_id": rec.sentence_id,
                    "prep_start": rec.prep_start,
                    "subcorpus": rec.subcorpus,
                    "text": text,
                    "prep_span": prep_span,
                    "fe_span": fe_span,
                    "tags": list(tag.sense_keys) if tag else None,
                    "tagger": tag.tagger if tag else None,
                    "note": tag.note if tag else None,
                })
            payload.append({
                "frame": group.frame,
                "frame_element": group.frame_element,
                "lexical_unit": group.lexical_unit,
                "members": members,
            })
        placeholders = [
            {
                "frame": rec.frame,
                "lexical_unit": rec.lexical_unit,
                "subcorpus": rec.subcorpus,
                "instance_id": rec.instance_id,
            }
            for rec in records
            if rec.is_placeholder
        ]
        return {
            "preposition": prep,
            "version": store.tags_version(prep),
            "groups": payload,
            "placeholders": placeholders,
        }

    @app.post("/api/prepositions/{prep}/tags")
    async def post_tags(prep: str, request: Request):
        _known(prep)
        body = await _json_body(request)
        version = body.get("version")
        if not isinstance(version, int) or isinstance(version, bool):
            raise _bad_request("field 'version' must be an integer")
        ids = _require_str_list(body, "ids")
        sense_keys = _require_str_list(body, "sense_keys")
        tagger = body.get("tagger", tagging.DEFAULT_TAGGER)
        note = body.get("note")
        if not isinstance(tagger, str) or not tagger:
            raise _bad_request("field 'tagger' must be a non-empty string")
        if note is not None and not isinstance(note, str):
            raise _bad_request("field 'note' must be a string")
        for key in sense_keys:
            try:
                parse_sense_key(key)
            except ValueError as exc:
                raise _bad_request(str(exc)) from None
        try:
            return store.assign_tags(
                prep, version, ids, sense_keys, tagger=tagger, note=note
            )
        except StaleVersionError as exc:
            raise ApiError(
                409, "stale_version", str(exc),
                {"current": exc.expected, "submitted": exc.actual},
            ) from None
        except UnknownSenseError as exc:
            raise ApiError(
                404, "unknown_sense", str(exc), {"keys": exc.keys},
            ) from None
        except DanglingInstanceError as exc:
            raise ApiError(
                404, "unknown_instance", str(exc), {"ids": exc.instance_ids},
            ) from None

    @app.get("/api/prepositions/{prep}/tags")
    def get_tags(prep: str):
        tagset = store.tagset(_known(prep))
        return {
            "preposition": prep,
            "version": store.tags_version(prep),
            "tags": [
                {
                    "instance_id": iid,
                    "sense_keys": list(tag.sense_keys),
                    "tagger": tag.tagger,
                    "note": tag.note,
                }
                for iid, tag in sorted(tagset.tags.items())
            ],
        }

    @app.get("/api/prepositions/{prep}/progress")
    def get_progress(prep: str):
        report = tagging.progress(
            store.tagset(_known(prep)), store.records(prep)
        )
        return {
            "preposition": prep,
            "tagged": report.tagged,
            "total": report.total,
            "per_sense": report.per_sense,
            "unknown_ids": report.unknown_ids,
        }

    @app.get("/api/prepositions/{prep}/analysis/pairs")
    def get_pairs(prep: str):
        inv = store.inventory(_known(prep))
        pairs = analysis.pairs_by_sense(store.tagset(prep), store.records(prep))
        out = []
        for entry in pairs:
            rec = inv.find(entry.sense)
            out.append({
                "sense": str(entry.sense),
                "relation_name": rec.relation_name if rec else None,
                "pairs": [[frame, fe] for frame, fe in entry.pairs],
            })
        return {"preposition": prep, "pairs_by_sense": out}

    @app.get("/api/prepositions/{prep}/analysis/expand")
    def get_expand(prep: str, sense: str = ""):
        inv = store.inventory(_known(prep))
        if not sense:
            raise _bad_request("query parameter 'sense' is required")
        try:
            rec = inv.require(sense)
        except UnknownSenseError as exc:
            raise ApiError(
                404, "unknown_sense", str(exc), {"keys": exc.keys}
            ) from None
        except ValueError as exc:
            raise _bad_request(str(exc)) from None
        pairs = analysis.pairs_by_sense(store.tagset(prep), store.records(prep))
        seeds: set[tuple[str, str]] = set()
        for entry in pairs:
            if str(entry.sense) == str(rec.key):
                seeds = set(entry.pairs)
        if not seeds:
            return {
                "preposition": prep, "sense": str(rec.key), "seeds": [],
                "tuples": [], "diagnostics": {
                    "missing_gf": 0, "missing_pt": 0, "headless_pp": 0,
                },
                "substitutable": [],
            }
        report = analysis.expand_realizations(
            store.corpus, seeds, store.preposition_list
        )
        entry = analysis.PairBySense(rec.key, tuple(sorted(seeds)))
        return {
            "preposition": prep,
            "sense": str(rec.key),
            "seeds": [[frame, fe] for frame, fe in sorted(seeds)],
            "tuples": [
                {
                    "frame": t.frame,
                    "frame_element": t.frame_element,
                    "lexical_unit": t.lexical_unit,
                    "grammatical_function": t.grammatical_function,
                    "phrase_type": t.phrase_type,
                    "preposition": t.preposition,
                }
                for t in report.tuples
            ],
            "diagnostics": {
                "missing_gf": report.missing_gf,
                "missing_pt": report.missing_pt,
                "headless_pp": report.headless_pp,
            },
            "substitutable": analysis.substitutable_prepositions(
                report.tuples, entry, prep
            ),
        }

    @app.post("/api/disambiguate")
    async def post_disambiguate(request: Request):
        body = await _json_body(request)
        context = body.get("context")
        if not isinstance(context, dict):
            raise _bad_request("field 'context' must be an object")
        prep = _require_str(context, "preposition")
        _known(prep)

        def _head(key: str) -> tuple[str, str]:
            value = context.get(key)
            if (
                not isinstance(value, list) or len(value) != 2
                or not all(isinstance(v, str) and v for v in value)
            ):
                raise _bad_request(f"field {key!r} must be [lemma, pos]")
            return value[0], value[1]

        kind = _require_str(context, "attachment_kind")
        try:
            ctx = disambig.DisambiguationContext(
                prep, _head("complement_head"), _head("attachment_head"), kind
            )
        except ValueError as exc:
            raise _bad_request(str(exc)) from None
        rules = disambig.compile_rules(store.inventory(prep))
        lexicon_path = store.lexicon_path()
        if lexicon_path.is_file():
            oracle = disambig.oracle_from_lexicon(lexicon_path)
        else:
            oracle = disambig.TsvLexicon({})
        ranking = disambig.disambiguate(rules, oracle, ctx)
        return {
            "preposition": prep,
            "ranking": [
                {
                    "sense": str(r.sense),
                    "score": r.score,
                    "matched_constraints": list(r.matched_constraints),
                    "matched": r.matched,
                }
                for r in ranking
            ],
        }

    return app


async def _json_body(request: Request) -> dict:
    try:
        body = await request.json()
    except Exception:
        raise _bad_request("body must be valid JSON") from None
    if not isinstance(body, dict):
        raise _bad_request("body must be a JSON object")
    return body


def _convert_fields(fields: dict) -> dict:
    """JSON subsense fragment -> add_subsense keyword fields."""
    converted: dict = {}
    list_fields = {
        "quirk_paragraphs", "similar_prepositions",
        "complement_categories", "attachment_categories",
    }
    for key, value in fields.items():
        if value is None:
            continue
        if key == "quirk_syntax":
            if not isinstance(value, list) or not all(
                isinstance(v, str) for v in value
            ):
                raise ValueError("quirk_syntax must be a list of codes")
            converted[key] = frozenset(value)
        elif key in list_fields:
            if not isinstance(value, list) or not all(
                isinstance(v, str) for v in value
            ):
                raise ValueError(f"{key} must be a list of strings")
            converted[key] = tuple(value)
        elif key in ("relation_name", "complement_properties",
                     "attachment_properties"):
            if not isinstance(value, str):
                raise ValueError(f"{key} must be a string")
            converted[key] = value
        else:
            raise ValueError(f"unknown sense field {key!r}")
    return converted


def serve(config: ProjectConfig) -> None:
    """Run the service until interrupted."""
    import uvicorn

    store = ProjectStore(config)
    app = create_app(store)
    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
