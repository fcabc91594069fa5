"""Session-oriented REST service for the two-phase workflow.

Create a session from uploaded text, request suggestions, mutate
highlights, generate a summary, edit it, and read back alignments. One
self-contained JSON file per session under the data directory, written
atomically; mutations within a session are serialized and optionally
revision-checked, so two clients racing on one session get a clean
conflict instead of a lost update.

All character offsets in request and response bodies are Unicode scalar
values (not UTF-16 code units).
"""
from __future__ import annotations

import json
import os
import threading
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .align import AlignmentConfig, align, alignment_to_wire
from . import consolidate as conslib
from . import highlights as hl
from . import salience
from .spans import Span, SpanError
from .textpipe import Document, analyze


@dataclass(frozen=True)
class ServiceConfig:
    data_dir: Path = Path("sessions")
    host: str = "127.0.0.1"
    port: int = 8077
    model_endpoint: str = ""
    scorer_endpoint: str = ""
    suggestion_ratio: float = 0.3
    min_content_tokens: int = 3
    coverage_threshold: float = 0.25
    max_iterations: int = 4
    max_document_chars: int = 200_000
    request_timeout: float = 30.0

    def alignment_config(self) -> AlignmentConfig:
        return AlignmentConfig(
            min_content_tokens=self.min_content_tokens,
            coverage_threshold=self.coverage_threshold,
            max_iterations=self.max_iterations,
        )

    @classmethod
    def from_env(cls, env: dict[str, str] | None = None, **overrides: Any) -> "ServiceConfig":
        """Defaults, overlaid with SUMWB_* environment values, then overrides."""
        env = dict(os.environ if env is None else env)
        picked: dict[str, Any] = {}
        for name, cast in [
            ("data_dir", Path),
            ("host", str),
            ("port", int),
            ("model_endpoint", str),
            ("scorer_endpoint", str),
            ("suggestion_ratio", float),
            ("min_content_tokens", int),
            ("coverage_threshold", float),
            ("max_iterations", int),
            ("max_document_chars", int),
            ("request_timeout", float),
        ]:
            raw = env.get(f"SUMWB_{name.upper()}")
            if raw is not None:
                picked[name] = cast(raw)
        picked.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**picked)


@dataclass
class Session:
    id: str
    document: Document
    highlights: hl.HighlightSet
    suggestion_requested: bool = False
    summary_text: str | None = None
    summary_provenance: str | None = None
    alignment_wire: dict | None = None
    stale: bool = False
    created_at: str = ""
    updated_at: str = ""
    revision: int = 1


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def canonical_json(payload: Any) -> str:
    return json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=2) + "\n"


def session_to_payload(session: Session) -> dict:
    return {
        "schema": 1,
        "id": session.id,
        "revision": session.revision,
        "created_at": session.created_at,
        "updated_at": session.updated_at,
        "suggestion_requested": session.suggestion_requested,
        "stale": session.stale,
        "document": {"id": session.document.id, "text": session.document.text},
        "highlights": {
            "active": [
                {"span": [h.span.start, h.span.end], "origin": h.origin}
                for h in session.highlights.active
            ],
            "pending": [
                {"id": s.id, "span": [s.span.start, s.span.end], "score": s.score}
                for s in session.highlights.pending
            ],
        },
        "summary": (
            None
            if session.summary_text is None
            else {"text": session.summary_text, "provenance": session.summary_provenance}
        ),
        "alignment": session.alignment_wire,
    }


def session_from_payload(payload: dict) -> Session:
    doc = analyze(payload["document"]["text"], payload["document"]["id"])
    highlights = hl.HighlightSet(
        document_id=doc.id,
        active=tuple(
            hl.Highlight(Span(*h["span"]), h["origin"])
            for h in payload["highlights"]["active"]
        ),
        pending=tuple(
            hl.PendingSuggestion(s["id"], Span(*s["span"]), s["score"])
            for s in payload["highlights"]["pending"]
        ),
    )
    summary = payload.get("summary")
    return Session(
        id=payload["id"],
        document=doc,
        highlights=highlights,
        suggestion_requested=payload["suggestion_requested"],
        summary_text=None if summary is None else summary["text"],
        summary_provenance=None if summary is None else summary["provenance"],
        alignment_wire=payload.get("alignment"),
        stale=payload["stale"],
        created_at=payload["created_at"],
        updated_at=payload["updated_at"],
        revision=payload["revision"],
    )


class SessionStore:
    """File-backed store: one JSON file per session, atomic replace on write."""

    def __init__(self, data_dir: Path):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._cache: dict[str, Session] = {}
        self._locks: dict[str, threading.RLock] = {}
        self._registry_lock = threading.Lock()

    def _path(self, session_id: str) -> Path:
        return self.data_dir / f"{session_id}.json"

    def lock(self, session_id: str) -> threading.RLock:
        with self._registry_lock:
            return self._locks.setdefault(session_id, threading.RLock())

    def create(self, text: str) -> Session:
        session_id = uuid.uuid4().hex
        doc = analyze(text, session_id)
        now = _now()
        session = Session(
            id=session_id,
            document=doc,
            highlights=hl.HighlightSet(document_id=session_id),
            created_at=now,
            updated_at=now,
        )
        with self.lock(session_id):
            self._cache[session_id] = session
            self.save(session)
        return session

    def get(self, session_id: str) -> Session:
        with self.lock(session_id):
            if session_id in self._cache:
                return self._cache[session_id]
            path = self._path(session_id)
            if not path.exists():
                raise KeyError(session_id)
            session = session_from_payload(json.loads(path.read_text("utf-8")))
            self._cache[session_id] = session
            return session

    def save(self, session: Session) -> None:
        path = self._path(session.id)
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(canonical_json(session_to_payload(session)), "utf-8")
        os.replace(tmp, path)

    def update(self, session_id: str, mutate: Callable[[Session], Session]) -> Session:
        """Apply `mutate` under the session lock, bump revision, persist."""
        with self.lock(session_id):
            session = self.get(session_id)
            mutated = mutate(session)
            mutated.revision = session.revision + 1
            mutated.updated_at = _now()
            self._cache[session_id] = mutated
            self.save(mutated)
            return mutated


class CreateSessionBody(BaseModel):
    text: str


class HighlightMutationBody(BaseModel):
    op: str
    span: list[int] | None = None
    suggestion_id: str | None = None
    revision: int | None = None


class GenerateBody(BaseModel):
    engine: str = "baseline"
    revision: int | None = None


class UpdateSummaryBody(BaseModel):
    text: str
    revision: int | None = None


def document_wire(doc: Document) -> dict:
    return {
        "id": doc.id,
        "text": doc.text,
        "sentences": [
            {
                "index": s.index,
                "span": [s.span.start, s.span.end],
                "tokens": [
                    {
                        "surface": t.surface,
                        "lemma": t.lemma,
                        "span": [t.span.start, t.span.end],
                        "kind": t.kind.value,
                    }
                    for t in s.tokens
                ],
            }
            for s in doc.sentences
        ],
    }


def highlights_wire(set_: hl.HighlightSet) -> dict:
    return {
        "active": [
            {"span": [h.span.start, h.span.end], "origin": h.origin} for h in set_.active
        ],
        "pending": [
            {"id": s.id, "span": [s.span.start, s.span.end], "score": s.score}
            for s in set_.pending
        ],
    }


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig.from_env()
    store = SessionStore(config.data_dir)
    app = FastAPI(title="summary-workbench", version="0.1.0")
    app.state.config = config
    app.state.store = store
    generating: set[str] = set()
    generating_lock = threading.Lock()

    if config.scorer_endpoint:
        scorer: salience.SalienceScorer = salience.HttpScorer(
            config.scorer_endpoint, timeout=config.request_timeout
        )
    else:
        scorer = salience.CentroidScorer()

    def fetch(session_id: str) -> Session:
        try:
            return store.get(session_id)
        except KeyError:
            raise HTTPException(404, f"unknown session {session_id!r}")

    def check_revision(session: Session, supplied: int | None) -> None:
        if supplied is not None and supplied != session.revision:
            raise HTTPException(
                409,
                f"revision conflict: session is at {session.revision}, request supplied {supplied}",
            )

    def recompute_alignment(session: Session, summary_text: str) -> dict:
        summary_doc = analyze(summary_text, "summary")
        amap = align(
            session.document, session.highlights, summary_doc, config.alignment_config()
        )
        return alignment_to_wire(amap)

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody) -> dict:
        if not body.text.strip():
            raise HTTPException(422, "text must be non-empty")
        if len(body.text) > config.max_document_chars:
            raise HTTPException(
                413,
                f"text exceeds the {config.max_document_chars}-character limit",
            )
        session = store.create(body.text)
        return {
            "id": session.id,
            "revision": session.revision,
            "document": document_wire(session.document),
        }

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str) -> dict:
        session = fetch(session_id)
        return {
            "id": session.id,
            "revision": session.revision,
            "created_at": session.created_at,
            "updated_at": session.updated_at,
            "stale": session.stale,
            "document": document_wire(session.document),
            "highlights": highlights_wire(session.highlights),
            "summary": (
                None
                if session.summary_text is None
                else {"text": session.summary_text, "provenance": session.summary_provenance}
            ),
            "alignment": session.alignment_wire,
        }

    @app.post("/sessions/{session_id}/suggestions")
    def get_suggestions(session_id: str) -> dict:
        with store.lock(session_id):
            session = fetch(session_id)
            if not session.suggestion_requested:
                suggestion_set = salience.suggest(
                    session.document, scorer, config.suggestion_ratio
                )

                def install(s: Session) -> Session:
                    s.highlights = hl.with_pending(s.highlights, list(suggestion_set.items))
                    s.suggestion_requested = True
                    return s

                session = store.update(session_id, install)
            return {
                "revision": session.revision,
                "suggestions": highlights_wire(session.highlights)["pending"],
            }

    @app.post("/sessions/{session_id}/highlights")
    def mutate_highlights(session_id: str, body: HighlightMutationBody) -> dict:
        def parse_span() -> Span:
            if body.span is None or len(body.span) != 2:
                raise HTTPException(422, "op requires span: [start, end]")
            try:
                return Span(body.span[0], body.span[1])
            except SpanError as exc:
                raise HTTPException(422, str(exc))

        with store.lock(session_id):
            session = fetch(session_id)
            check_revision(session, body.revision)

            def apply(s: Session) -> Session:
                try:
                    if body.op == "add":
                        s.highlights = hl.add_user_span(s.highlights, parse_span(), s.document)
                    elif body.op == "erase":
                        s.highlights = hl.erase_span(s.highlights, parse_span())
                    elif body.op == "accept":
                        s.highlights = hl.accept_suggestion(s.highlights, body.suggestion_id or "")
                    elif body.op == "reject":
                        s.highlights = hl.reject_suggestion(s.highlights, body.suggestion_id or "")
                    else:
                        raise HTTPException(422, f"unknown op {body.op!r}")
                except hl.UnknownSuggestionError as exc:
                    raise HTTPException(404, f"unknown suggestion id {exc.args[0]!r}")
                except SpanError as exc:
                    raise HTTPException(422, str(exc))
                if s.summary_text is not None:
                    s.stale = True
                return s

            session = store.update(session_id, apply)
            return {
                "revision": session.revision,
                "highlights": highlights_wire(session.highlights),
                "stale": session.stale,
            }

    @app.post("/sessions/{session_id}/summary")
    def generate_summary(session_id: str, body: GenerateBody) -> dict:
        with generating_lock:
            if session_id in generating:
                raise HTTPException(409, "a generation request is already in flight")
            generating.add(session_id)
        try:
            with store.lock(session_id):
                session = fetch(session_id)
                check_revision(session, body.revision)
                if not session.highlights.active:
                    raise HTTPException(400, "no active highlights; highlight content first")
                if body.engine == "baseline":
                    draft = conslib.consolidate_baseline(session.document, session.highlights)
                elif body.engine == "external":
                    if not config.model_endpoint:
                        raise HTTPException(400, "no model endpoint configured")
                    cfg = conslib.GenerationConfig(
                        endpoint=config.model_endpoint, timeout=config.request_timeout
                    )
                    try:
                        draft = conslib.consolidate_external(
                            session.document, session.highlights, cfg
                        )
                    except conslib.GenerationTransportError as exc:
                        raise HTTPException(
                            502, {"error": str(exc), "fallback": "baseline"}
                        )
                    except conslib.GenerationProtocolError as exc:
                        raise HTTPException(502, {"error": str(exc)})
                else:
                    raise HTTPException(422, f"unknown engine {body.engine!r}")

                def apply(s: Session) -> Session:
                    s.summary_text = draft.text
                    s.summary_provenance = draft.provenance
                    s.alignment_wire = recompute_alignment(s, draft.text)
                    s.stale = False
                    return s

                session = store.update(session_id, apply)
                return {
                    "revision": session.revision,
                    "summary": {
                        "text": session.summary_text,
                        "provenance": session.summary_provenance,
                    },
                    "alignment": session.alignment_wire,
                    "stale": session.stale,
                }
        finally:
            with generating_lock:
                generating.discard(session_id)

    @app.put("/sessions/{session_id}/summary")
    def update_summary(session_id: str, body: UpdateSummaryBody) -> dict:
        with store.lock(session_id):
            session = fetch(session_id)
            check_revision(session, body.revision)
            if session.summary_text is None:
                raise HTTPException(400, "no summary to edit; generate one first")

            def apply(s: Session) -> Session:
                s.summary_text = body.text
                s.summary_provenance = conslib.USER_EDITED
                s.alignment_wire = recompute_alignment(s, body.text)
                return s

            session = store.update(session_id, apply)
            return {"revision": session.revision, "alignment": session.alignment_wire}

    @app.get("/sessions/{session_id}/alignment")
    def get_alignment(session_id: str) -> dict:
        session = fetch(session_id)
        return {
            "revision": session.revision,
            "stale": session.stale,
            "alignment": session.alignment_wire,
        }

    return app
