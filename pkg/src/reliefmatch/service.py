"""REST facade over the pipeline and store (mounted under /api/v1).

Error taxonomy is closed: 400 (malformed request), 404 (missing id),
409 (illegal lifecycle transition / duplicate), 422 (invariant-violating
payload), 500. Every 2xx mutation is durable before the response.
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass, field as dc_field
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import matcher
from .lexicons import data_path, default_paths
from .model import (
    Contact,
    ContactKind,
    ExtractionResult,
    IllegalTransition,
    LabelOrigin,
    MatchStatus,
    Post,
    PostKind,
    ResourceClass,
    SourceChannel,
    Status,
    ValidationError,
    VerifiedLocation,
    parse_ts,
)
from .pipeline import PipelineContext, parse_text
from .store import DuplicateId, KindMismatch, NotFound, PostFilter, Store
from .textprep import EmptyAfterCleaning

API_PREFIX = "/api/v1"


@dataclass
class ApiConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    store_path: str = "relief.journal"
    event: str = "nepal"
    classifier: str = "cue"  # cue | linear
    model_path: str | None = None
    other_margin: float = 0.0
    suggestion_k: int = 20
    cors_origins: list[str] = dc_field(default_factory=lambda: ["*"])

    def __post_init__(self) -> None:
        if self.suggestion_k < 1:
            raise ValueError("suggestion_k must be >= 1")
        if self.classifier not in ("cue", "linear"):
            raise ValueError("classifier must be 'cue' or 'linear'")
        if self.classifier == "linear" and not self.model_path:
            raise ValueError("linear classifier requires model_path")


class MatchBody(BaseModel):
    need_id: str
    avail_id: str


class ParseBody(BaseModel):
    text: str = ""


class PostBody(BaseModel):
    text: str = ""
    overrides: dict = {}


def _candidate_json(c: matcher.MatchCandidate) -> dict:
    return c.to_json()


def build_app(config: ApiConfig, store: Store | None = None, ctx: PipelineContext | None = None) -> FastAPI:
    # fail fast when referenced knowledge files are missing
    for p in default_paths().__dict__.values():
        if not Path(p).exists():
            raise FileNotFoundError(p)
    if not data_path(f"bounds_{config.event}.json").exists():
        raise FileNotFoundError(f"no bounds file for event {config.event!r}")
    if config.model_path and not Path(config.model_path).exists():
        raise FileNotFoundError(config.model_path)

    if ctx is None:
        ctx = PipelineContext.default(
            config.event,
            model_path=Path(config.model_path) if config.classifier == "linear" else None,
            other_margin=config.other_margin,
        )
    if store is None:
        store = Store(config.store_path)

    app = FastAPI(title="reliefmatch", version="1.0", openapi_url=f"{API_PREFIX}/spec")
    app.state.store = store
    app.state.ctx = ctx
    app.state.config = config
    if config.cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=config.cors_origins,
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(NotFound)
    async def _not_found(_req: Request, exc: NotFound):
        return JSONResponse(status_code=404, content={"detail": str(exc)})

    @app.exception_handler(IllegalTransition)
    async def _conflict(_req: Request, exc: IllegalTransition):
        return JSONResponse(status_code=409, content={"detail": str(exc)})

    @app.exception_handler(DuplicateId)
    async def _duplicate(_req: Request, exc: DuplicateId):
        return JSONResponse(status_code=409, content={"detail": f"duplicate id {exc}"})

    @app.exception_handler(KindMismatch)
    async def _kind_mismatch(_req: Request, exc: KindMismatch):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.exception_handler(ValidationError)
    async def _invalid(_req: Request, exc: ValidationError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    def bad_request(msg: str) -> HTTPException:
        return HTTPException(status_code=400, detail=msg)

    def parse_int(raw: str | None, name: str, default: int) -> int:
        if raw is None:
            return default
        try:
            return int(raw)
        except ValueError:
            raise bad_request(f"{name} must be an integer") from None

    def parse_enum(raw: str | None, enum_cls, name: str):
        if raw is None:
            return None
        try:
            return enum_cls(raw.lower())
        except ValueError:
            raise bad_request(f"invalid {name}: {raw!r}") from None

    # -- reads ------------------------------------------------------------

    @app.get(f"{API_PREFIX}/posts")
    def list_posts(
        request: Request,
        kind: str | None = None,
        status: str | None = None,
        resource: str | None = None,
        q: str | None = None,
    ):
        limit = parse_int(request.query_params.get("limit"), "limit", 50)
        offset = parse_int(request.query_params.get("offset"), "offset", 0)
        if limit < 1:
            raise bad_request("limit must be >= 1")
        if offset < 0:
            raise bad_request("offset must be >= 0")
        flt = PostFilter(
            kind=parse_enum(kind, PostKind, "kind"),
            status=parse_enum(status, Status, "status"),
            resource=resource,
            text_substring=q,
            limit=limit,
            offset=offset,
        )
        return store.query_posts(flt).to_json()

    @app.get(f"{API_PREFIX}/posts/{{post_id}}")
    def get_post(post_id: str):
        return store.get_post(post_id).to_json()

    @app.get(f"{API_PREFIX}/matches")
    def list_matches(request: Request, status: str | None = None):
        limit = parse_int(request.query_params.get("limit"), "limit", 200)
        offset = parse_int(request.query_params.get("offset"), "offset", 0)
        if limit < 1:
            raise bad_request("limit must be >= 1")
        records = store.query_matches(parse_enum(status, MatchStatus, "status"))
        window = records[offset : offset + limit]
        return {
            "items": [r.to_json() for r in window],
            "total": len(records),
            "limit": limit,
            "offset": offset,
            "revision": store.revision,
        }

    @app.get(f"{API_PREFIX}/posts/{{post_id}}/suggestions")
    def suggestions(post_id: str, request: Request):
        k = parse_int(request.query_params.get("k"), "k", config.suggestion_k)
        if k < 0:
            raise bad_request("k must be >= 0")
        post = store.get_post(post_id)
        pool = store.all_posts()
        if post.label is PostKind.NEED:
            cands = matcher.rank_availabilities(post, pool, k)
        elif post.label is PostKind.AVAILABILITY:
            cands = matcher.rank_needs(post, pool, k)
        else:
            cands = []
        return {"items": [_candidate_json(c) for c in cands], "post_id": post_id, "k": k}

    # -- lifecycle --------------------------------------------------------

    @app.post(f"{API_PREFIX}/matches")
    def create_match(body: MatchBody):
        return store.create_match(body.need_id, body.avail_id).to_json()

    @app.post(f"{API_PREFIX}/matches/{{match_id}}/complete")
    def complete_match(match_id: str):
        return store.complete_match(match_id).to_json()

    @app.delete(f"{API_PREFIX}/matches/{{match_id}}")
    def discard_match(match_id: str):
        return {"revision": store.discard_match(match_id)}

    # -- parse and add ----------------------------------------------------

    def run_parse(text: str):
        if not text.strip():
            raise bad_request("text must be nonempty")
        try:
            return parse_text(text, ctx)
        except EmptyAfterCleaning:
            raise bad_request("text empty after cleaning") from None

    @app.post(f"{API_PREFIX}/parse")
    def parse_only(body: ParseBody):
        out = run_parse(body.text)
        return JSONResponse(
            content={
                "kind": out.kind.value,
                "scores": {k.value: out.scores[k] for k in sorted(out.scores, key=lambda x: x.value)},
                "text_clean": out.tokenized.clean_text,
                "extraction": out.extraction.to_json(),
            }
        )

    @app.post(f"{API_PREFIX}/posts")
    def create_post(body: PostBody):
        out = run_parse(body.text)
        ov = body.overrides or {}
        label = out.kind
        label_origin = LabelOrigin.PREDICTED
        if "kind" in ov:
            try:
                label = PostKind(str(ov["kind"]).lower())
            except ValueError:
                raise ValidationError(f"invalid kind override {ov['kind']!r}") from None
            label_origin = LabelOrigin.HUMAN_EDITED
        extraction = _apply_overrides(out.extraction, ov)
        post = Post(
            id=str(ov.get("id") or f"p-{uuid.uuid4().hex[:10]}"),
            text_raw=body.text,
            text_clean=out.tokenized.clean_text,
            created_at=parse_ts(ov["created_at"]) if "created_at" in ov else datetime.now(timezone.utc),
            source_channel=SourceChannel.MANUAL,
            label=label,
            label_origin=label_origin,
            status=Status.ACTIVE,
            extraction=extraction,
        )
        store.put_post(post)
        return post.to_json()

    return app


def _apply_overrides(extraction: ExtractionResult, ov: dict) -> ExtractionResult:
    """Replace extraction fields with human-edited values (422 on bad data)."""
    try:
        resources = (
            frozenset(str(r).lower().strip() for r in ov["resources"])
            if "resources" in ov
            else extraction.resources
        )
        classes = (
            frozenset(ResourceClass(str(c).lower()) for c in ov["resource_classes"])
            if "resource_classes" in ov
            else extraction.resource_classes
        )
        quantities = (
            {str(k).lower(): int(v) for k, v in ov["quantities"].items()}
            if "quantities" in ov
            else extraction.quantities
        )
        locations = (
            tuple(VerifiedLocation.from_json(x) for x in ov["locations"])
            if "locations" in ov
            else extraction.locations
        )
        sources = tuple(str(s) for s in ov["sources"]) if "sources" in ov else extraction.sources
        contacts = (
            tuple(Contact(ContactKind(str(c["kind"]).lower()), str(c["value"])) for c in ov["contacts"])
            if "contacts" in ov
            else extraction.contacts
        )
        return ExtractionResult(
            resources=resources,
            resource_classes=classes,
            quantities=quantities,
            locations=locations,
            sources=sources,
            contacts=contacts,
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"bad override payload: {exc}") from None
