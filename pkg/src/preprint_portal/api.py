"""JSON HTTP surface of the portal.

Responses are byte-stable for a fixed store state: objects serialize with
sorted keys and no whitespace, timestamps are RFC 3339 UTC. Every 4xx body
is {"code": ..., "message": ...}; internals never leak into bodies.

Endpoints:
    GET    /api/search
    GET    /api/papers/{arxiv_id}
    PUT    /api/users/{user_id}/collection/{arxiv_id}
    DELETE /api/users/{user_id}/collection/{arxiv_id}
    GET    /api/users/{user_id}/collection
    GET    /thumbs/{arxiv_id}.png
    GET    /healthz
"""

from __future__ import annotations

import json
from datetime import datetime
from typing import Any, Optional

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import FileResponse, JSONResponse, PlainTextResponse
from starlette.exceptions import HTTPException as StarletteHTTPException

from .collections import AddOutcome, RemoveOutcome
from .errors import BadIdentifier, InvalidQuery, UnknownPaper
from .ids import validate_id
from .models import PaperRecord, RankedHit, SearchQuery, SortMode, TimeRange, field_mask
from .service import Portal
from .timefmt import format_rfc3339, parse_rfc3339

THUMB_CACHE_CONTROL = "public, max-age=31536000, immutable"


class SortedJSONResponse(JSONResponse):
    def render(self, content: Any) -> bytes:
        return json.dumps(content, sort_keys=True, separators=(",", ":")).encode("utf-8")


class ApiError(Exception):
    """Maps straight to a 4xx with a machine-readable code."""

    def __init__(self, status_code: int, code: str, message: str):
        self.status_code = status_code
        self.code = code
        self.message = message
        super().__init__(message)


def _sort_key_json(sort_key) -> Any:
    if isinstance(sort_key, datetime):
        return format_rfc3339(sort_key)
    return sort_key


def _parse_search_params(
    portal: Portal,
    q: str,
    fields: str,
    sort: str,
    from_: Optional[str],
    to: Optional[str],
    page: Optional[str],
    per_page: Optional[str],
) -> SearchQuery:
    try:
        mask = field_mask(name.strip() for name in fields.split(",") if name.strip())
    except ValueError as exc:
        raise ApiError(400, "bad_fields", str(exc)) from exc

    try:
        sort_mode = SortMode(sort)
    except ValueError as exc:
        raise ApiError(400, "bad_sort", f"sort must be one of {[m.value for m in SortMode]}") from exc

    time_range = None
    if (from_ is None) != (to is None):
        raise ApiError(400, "bad_range", "from and to must be given together")
    if from_ is not None and to is not None:
        try:
            time_range = TimeRange(parse_rfc3339(from_), parse_rfc3339(to))
        except ValueError as exc:
            raise ApiError(400, "bad_range", str(exc)) from exc

    try:
        page_num = int(page) if page is not None else 1
        if page_num < 1:
            raise ValueError
    except ValueError:
        raise ApiError(400, "bad_page", "page must be a positive integer") from None

    limit = portal.config.per_page_max
    try:
        size = int(per_page) if per_page is not None else portal.config.per_page_default
        if not 1 <= size <= limit:
            raise ValueError
    except ValueError:
        raise ApiError(400, "bad_per_page", f"per_page must be in [1, {limit}]") from None

    return SearchQuery(
        text=q, fields=mask, sort=sort_mode, time_range=time_range, page=page_num, per_page=size
    )


def _validated_id(arxiv_id: str) -> str:
    try:
        validate_id(arxiv_id)
    except BadIdentifier as exc:
        raise ApiError(400, "bad_identifier", str(exc)) from exc
    return arxiv_id


def create_app(portal: Portal) -> FastAPI:
    app = FastAPI(
        title="preprint-portal",
        default_response_class=SortedJSONResponse,
        docs_url=None,
        redoc_url=None,
        openapi_url=None,
    )

    @app.exception_handler(ApiError)
    async def _api_error(request: Request, exc: ApiError):
        return SortedJSONResponse(
            {"code": exc.code, "message": exc.message}, status_code=exc.status_code
        )

    @app.exception_handler(StarletteHTTPException)
    async def _http_error(request: Request, exc: StarletteHTTPException):
        codes = {404: "not_found", 405: "method_not_allowed"}
        code = codes.get(exc.status_code, f"http_{exc.status_code}")
        return SortedJSONResponse(
            {"code": code, "message": str(exc.detail)}, status_code=exc.status_code
        )

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError):
        return SortedJSONResponse(
            {"code": "bad_request", "message": "invalid request parameters"}, status_code=400
        )

    def hit_payload(hit: RankedHit, record: PaperRecord) -> dict:
        payload = {
            "arxiv_id": record.arxiv_id,
            "title": record.title,
            "authors": list(record.authors),
            "categories": list(record.categories),
            "abstract": record.abstract,
            "latest_date": format_rfc3339(record.latest_date),
            "relevance_score": hit.relevance_score,
            "sort_key": _sort_key_json(hit.sort_key),
            "mention_count": portal.mentions.mention_count(hit.arxiv_id),
            "collection_count": portal.collections.collection_count(hit.arxiv_id),
        }
        if portal.thumbnail_ready(record.arxiv_id):
            payload["thumbnail_url"] = f"/thumbs/{record.arxiv_id}.png"
        return payload

    @app.get("/healthz", response_class=PlainTextResponse)
    def healthz() -> str:
        return "ok"

    @app.get("/api/search")
    def search(
        q: str = "",
        fields: str = "",
        sort: str = "date",
        from_: Optional[str] = Query(None, alias="from"),
        to: Optional[str] = None,
        page: Optional[str] = None,
        per_page: Optional[str] = None,
    ):
        query = _parse_search_params(portal, q, fields, sort, from_, to, page, per_page)
        try:
            hits, total = portal.search(query)
        except InvalidQuery as exc:
            raise ApiError(400, "bad_query", str(exc)) from exc
        payloads = []
        for hit in hits:
            record = portal.get_paper(hit.arxiv_id)
            if record is not None:
                payloads.append(hit_payload(hit, record))
        return {
            "total": total,
            "page": query.page,
            "per_page": query.per_page,
            "hits": payloads,
        }

    @app.get("/api/papers/{arxiv_id:path}")
    def paper_detail(arxiv_id: str):
        _validated_id(arxiv_id)
        record = portal.get_paper(arxiv_id)
        if record is None:
            raise ApiError(404, "unknown_paper", f"no such paper: {arxiv_id}")
        payload = {
            "arxiv_id": record.arxiv_id,
            "title": record.title,
            "authors": list(record.authors),
            "categories": list(record.categories),
            "abstract": record.abstract,
            "latest_date": format_rfc3339(record.latest_date),
            "versions": [
                {"version": v.version_number, "submitted_at": format_rfc3339(v.submitted_at)}
                for v in record.versions
            ],
            "mentions": portal.mention_links(record.arxiv_id),
            "mention_count": portal.mentions.mention_count(record.arxiv_id),
            "collection_count": portal.collections.collection_count(record.arxiv_id),
            "pdf_url": portal.pdf_url(record),
        }
        if portal.thumbnail_ready(record.arxiv_id):
            payload["thumbnail_url"] = f"/thumbs/{record.arxiv_id}.png"
        return payload

    @app.put("/api/users/{user_id}/collection/{arxiv_id:path}")
    def collection_add(user_id: str, arxiv_id: str):
        _validated_id(arxiv_id)
        try:
            outcome = portal.add_to_collection(user_id, arxiv_id)
        except UnknownPaper as exc:
            raise ApiError(404, "unknown_paper", str(exc)) from exc
        body = {
            "user_id": user_id,
            "arxiv_id": arxiv_id,
            "result": "added" if outcome is AddOutcome.ADDED else "already_present",
            "collection_count": portal.collections.collection_count(arxiv_id),
        }
        status = 201 if outcome is AddOutcome.ADDED else 200
        return SortedJSONResponse(body, status_code=status)

    @app.delete("/api/users/{user_id}/collection/{arxiv_id:path}")
    def collection_remove(user_id: str, arxiv_id: str):
        _validated_id(arxiv_id)
        outcome = portal.remove_from_collection(user_id, arxiv_id)
        if outcome is RemoveOutcome.NOT_PRESENT:
            raise ApiError(404, "not_present", f"{arxiv_id} is not in the collection")
        return {
            "user_id": user_id,
            "arxiv_id": arxiv_id,
            "result": "removed",
            "collection_count": portal.collections.collection_count(arxiv_id),
        }

    @app.get("/api/users/{user_id}/collection")
    def collection_list(user_id: str):
        entries = portal.list_collection(user_id)
        return {
            "user_id": user_id,
            "entries": [
                {"arxiv_id": e.arxiv_id, "added_at": format_rfc3339(e.added_at)}
                for e in entries
            ],
        }

    @app.get("/thumbs/{name:path}")
    def thumbnail(name: str):
        if not name.endswith(".png"):
            raise ApiError(400, "bad_identifier", "thumbnail paths end in .png")
        arxiv_id = _validated_id(name[: -len(".png")])
        if not portal.thumbnail_ready(arxiv_id):
            raise ApiError(404, "thumbnail_unavailable", f"no strip for {arxiv_id}")
        return FileResponse(
            portal.thumbnail_path(arxiv_id),
            media_type="image/png",
            headers={"Cache-Control": THUMB_CACHE_CONTROL},
        )

    return app
