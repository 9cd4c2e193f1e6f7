"""Local HTTP service exposing the engine to the self-evaluation UI.

All endpoints live under ``/api`` and speak UTF-8 JSON. GET payloads for
catalogs, assessments and reports are the library serializations verbatim,
so a byte-for-byte diff against the CLI ``--format json`` output is empty.
Mutations funnel through a per-workspace lock (single-writer contract);
reads always see a consistent immutable snapshot. Errors use the shape
``{"error": {"code": ..., "message": ...}}``.

Optimistic concurrency: a PATCH may carry the last-seen ``modified``
timestamp in the ``X-Expected-Modified`` header; a stale value yields 409
so two browser tabs cannot silently overwrite each other.
"""

from __future__ import annotations

import dataclasses
import threading
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.responses import HTMLResponse, JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, ConfigDict

from ctm2 import analysis, render
from ctm2.errors import BindingError, UnknownIdError
from ctm2.model import serialize_model
from ctm2.scoring import (
    Assessment,
    ImplementationState,
    ScoringPolicy,
    TestbedClassification,
    TestbedMeta,
    format_timestamp,
    score_assessment,
    scorecard_to_json,
    utcnow,
)
from ctm2.workspace import (
    Workspace,
    load_workspace,
    save_assessment,
    serialize_assessment,
)


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        self.status = status
        self.code = code
        self.message = message
        super().__init__(message)


class WorkspaceStore:
    """Current workspace snapshot plus the single-writer mutation lock."""

    def __init__(self, root: Path):
        self._lock = threading.Lock()
        self._workspace = load_workspace(root)

    @property
    def workspace(self) -> Workspace:
        return self._workspace

    def mutate(self, fn) -> Workspace:
        with self._lock:
            self._workspace = fn(self._workspace)
            return self._workspace


# --- request/response models -------------------------------------------

class MetaBody(BaseModel):
    name: str
    institute: str = ""
    sector: str = ""
    classification: str = "hybrid"
    notes: str = ""


class CreateAssessmentBody(BaseModel):
    model_config = ConfigDict(protected_namespaces=())
    model_id: str
    meta: MetaBody


class CatalogSummary(BaseModel):
    id: str
    version: str
    name: str
    domains: list[str]


class AssessmentSummary(BaseModel):
    model_config = ConfigDict(protected_namespaces=())
    id: str
    name: str
    institute: str
    sector: str
    classification: str
    model_id: str
    model_version: str
    modified: str


def _policy(value: str) -> ScoringPolicy:
    try:
        return ScoringPolicy(value)
    except ValueError:
        raise ApiError(400, "bad_policy",
                       f"policy must be 'strict' or 'lenient', got '{value}'") from None


def _states(changes: dict[str, str]) -> dict[str, ImplementationState]:
    parsed: dict[str, ImplementationState] = {}
    for cid, raw in changes.items():
        try:
            parsed[cid] = ImplementationState(raw)
        except ValueError:
            allowed = ", ".join(s.value for s in ImplementationState)
            raise ApiError(400, "bad_state",
                           f"invalid state '{raw}' for '{cid}' (allowed: {allowed})") from None
    return parsed


def _json_bytes(data: bytes, status: int = 200) -> Response:
    return Response(content=data, status_code=status, media_type="application/json")


_FALLBACK_PAGE = """<!doctype html>
<html><head><title>ctm2</title></head>
<body><h1>ctm2 service</h1>
<p>The web UI is not built. The JSON API is available under <code>/api</code>.</p>
</body></html>
"""


def default_webui_dir() -> Path:
    return Path(__file__).parent / "webui" / "static"


def create_app(workspace_root: Path | str,
               webui_dir: Path | str | None = None) -> FastAPI:
    store = WorkspaceStore(Path(workspace_root))
    app = FastAPI(title="ctm2", docs_url=None, redoc_url=None)
    app.state.store = store

    @app.exception_handler(ApiError)
    async def api_error_handler(_request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status,
                            content={"error": {"code": exc.code, "message": exc.message}})

    @app.exception_handler(UnknownIdError)
    async def unknown_id_handler(_request: Request, exc: UnknownIdError):
        return JSONResponse(status_code=404,
                            content={"error": {"code": "not_found", "message": str(exc)}})

    @app.exception_handler(BindingError)
    async def binding_handler(_request: Request, exc: BindingError):
        return JSONResponse(status_code=409,
                            content={"error": {"code": "binding_mismatch", "message": str(exc)}})

    @app.get("/api/catalogs", response_model=list[CatalogSummary])
    def list_catalogs():
        ws = store.workspace
        return [CatalogSummary(id=m.id, version=m.version, name=m.name,
                               domains=list(m.domain_ids()))
                for m in ws.catalogs.values()]

    @app.get("/api/catalogs/{catalog_id}")
    def get_catalog(catalog_id: str):
        return _json_bytes(serialize_model(store.workspace.catalog(catalog_id)))

    @app.get("/api/assessments", response_model=list[AssessmentSummary])
    def list_assessments():
        ws = store.workspace
        return [AssessmentSummary(
                    id=a.id, name=a.meta.name, institute=a.meta.institute,
                    sector=a.meta.sector, classification=a.meta.classification.value,
                    model_id=a.model_id, model_version=a.model_version,
                    modified=format_timestamp(a.modified))
                for a in ws.assessments.values()]

    @app.post("/api/assessments", status_code=201)
    def create_assessment(body: CreateAssessmentBody):
        from ctm2.cli import slugify_id

        try:
            classification = TestbedClassification(body.meta.classification)
        except ValueError:
            allowed = ", ".join(c.value for c in TestbedClassification)
            raise ApiError(400, "bad_classification",
                           f"classification must be one of: {allowed}") from None
        if not body.meta.name.strip():
            raise ApiError(400, "bad_name", "meta.name must be non-empty")

        created: list[Assessment] = []

        def apply(ws: Workspace) -> Workspace:
            catalog = ws.catalog(body.model_id)
            stamp = utcnow()
            assessment = Assessment(
                id=slugify_id(body.meta.name, set(ws.assessments) | set(ws.catalogs)),
                model_id=catalog.id, model_version=catalog.version,
                meta=TestbedMeta(name=body.meta.name, institute=body.meta.institute,
                                 sector=body.meta.sector, classification=classification,
                                 notes=body.meta.notes),
                responses={}, created=stamp, modified=stamp)
            updated = save_assessment(ws, assessment)
            created.append(updated.assessments[assessment.id])
            return updated

        store.mutate(apply)
        return _json_bytes(serialize_assessment(created[0]), status=201)

    @app.get("/api/assessments/{assessment_id}")
    def get_assessment(assessment_id: str):
        return _json_bytes(serialize_assessment(store.workspace.assessment(assessment_id)))

    @app.patch("/api/assessments/{assessment_id}/responses")
    def patch_responses(assessment_id: str, changes: dict[str, str],
                        request: Request):
        parsed = _states(changes)
        expected = request.headers.get("X-Expected-Modified")
        patched: list[Assessment] = []

        def apply(ws: Workspace) -> Workspace:
            assessment = ws.assessment(assessment_id)
            if expected is not None and expected != format_timestamp(assessment.modified):
                raise ApiError(409, "conflict",
                               f"assessment '{assessment_id}' was modified at "
                               f"{format_timestamp(assessment.modified)}, not {expected}")
            catalog = ws.model_for(assessment)
            unknown = set(parsed) - catalog.criterion_ids()
            if unknown:
                raise ApiError(400, "unknown_criterion",
                               "unknown criterion ids: " + ", ".join(sorted(unknown)))
            responses = dict(assessment.responses)
            responses.update(parsed)
            updated = save_assessment(
                ws, dataclasses.replace(assessment, responses=responses))
            patched.append(updated.assessments[assessment_id])
            return updated

        store.mutate(apply)
        return _json_bytes(serialize_assessment(patched[0]))

    @app.get("/api/assessments/{assessment_id}/score")
    def get_score(assessment_id: str, policy: str = "strict"):
        ws = store.workspace
        assessment = ws.assessment(assessment_id)
        card = score_assessment(ws.model_for(assessment), assessment, _policy(policy))
        return _json_bytes(scorecard_to_json(card))

    @app.get("/api/assessments/{assessment_id}/ring")
    def get_ring(assessment_id: str, policy: str = "strict",
                 format: str = "json", domain: str | None = None):
        ws = store.workspace
        assessment = ws.assessment(assessment_id)
        report = analysis.ring_analysis(ws.model_for(assessment), assessment,
                                        _policy(policy))
        if format == "svg":
            if domain is None:
                raise ApiError(400, "missing_domain",
                               "svg format requires the 'domain' query parameter")
            return Response(content=render.render_ring_svg(report, domain),
                            media_type="image/svg+xml")
        if format != "json":
            raise ApiError(400, "bad_format", f"unknown format '{format}'")
        return _json_bytes(analysis.ring_to_json(report))

    @app.get("/api/assessments/{assessment_id}/gap")
    def get_gap(assessment_id: str, policy: str = "strict"):
        ws = store.workspace
        assessment = ws.assessment(assessment_id)
        report = analysis.gap_analysis(ws.model_for(assessment), assessment,
                                       _policy(policy))
        return _json_bytes(analysis.gap_to_json(report))

    def _gather(ws: Workspace, ids: str) -> list[Assessment]:
        wanted = [part for part in ids.split(",") if part]
        if not wanted:
            raise ApiError(400, "bad_ids", "query parameter 'ids' must list assessment ids")
        return [ws.assessment(a) for a in wanted]

    @app.get("/api/radar")
    def get_radar(ids: str = "", policy: str = "strict", format: str = "json"):
        ws = store.workspace
        assessments = _gather(ws, ids)
        report = analysis.radar_analysis(ws.model_for(assessments[0]), assessments,
                                         _policy(policy))
        if format == "svg":
            return Response(content=render.render_radar_svg(report),
                            media_type="image/svg+xml")
        if format != "json":
            raise ApiError(400, "bad_format", f"unknown format '{format}'")
        return _json_bytes(analysis.radar_to_json(report))

    @app.get("/api/compare")
    def get_compare(ids: str = "", policy: str = "strict"):
        ws = store.workspace
        assessments = _gather(ws, ids)
        report = analysis.compare(ws.model_for(assessments[0]), assessments,
                                  _policy(policy))
        return _json_bytes(analysis.matrix_to_json(report))

    @app.post("/api/assessments/{assessment_id}/whatif")
    def post_whatif(assessment_id: str, changes: dict[str, str],
                    policy: str = "strict"):
        ws = store.workspace
        assessment = ws.assessment(assessment_id)
        catalog = ws.model_for(assessment)
        try:
            result = analysis.what_if(catalog, assessment, _policy(policy),
                                      _states(changes))
        except UnknownIdError as exc:
            raise ApiError(400, "unknown_criterion", str(exc)) from None
        return _json_bytes(analysis.whatif_to_json(result))

    static_dir = Path(webui_dir) if webui_dir is not None else default_webui_dir()
    if static_dir.is_dir() and (static_dir / "index.html").is_file():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="webui")
    else:
        @app.get("/", response_class=HTMLResponse)
        def index() -> str:
            return _FALLBACK_PAGE

    return app
