"""Workspace persistence: one JSON file per catalog and per assessment.

Layout under a workspace root::

    <root>/workspace.json            # {"format_version": 1}
    <root>/catalogs/<id>.json
    <root>/assessments/<id>.json
    <root>/reports/                  # export target

Filenames equal embedded ids and ids are filesystem-safe. Writes are
atomic (temp file in the target directory, then rename), so a crash
mid-save leaves the previous file intact. Workspace values are immutable
snapshots; saving returns a new snapshot. Concurrent readers of distinct
snapshots are safe, writers must be serialized externally (the HTTP
service holds one lock per workspace).
"""

from __future__ import annotations

import dataclasses
import json
import os
import re
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from ctm2 import analysis, render
from ctm2.errors import (
    AssessmentParseError,
    BindingError,
    CatalogParseError,
    ExportError,
    UnknownIdError,
    WorkspaceError,
)
from ctm2.model import MaturityModel, parse_model, serialize_model, validate_model
from ctm2.scoring import (
    Assessment,
    ImplementationState,
    Scorecard,
    TestbedClassification,
    TestbedMeta,
    format_timestamp,
    parse_timestamp,
    scorecard_to_json,
    utcnow,
)

FORMAT_VERSION = 1
_ID_RE = re.compile(r"^[a-z0-9-]{1,64}$")

MANIFEST_NAME = "workspace.json"
CATALOGS_DIR = "catalogs"
ASSESSMENTS_DIR = "assessments"
REPORTS_DIR = "reports"


def is_valid_id(value: str) -> bool:
    return bool(_ID_RE.match(value))


# --- assessment files --------------------------------------------------

_META_KEYS = {"name", "institute", "sector", "classification", "notes"}
_ASSESSMENT_KEYS = {"id", "model_id", "model_version", "meta", "responses",
                    "created", "modified", "fixture_note"}


def parse_assessment(source: bytes | str) -> Assessment:
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    try:
        data = json.loads(source)
    except json.JSONDecodeError as exc:
        raise AssessmentParseError(
            f"invalid assessment JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(data, dict):
        raise AssessmentParseError("assessment document must be a JSON object")
    unknown = set(data) - _ASSESSMENT_KEYS
    if unknown:
        raise AssessmentParseError(f"unknown field '{sorted(unknown)[0]}'")
    missing = {"id", "model_id", "model_version", "meta", "responses",
               "created", "modified"} - set(data)
    if missing:
        raise AssessmentParseError(f"missing required field '{sorted(missing)[0]}'")

    meta_data = data["meta"]
    if not isinstance(meta_data, dict):
        raise AssessmentParseError("field 'meta' must be an object")
    unknown = set(meta_data) - _META_KEYS
    if unknown:
        raise AssessmentParseError(f"unknown meta field '{sorted(unknown)[0]}'")
    try:
        classification = TestbedClassification(meta_data.get("classification", "hybrid"))
    except ValueError:
        allowed = ", ".join(c.value for c in TestbedClassification)
        raise AssessmentParseError(
            f"invalid classification '{meta_data.get('classification')}' "
            f"(allowed: {allowed})") from None
    if not meta_data.get("name"):
        raise AssessmentParseError("meta.name must be non-empty")
    meta = TestbedMeta(
        name=meta_data["name"],
        institute=meta_data.get("institute", ""),
        sector=meta_data.get("sector", ""),
        classification=classification,
        notes=meta_data.get("notes", ""),
    )

    raw = data["responses"]
    if not isinstance(raw, dict):
        raise AssessmentParseError("field 'responses' must be an object")
    responses: dict[str, ImplementationState] = {}
    for cid, state in raw.items():
        try:
            responses[cid] = ImplementationState(state)
        except ValueError:
            allowed = ", ".join(s.value for s in ImplementationState)
            raise AssessmentParseError(
                f"invalid state '{state}' for '{cid}' (allowed: {allowed})") from None

    try:
        created = parse_timestamp(data["created"])
        modified = parse_timestamp(data["modified"])
    except (TypeError, ValueError) as exc:
        raise AssessmentParseError(f"invalid timestamp: {exc}") from exc

    return Assessment(
        id=data["id"], model_id=data["model_id"],
        model_version=data["model_version"], meta=meta, responses=responses,
        created=created, modified=modified,
        fixture_note=data.get("fixture_note", ""),
    )


def serialize_assessment(assessment: Assessment) -> bytes:
    payload: dict = {
        "id": assessment.id,
        "model_id": assessment.model_id,
        "model_version": assessment.model_version,
        "meta": {
            "name": assessment.meta.name,
            "institute": assessment.meta.institute,
            "sector": assessment.meta.sector,
            "classification": assessment.meta.classification.value,
            "notes": assessment.meta.notes,
        },
        "responses": {cid: state.value
                      for cid, state in sorted(assessment.responses.items())},
        "created": format_timestamp(assessment.created),
        "modified": format_timestamp(assessment.modified),
    }
    if assessment.fixture_note:
        payload["fixture_note"] = assessment.fixture_note
    return (json.dumps(payload, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


# --- atomic IO ---------------------------------------------------------

def atomic_write_bytes(path: Path, data: bytes,
                       fault_hook: Callable[[], None] | None = None) -> None:
    """Write-temp-then-rename so readers never see a partial file.

    ``fault_hook`` runs between the temp write and the rename; tests inject
    a crash there to prove the previous file survives.
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        if fault_hook is not None:
            fault_hook()
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


# --- workspace ---------------------------------------------------------

@dataclass(frozen=True)
class Workspace:
    root: Path
    catalogs: dict[str, MaturityModel] = field(default_factory=dict)
    assessments: dict[str, Assessment] = field(default_factory=dict)
    format_version: int = FORMAT_VERSION
    warnings: tuple[str, ...] = ()

    def catalog_path(self, catalog_id: str) -> Path:
        return self.root / CATALOGS_DIR / f"{catalog_id}.json"

    def assessment_path(self, assessment_id: str) -> Path:
        return self.root / ASSESSMENTS_DIR / f"{assessment_id}.json"

    def reports_dir(self) -> Path:
        return self.root / REPORTS_DIR

    def model_for(self, assessment: Assessment) -> MaturityModel:
        model = self.catalogs.get(assessment.model_id)
        if model is None or model.version != assessment.model_version:
            raise BindingError(
                f"assessment '{assessment.id}' is bound to "
                f"{assessment.model_id}@{assessment.model_version}, "
                "which is not a loaded catalog")
        return model

    def assessment(self, assessment_id: str) -> Assessment:
        try:
            return self.assessments[assessment_id]
        except KeyError:
            raise UnknownIdError(f"unknown assessment id '{assessment_id}'") from None

    def catalog(self, catalog_id: str) -> MaturityModel:
        try:
            return self.catalogs[catalog_id]
        except KeyError:
            raise UnknownIdError(f"unknown catalog id '{catalog_id}'") from None


def _check_binding_against(catalogs: dict[str, MaturityModel],
                           assessment: Assessment, origin: str) -> None:
    model = catalogs.get(assessment.model_id)
    if model is None or model.version != assessment.model_version:
        raise WorkspaceError(
            f"{origin}: dangling model binding "
            f"{assessment.model_id}@{assessment.model_version}")
    stale = set(assessment.responses) - model.criterion_ids()
    if stale:
        raise WorkspaceError(
            f"{origin}: responses reference criteria missing from "
            f"'{model.id}': {', '.join(sorted(stale))}")


def load_workspace(root: Path | str) -> Workspace:
    """Load and cross-check every catalog and assessment under ``root``.

    Catalog validation errors abort the load; warnings are collected on
    the returned workspace. An empty or partially-populated directory is
    fine, a missing one is not.
    """
    root = Path(root)
    if not root.is_dir():
        raise WorkspaceError(f"workspace root '{root}' does not exist")

    manifest = root / MANIFEST_NAME
    if manifest.exists():
        try:
            meta = json.loads(manifest.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise WorkspaceError(f"{manifest}: invalid manifest: {exc.msg}") from exc
        version = meta.get("format_version")
        if version != FORMAT_VERSION:
            raise WorkspaceError(
                f"{manifest}: format_version {version!r} is not supported "
                f"(this build reads version {FORMAT_VERSION}; no migration is attempted)")

    warnings: list[str] = []
    catalogs: dict[str, MaturityModel] = {}
    catalogs_dir = root / CATALOGS_DIR
    if catalogs_dir.is_dir():
        for path in sorted(catalogs_dir.glob("*.json")):
            try:
                model = parse_model(path.read_bytes())
            except CatalogParseError as exc:
                raise WorkspaceError(f"{path}: {exc}") from exc
            if model.id != path.stem:
                raise WorkspaceError(
                    f"{path}: embedded id '{model.id}' does not match filename")
            if not is_valid_id(model.id):
                raise WorkspaceError(
                    f"{path}: catalog id '{model.id}' is not filesystem-safe")
            report = validate_model(model)
            if not report.ok:
                first = report.errors[0]
                raise WorkspaceError(
                    f"{path}: catalog is invalid "
                    f"({len(report.errors)} errors; first: {first.location}: {first.message})")
            warnings.extend(f"{model.id}: {f.location}: {f.message}"
                            for f in report.warnings)
            catalogs[model.id] = model

    assessments: dict[str, Assessment] = {}
    assessments_dir = root / ASSESSMENTS_DIR
    if assessments_dir.is_dir():
        for path in sorted(assessments_dir.glob("*.json")):
            try:
                assessment = parse_assessment(path.read_bytes())
            except AssessmentParseError as exc:
                raise WorkspaceError(f"{path}: {exc}") from exc
            if assessment.id != path.stem:
                raise WorkspaceError(
                    f"{path}: embedded id '{assessment.id}' does not match filename")
            if not is_valid_id(assessment.id):
                raise WorkspaceError(
                    f"{path}: assessment id '{assessment.id}' is not filesystem-safe")
            _check_binding_against(catalogs, assessment, str(path))
            assessments[assessment.id] = assessment

    return Workspace(root=root, catalogs=catalogs, assessments=assessments,
                     warnings=tuple(warnings))


def save_assessment(workspace: Workspace, assessment: Assessment,
                    fault_hook: Callable[[], None] | None = None) -> Workspace:
    """Persist one assessment atomically; returns the updated snapshot.

    The ``modified`` timestamp is refreshed, which is what distinguishes
    this from :func:`save_workspace` (verbatim persistence).
    """
    if not is_valid_id(assessment.id):
        raise WorkspaceError(f"assessment id '{assessment.id}' is not filesystem-safe")
    _check_binding_against(workspace.catalogs, assessment,
                           f"assessment '{assessment.id}'")
    stamped = dataclasses.replace(assessment, modified=utcnow())
    atomic_write_bytes(workspace.assessment_path(stamped.id),
                       serialize_assessment(stamped), fault_hook=fault_hook)
    updated = dict(workspace.assessments)
    updated[stamped.id] = stamped
    return dataclasses.replace(workspace, assessments=updated)


def save_workspace(workspace: Workspace, root: Path | str | None = None) -> Workspace:
    """Write every catalog and assessment verbatim (no timestamp bumps)."""
    target = Path(root) if root is not None else workspace.root
    target.mkdir(parents=True, exist_ok=True)
    atomic_write_bytes(
        target / MANIFEST_NAME,
        (json.dumps({"format_version": workspace.format_version}, indent=2)
         + "\n").encode("utf-8"))
    for model in workspace.catalogs.values():
        atomic_write_bytes(target / CATALOGS_DIR / f"{model.id}.json",
                           serialize_model(model))
    for assessment in workspace.assessments.values():
        atomic_write_bytes(target / ASSESSMENTS_DIR / f"{assessment.id}.json",
                           serialize_assessment(assessment))
    (target / REPORTS_DIR).mkdir(exist_ok=True)
    return dataclasses.replace(workspace, root=target)


# --- report export -----------------------------------------------------

Report = (analysis.RadarReport | analysis.RingReport | analysis.ComparisonMatrix
          | analysis.GapReport | analysis.WhatIfResult | Scorecard)


def report_to_json(report: Report) -> bytes:
    if isinstance(report, analysis.RadarReport):
        return analysis.radar_to_json(report)
    if isinstance(report, analysis.RingReport):
        return analysis.ring_to_json(report)
    if isinstance(report, analysis.ComparisonMatrix):
        return analysis.matrix_to_json(report)
    if isinstance(report, analysis.GapReport):
        return analysis.gap_to_json(report)
    if isinstance(report, analysis.WhatIfResult):
        return analysis.whatif_to_json(report)
    if isinstance(report, Scorecard):
        return scorecard_to_json(report)
    raise ExportError(f"cannot serialize {type(report).__name__} as JSON")


def export_report(report: Report, format: str, path: Path | str,
                  domain_id: str | None = None,
                  options: render.RenderOptions | None = None) -> None:
    """Write a report to ``path`` in the requested format.

    ``svg`` applies to radar and ring reports only, and a ring export needs
    the ``domain_id`` to draw. The written bytes equal the corresponding
    render/serialize output exactly.
    """
    path = Path(path)
    if format == "json":
        data = report_to_json(report)
    elif format == "markdown":
        if not isinstance(report, (Scorecard, analysis.ComparisonMatrix,
                                   analysis.GapReport)):
            raise ExportError(
                f"markdown export is not applicable to {type(report).__name__}")
        data = render.render_markdown(report).encode("utf-8")
    elif format == "svg":
        if isinstance(report, analysis.RadarReport):
            data = render.render_radar_svg(report, options)
        elif isinstance(report, analysis.RingReport):
            if domain_id is None:
                raise ExportError("ring svg export requires a domain id")
            data = render.render_ring_svg(report, domain_id, options)
        else:
            raise ExportError(
                f"svg export is not applicable to {type(report).__name__}")
    else:
        raise ExportError(f"unknown export format '{format}'")
    try:
        atomic_write_bytes(path, data)
    except OSError as exc:
        raise WorkspaceError(f"cannot write '{path}': {exc}") from exc
