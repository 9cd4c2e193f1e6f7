"""``ctm2`` command line: batch assessment workflows plus a ``serve`` mode.

One binary, subcommands ``model``, ``assess``, ``set``, ``score``,
``radar``, ``ring``, ``gap``, ``compare``, ``serve``. Machine-readable
payloads go to stdout only (JSON output is byte-identical to the library
serializers); diagnostics go to stderr. Exit codes: 0 success, 1
validation errors, 2 usage errors, 3 I/O errors.
"""

from __future__ import annotations

import dataclasses
import re
import socket
import sys
from pathlib import Path

import click

from ctm2 import analysis, render
from ctm2.errors import (
    AssessmentParseError,
    BindingError,
    CatalogParseError,
    Ctm2Error,
    ExportError,
    TargetRangeError,
    UnknownIdError,
    WorkspaceError,
)
from ctm2.model import parse_model, validate_model
from ctm2.scoring import (
    Assessment,
    ImplementationState,
    ScoringPolicy,
    TestbedClassification,
    TestbedMeta,
    score_assessment,
    score_domain,
    scorecard_to_json,
    utcnow,
)
from ctm2.workspace import (
    Workspace,
    atomic_write_bytes,
    is_valid_id,
    load_workspace,
    save_assessment,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_IO = 3

_workspace_option = click.option(
    "--workspace", "workspace_root", envvar="CTM2_WORKSPACE", default=".",
    show_default=True, metavar="PATH", help="Workspace root directory.")
_policy_option = click.option(
    "--policy", type=click.Choice(["strict", "lenient"]), default="strict",
    show_default=True, help="Satisfaction policy for scoring.")


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load(workspace_root: str) -> Workspace:
    root = Path(workspace_root)
    if not root.is_dir():
        _fail(EXIT_IO, f"workspace root '{root}' does not exist")
    try:
        return load_workspace(root)
    except WorkspaceError as exc:
        _fail(EXIT_VALIDATION, str(exc))
    raise AssertionError("unreachable")


def _emit(data: bytes, out: str | None) -> None:
    if out is None:
        click.echo(data, nl=False)
        return
    try:
        atomic_write_bytes(Path(out), data)
    except OSError as exc:
        _fail(EXIT_IO, f"cannot write '{out}': {exc}")


def _run(fn):
    """Execute a command body with library errors mapped to exit codes."""
    try:
        fn()
    except (UnknownIdError, BindingError, TargetRangeError, CatalogParseError,
            AssessmentParseError, WorkspaceError) as exc:
        _fail(EXIT_VALIDATION, str(exc))
    except ExportError as exc:
        _fail(EXIT_USAGE, str(exc))
    except Ctm2Error as exc:
        _fail(EXIT_VALIDATION, str(exc))
    except OSError as exc:
        _fail(EXIT_IO, str(exc))


def slugify_id(name: str, taken: set[str]) -> str:
    base = re.sub(r"-+", "-", re.sub(r"[^a-z0-9-]", "-", name.lower())).strip("-")
    base = base[:56] or "assessment"
    candidate = base
    suffix = 2
    while candidate in taken or not is_valid_id(candidate):
        candidate = f"{base}-{suffix}"
        suffix += 1
    return candidate


@click.group()
@click.version_option(package_name="ctm2")
def main() -> None:
    """ICS-CTM2 testbed maturity assessment."""


@main.group()
def model() -> None:
    """Catalog operations."""


@model.command("validate")
@click.argument("catalog_path", metavar="CATALOG")
def model_validate(catalog_path: str) -> None:
    """Validate a catalog file; findings print one per line."""
    path = Path(catalog_path)
    if not path.is_file():
        _fail(EXIT_IO, f"no such file: {path}")
    try:
        catalog = parse_model(path.read_bytes())
    except CatalogParseError as exc:
        _fail(EXIT_VALIDATION, f"{path}: {exc}")
        return
    report = validate_model(catalog)
    for finding in report.findings:
        click.echo(f"{finding.severity}: {finding.location}: {finding.message}")
    sys.exit(EXIT_OK if report.ok else EXIT_VALIDATION)


@main.command()
@_workspace_option
@click.option("--model", "model_id", required=True, help="Catalog id to bind against.")
@click.option("--name", required=True, help="Testbed name.")
@click.option("--institute", default="", help="Operating institute.")
@click.option("--sector", default="", help="Industrial sector.")
@click.option("--classification",
              type=click.Choice([c.value for c in TestbedClassification]),
              default="hybrid", show_default=True)
@click.option("--notes", default="")
def assess(workspace_root: str, model_id: str, name: str, institute: str,
           sector: str, classification: str, notes: str) -> None:
    """Create an empty assessment (all criteria not assessed); prints its id."""
    ws = _load(workspace_root)

    def body() -> None:
        catalog = ws.catalog(model_id)
        new_id = slugify_id(name, set(ws.assessments) | set(ws.catalogs))
        stamp = utcnow()
        assessment = Assessment(
            id=new_id, model_id=catalog.id, model_version=catalog.version,
            meta=TestbedMeta(name=name, institute=institute, sector=sector,
                             classification=TestbedClassification(classification),
                             notes=notes),
            responses={}, created=stamp, modified=stamp)
        save_assessment(ws, assessment)
        click.echo(new_id)

    _run(body)


@main.command("set")
@_workspace_option
@_policy_option
@click.argument("assessment_id", metavar="ASSESSMENT")
@click.argument("criterion_id", metavar="CRITERION")
@click.argument("state", type=click.Choice([s.value for s in ImplementationState]))
def set_state(workspace_root: str, policy: str, assessment_id: str,
              criterion_id: str, state: str) -> None:
    """Record one response and print the domain's new achieved MIL."""
    ws = _load(workspace_root)

    def body() -> None:
        assessment = ws.assessment(assessment_id)
        catalog = ws.model_for(assessment)
        try:
            criterion = catalog.criterion(criterion_id)
        except KeyError:
            raise UnknownIdError(
                f"unknown criterion id '{criterion_id}' in model '{catalog.id}'") from None
        responses = dict(assessment.responses)
        responses[criterion_id] = ImplementationState(state)
        updated = dataclasses.replace(assessment, responses=responses)
        save_assessment(ws, updated)
        chosen = ScoringPolicy(policy)
        score = score_domain(catalog, criterion.domain_id, responses, chosen)
        click.echo(f"policy: {chosen.value}", err=True)
        click.echo(f"{criterion.domain_id}: MIL {score.achieved_mil}")

    _run(body)


@main.command()
@_workspace_option
@_policy_option
@click.option("--format", "fmt", type=click.Choice(["json", "markdown"]),
              default="json", show_default=True)
@click.option("--out", default=None, metavar="PATH", help="Write to file instead of stdout.")
@click.argument("assessment_id", metavar="ASSESSMENT")
def score(workspace_root: str, policy: str, fmt: str, out: str | None,
          assessment_id: str) -> None:
    """Score an assessment; JSON matches the library serialization exactly."""
    ws = _load(workspace_root)

    def body() -> None:
        assessment = ws.assessment(assessment_id)
        catalog = ws.model_for(assessment)
        card = score_assessment(catalog, assessment, ScoringPolicy(policy))
        if fmt == "json":
            data = scorecard_to_json(card)
        else:
            data = render.render_markdown(card).encode("utf-8")
        _emit(data, out)

    _run(body)


@main.command()
@_workspace_option
@_policy_option
@click.option("--format", "fmt", type=click.Choice(["json", "svg"]),
              default="json", show_default=True)
@click.option("--out", default=None, metavar="PATH")
@click.argument("assessment_ids", metavar="ASSESSMENT...", nargs=-1, required=True)
def radar(workspace_root: str, policy: str, fmt: str, out: str | None,
          assessment_ids: tuple[str, ...]) -> None:
    """Radar analysis over one or more assessments."""
    ws = _load(workspace_root)

    def body() -> None:
        assessments = [ws.assessment(a) for a in assessment_ids]
        catalog = ws.model_for(assessments[0])
        report = analysis.radar_analysis(catalog, assessments, ScoringPolicy(policy))
        if fmt == "json":
            data = analysis.radar_to_json(report)
        else:
            data = render.render_radar_svg(report)
        _emit(data, out)

    _run(body)


@main.command()
@_workspace_option
@_policy_option
@click.option("--format", "fmt", type=click.Choice(["json", "svg"]),
              default="json", show_default=True)
@click.option("--domain", "domain_id", default=None,
              help="Domain to draw (required for --format svg).")
@click.option("--out", default=None, metavar="PATH")
@click.argument("assessment_ids", metavar="ASSESSMENT", nargs=-1, required=True)
def ring(workspace_root: str, policy: str, fmt: str, domain_id: str | None,
         out: str | None, assessment_ids: tuple[str, ...]) -> None:
    """Ring analysis for exactly one assessment."""
    if len(assessment_ids) != 1:
        _fail(EXIT_USAGE, "ring analysis is per-testbed")
    ws = _load(workspace_root)

    def body() -> None:
        assessment = ws.assessment(assessment_ids[0])
        catalog = ws.model_for(assessment)
        report = analysis.ring_analysis(catalog, assessment, ScoringPolicy(policy))
        if fmt == "json":
            data = analysis.ring_to_json(report)
        else:
            if domain_id is None:
                raise ExportError("--format svg requires --domain")
            data = render.render_ring_svg(report, domain_id)
        _emit(data, out)

    _run(body)


@main.command()
@_workspace_option
@_policy_option
@click.option("--format", "fmt", type=click.Choice(["json", "markdown"]),
              default="json", show_default=True)
@click.option("--out", default=None, metavar="PATH")
@click.argument("assessment_id", metavar="ASSESSMENT")
def gap(workspace_root: str, policy: str, fmt: str, out: str | None,
        assessment_id: str) -> None:
    """Blocking criteria per domain, one level above the achieved MIL."""
    ws = _load(workspace_root)

    def body() -> None:
        assessment = ws.assessment(assessment_id)
        catalog = ws.model_for(assessment)
        report = analysis.gap_analysis(catalog, assessment, ScoringPolicy(policy))
        if fmt == "json":
            data = analysis.gap_to_json(report)
        else:
            data = render.render_markdown(report).encode("utf-8")
        _emit(data, out)

    _run(body)


@main.command()
@_workspace_option
@_policy_option
@click.option("--format", "fmt", type=click.Choice(["json", "markdown"]),
              default="json", show_default=True)
@click.option("--out", default=None, metavar="PATH")
@click.argument("assessment_ids", metavar="ASSESSMENT...", nargs=-1, required=True)
def compare(workspace_root: str, policy: str, fmt: str, out: str | None,
            assessment_ids: tuple[str, ...]) -> None:
    """Comparison matrix: testbeds as rows, domains as columns."""
    ws = _load(workspace_root)

    def body() -> None:
        assessments = [ws.assessment(a) for a in assessment_ids]
        catalog = ws.model_for(assessments[0])
        report = analysis.compare(catalog, assessments, ScoringPolicy(policy))
        if fmt == "json":
            data = analysis.matrix_to_json(report)
        else:
            data = render.render_markdown(report).encode("utf-8")
        _emit(data, out)

    _run(body)


@main.command()
@_workspace_option
@click.option("--port", default=8642, show_default=True, type=int)
@click.option("--bind", default="127.0.0.1", show_default=True,
              help="Interface to bind (loopback only by default).")
def serve(workspace_root: str, port: int, bind: str) -> None:
    """Serve the HTTP API and the self-evaluation UI."""
    import uvicorn

    from ctm2.api import create_app

    root = Path(workspace_root)
    if not root.is_dir():
        _fail(EXIT_IO, f"workspace root '{root}' does not exist")
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((bind, port))
    except OSError as exc:
        probe.close()
        _fail(EXIT_IO, f"cannot bind {bind}:{port}: {exc}")
    finally:
        probe.close()

    def body() -> None:
        app = create_app(root)
        click.echo(f"serving workspace '{root}' on http://{bind}:{port}/", err=True)
        uvicorn.run(app, host=bind, port=port, log_level="warning")

    _run(body)


if __name__ == "__main__":
    main()
