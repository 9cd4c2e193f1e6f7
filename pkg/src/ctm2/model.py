"""Maturity-model catalogs: types, parsing, validation, level profiles.

A catalog is a versioned set of domains; each domain introduces evaluation
criteria at MIL levels ``1..max_level``. Criterion ids follow the dotted
scheme ``<DOMAIN>.<level>.<ordinal>`` (e.g. ``ARCH.1.3``) so stored
responses survive catalog re-ordering. All types are immutable values;
share them freely across threads.

The interchange encoding is UTF-8 JSON with exactly the documented keys;
unknown keys are parse errors so typos in hand-edited catalogs surface
immediately instead of silently dropping criteria.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from ctm2.errors import CatalogParseError

_SEMVER_RE = re.compile(r"^\d+\.\d+\.\d+$")
_CRITERION_ID_RE = re.compile(r"^([A-Za-z][A-Za-z0-9_-]*)\.(\d+)\.(\d+)$")

DEFAULT_MAX_LEVEL = 3
RESERVED_LEVEL = 4


@dataclass(frozen=True)
class Criterion:
    """One evaluation criterion, introduced at a specific MIL level."""

    id: str
    text: str
    level: int
    refs: tuple[str, ...] = ()

    @property
    def domain_id(self) -> str:
        """Domain code embedded in the dotted id (``ARCH.1.3`` -> ``ARCH``)."""
        return self.id.split(".", 1)[0]


@dataclass(frozen=True)
class Domain:
    id: str
    name: str
    description: str
    criteria: tuple[Criterion, ...] = ()

    def criteria_at(self, level: int) -> tuple[Criterion, ...]:
        return tuple(c for c in self.criteria if c.level == level)


@dataclass(frozen=True)
class MaturityModel:
    id: str
    version: str
    name: str
    max_level: int = DEFAULT_MAX_LEVEL
    domains: tuple[Domain, ...] = ()

    def domain(self, domain_id: str) -> Domain:
        for d in self.domains:
            if d.id == domain_id:
                return d
        raise KeyError(domain_id)

    def domain_ids(self) -> tuple[str, ...]:
        return tuple(d.id for d in self.domains)

    def criteria(self) -> tuple[Criterion, ...]:
        return tuple(c for d in self.domains for c in d.criteria)

    def criterion_ids(self) -> frozenset[str]:
        return frozenset(c.id for d in self.domains for c in d.criteria)

    def criterion(self, criterion_id: str) -> Criterion:
        for d in self.domains:
            for c in d.criteria:
                if c.id == criterion_id:
                    return c
        raise KeyError(criterion_id)


@dataclass(frozen=True)
class LevelProfile:
    """Per-level criterion counts for one domain.

    ``cumulative[level]`` is the total number of criteria at levels up to
    and including ``level`` — the inner-ring numbers of the ring analysis.
    """

    domain_id: str
    introduced: dict[int, int] = field(default_factory=dict)
    cumulative: dict[int, int] = field(default_factory=dict)


@dataclass(frozen=True)
class Finding:
    severity: str  # "error" | "warning"
    location: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...] = ()

    @property
    def errors(self) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if f.severity == "error")

    @property
    def warnings(self) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if f.severity == "warning")

    @property
    def ok(self) -> bool:
        return not self.errors


# --- parsing -----------------------------------------------------------

def _require(obj: dict, key: str, kind: type, location: str):
    if key not in obj:
        raise CatalogParseError(f"missing required field '{key}'", location=location)
    value = obj[key]
    if kind is int and isinstance(value, bool):
        raise CatalogParseError(f"field '{key}' must be {kind.__name__}", location=location)
    if not isinstance(value, kind):
        raise CatalogParseError(
            f"field '{key}' must be {kind.__name__}, got {type(value).__name__}",
            location=location,
        )
    return value


def _reject_unknown(obj: dict, allowed: set[str], location: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        name = sorted(unknown)[0]
        raise CatalogParseError(f"unknown field '{name}'", location=location)


def _parse_criterion(obj, location: str) -> Criterion:
    if not isinstance(obj, dict):
        raise CatalogParseError("criterion must be an object", location=location)
    _reject_unknown(obj, {"id", "text", "level", "refs"}, location)
    cid = _require(obj, "id", str, location)
    text = _require(obj, "text", str, location)
    level = _require(obj, "level", int, location)
    refs = obj.get("refs", [])
    if not isinstance(refs, list) or any(not isinstance(r, str) for r in refs):
        raise CatalogParseError("field 'refs' must be a list of strings", location=location)
    return Criterion(id=cid, text=text, level=level, refs=tuple(refs))


def _parse_domain(obj, location: str) -> Domain:
    if not isinstance(obj, dict):
        raise CatalogParseError("domain must be an object", location=location)
    _reject_unknown(obj, {"id", "name", "description", "criteria"}, location)
    did = _require(obj, "id", str, location)
    name = _require(obj, "name", str, location)
    description = _require(obj, "description", str, location)
    raw = _require(obj, "criteria", list, location)
    criteria = tuple(
        _parse_criterion(c, f"{location}.criteria[{i}]") for i, c in enumerate(raw)
    )
    return Domain(id=did, name=name, description=description, criteria=criteria)


def parse_model(source: bytes | str) -> MaturityModel:
    """Parse catalog bytes into a MaturityModel.

    Only checks document shape (keys and value types). Semantic rules —
    id uniqueness, level ranges, ordinal contiguity — are the job of
    :func:`validate_model`.
    """
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    try:
        data = json.loads(source)
    except json.JSONDecodeError as exc:
        raise CatalogParseError(exc.msg, line=exc.lineno, column=exc.colno) from exc
    if not isinstance(data, dict):
        raise CatalogParseError("catalog document must be a JSON object", location="$")
    _reject_unknown(data, {"id", "version", "name", "max_level", "domains"}, "$")
    mid = _require(data, "id", str, "$")
    version = _require(data, "version", str, "$")
    name = _require(data, "name", str, "$")
    max_level = DEFAULT_MAX_LEVEL
    if "max_level" in data:
        max_level = _require(data, "max_level", int, "$")
    raw = _require(data, "domains", list, "$")
    domains = tuple(_parse_domain(d, f"$.domains[{i}]") for i, d in enumerate(raw))
    return MaturityModel(id=mid, version=version, name=name,
                         max_level=max_level, domains=domains)


def serialize_model(model: MaturityModel) -> bytes:
    """Canonical catalog encoding; ``parse_model`` inverts it exactly."""
    payload = {
        "id": model.id,
        "version": model.version,
        "name": model.name,
        "max_level": model.max_level,
        "domains": [
            {
                "id": d.id,
                "name": d.name,
                "description": d.description,
                "criteria": [
                    {"id": c.id, "text": c.text, "level": c.level, "refs": list(c.refs)}
                    for c in d.criteria
                ],
            }
            for d in model.domains
        ],
    }
    return (json.dumps(payload, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


# --- validation --------------------------------------------------------

RECONSTRUCTED_MARK = "[reconstructed]"


def validate_model(model: MaturityModel) -> ValidationReport:
    """Check every catalog invariant; findings are data, never raised.

    Errors cover identity, uniqueness, id scheme and level-range rules.
    Warnings flag empty (domain, level) pairs, use of the reserved level 4,
    duplicated criterion text within a domain, and placeholder criteria
    carrying the ``[reconstructed]`` marker.
    """
    findings: list[Finding] = []

    def error(location: str, message: str) -> None:
        findings.append(Finding("error", location, message))

    def warning(location: str, message: str) -> None:
        findings.append(Finding("warning", location, message))

    if not model.id:
        error("$.id", "model id must be non-empty")
    if not _SEMVER_RE.match(model.version):
        error("$.version", f"version '{model.version}' is not MAJOR.MINOR.PATCH")
    if not 1 <= model.max_level <= RESERVED_LEVEL:
        error("$.max_level", f"max_level must be in 1..{RESERVED_LEVEL}, got {model.max_level}")
    elif model.max_level == RESERVED_LEVEL:
        warning("$.max_level", "level 4 is reserved for future use")
    if not model.domains:
        error("$.domains", "catalog must define at least one domain")

    seen_domains: set[str] = set()
    seen_criteria: set[str] = set()
    reconstructed = 0

    for d in model.domains:
        loc = f"$.domains[{d.id}]"
        if not d.id:
            error(loc, "domain id must be non-empty")
        if d.id in seen_domains:
            error(loc, f"duplicate domain id '{d.id}'")
        seen_domains.add(d.id)
        if not d.criteria:
            error(loc, f"domain '{d.id}' has no criteria")

        texts_seen: set[str] = set()
        ordinals: dict[int, list[int]] = {}
        for c in d.criteria:
            cloc = f"{loc}.{c.id}"
            if c.id in seen_criteria:
                error(cloc, f"duplicate criterion id '{c.id}'")
            seen_criteria.add(c.id)
            m = _CRITERION_ID_RE.match(c.id)
            if not m:
                error(cloc, f"criterion id '{c.id}' does not match <DOMAIN>.<level>.<ordinal>")
            else:
                prefix, id_level, ordinal = m.group(1), int(m.group(2)), int(m.group(3))
                if prefix != d.id:
                    error(cloc, f"criterion id prefix '{prefix}' does not match domain '{d.id}'")
                if id_level != c.level:
                    error(cloc, f"level {id_level} embedded in id differs from level field {c.level}")
                if ordinal < 1:
                    error(cloc, "criterion ordinal must be >= 1")
                ordinals.setdefault(c.level, []).append(ordinal)
            if not 1 <= c.level <= model.max_level:
                error(cloc, f"criterion level {c.level} outside 1..{model.max_level}")
            elif c.level == RESERVED_LEVEL:
                warning(cloc, "criterion uses level 4, which is reserved for future use")
            if not c.text:
                error(cloc, "criterion text must be non-empty")
            if c.text in texts_seen:
                warning(cloc, f"criterion text duplicated within domain '{d.id}'")
            texts_seen.add(c.text)
            if RECONSTRUCTED_MARK in c.text:
                reconstructed += 1

        for level, seen in sorted(ordinals.items()):
            if sorted(seen) != list(range(1, len(seen) + 1)):
                error(f"{loc}.level{level}",
                      f"criterion ordinals at level {level} are not contiguous from 1")
        if 1 <= model.max_level <= RESERVED_LEVEL:
            for level in range(1, model.max_level + 1):
                if not any(c.level == level for c in d.criteria):
                    warning(f"{loc}.level{level}",
                            f"domain '{d.id}' introduces no criteria at level {level}")

    if reconstructed:
        warning("$", f"{reconstructed} criteria carry placeholder "
                     f"'{RECONSTRUCTED_MARK}' texts")

    return ValidationReport(findings=tuple(findings))


def level_profile(model: MaturityModel, domain_id: str) -> LevelProfile:
    """Introduced and cumulative criterion counts per level ``1..max_level``."""
    try:
        domain = model.domain(domain_id)
    except KeyError:
        from ctm2.errors import UnknownIdError
        raise UnknownIdError(f"unknown domain id '{domain_id}'") from None
    introduced: dict[int, int] = {}
    cumulative: dict[int, int] = {}
    running = 0
    for level in range(1, model.max_level + 1):
        count = sum(1 for c in domain.criteria if c.level == level)
        running += count
        introduced[level] = count
        cumulative[level] = running
    return LevelProfile(domain_id=domain_id, introduced=introduced, cumulative=cumulative)
