"""Analysis products: radar overlay, ring detail, comparison matrix, gaps.

Radar and the comparison matrix aggregate many assessments; ring analysis
is per-testbed by construction (the report type binds exactly one
assessment, so combined ring reports cannot even be expressed). Gap
analysis lists the criteria blocking each domain from its next level, and
``what_if`` scores a hypothetical response overlay without touching the
stored assessment.

All operations are pure; reports are immutable values and every MIL they
carry equals the corresponding ``score_domain`` result.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from datetime import datetime

from ctm2.errors import ReportParseError, UnknownIdError
from ctm2.model import MaturityModel
from ctm2.scoring import (
    Assessment,
    ImplementationState,
    Scorecard,
    ScoringPolicy,
    check_binding,
    format_timestamp,
    parse_timestamp,
    score_assessment,
    scorecard_from_payload,
    scorecard_payload,
    utcnow,
)


@dataclass(frozen=True)
class RadarEntry:
    assessment_id: str
    name: str
    mils: tuple[int, ...]  # one per report domain, catalog order


@dataclass(frozen=True)
class RadarReport:
    model_id: str
    model_version: str
    policy: ScoringPolicy
    generated_at: datetime
    max_level: int
    domains: tuple[str, ...]
    entries: tuple[RadarEntry, ...]


@dataclass(frozen=True)
class StateCounts:
    full: int = 0
    partial: int = 0
    none: int = 0
    not_assessed: int = 0

    def total(self) -> int:
        return self.full + self.partial + self.none + self.not_assessed


@dataclass(frozen=True)
class RingLevel:
    level: int
    introduced: int
    cumulative_total: int
    introduced_states: StateCounts
    cumulative_states: StateCounts


@dataclass(frozen=True)
class RingDomain:
    domain_id: str
    achieved_mil: int
    levels: tuple[RingLevel, ...]


@dataclass(frozen=True)
class RingReport:
    model_id: str
    model_version: str
    policy: ScoringPolicy
    generated_at: datetime
    assessment_id: str
    max_level: int
    domains: tuple[RingDomain, ...]

    def domain(self, domain_id: str) -> RingDomain:
        for d in self.domains:
            if d.domain_id == domain_id:
                return d
        raise KeyError(domain_id)


@dataclass(frozen=True)
class MatrixRow:
    assessment_id: str
    name: str
    institute: str
    sector: str
    mils: tuple[int, ...]


@dataclass(frozen=True)
class ComparisonMatrix:
    model_id: str
    model_version: str
    policy: ScoringPolicy
    generated_at: datetime
    domains: tuple[str, ...]
    rows: tuple[MatrixRow, ...]


@dataclass(frozen=True)
class BlockingCriterion:
    criterion_id: str
    text: str
    state: ImplementationState


@dataclass(frozen=True)
class GapDomain:
    domain_id: str
    achieved_mil: int
    target_level: int | None  # absent at the MIL ceiling
    blocking: tuple[BlockingCriterion, ...] = ()


@dataclass(frozen=True)
class GapReport:
    model_id: str
    model_version: str
    policy: ScoringPolicy
    generated_at: datetime
    assessment_id: str
    domains: tuple[GapDomain, ...]


@dataclass(frozen=True)
class WhatIfResult:
    before: Scorecard
    after: Scorecard
    deltas: dict[str, int] = field(default_factory=dict)


def _stamp(generated_at: datetime | None) -> datetime:
    return generated_at if generated_at is not None else utcnow()


def radar_analysis(model: MaturityModel, assessments: list[Assessment],
                   policy: ScoringPolicy = ScoringPolicy.STRICT,
                   generated_at: datetime | None = None) -> RadarReport:
    """Per-domain MILs for each assessment, entries in input order."""
    if not assessments:
        raise ValueError("radar analysis requires at least one assessment")
    entries = []
    for a in assessments:
        card = score_assessment(model, a, policy)
        entries.append(RadarEntry(
            assessment_id=a.id, name=a.meta.name,
            mils=tuple(d.achieved_mil for d in card.domains)))
    return RadarReport(model_id=model.id, model_version=model.version,
                       policy=policy, generated_at=_stamp(generated_at),
                       max_level=model.max_level, domains=model.domain_ids(),
                       entries=tuple(entries))


def ring_analysis(model: MaturityModel, assessment: Assessment,
                  policy: ScoringPolicy = ScoringPolicy.STRICT,
                  generated_at: datetime | None = None) -> RingReport:
    """Criterion-level detail for a single testbed.

    Inner numbers (``cumulative_total``) are catalog structure only; outer
    numbers count implementation states, both per introduction level and
    cumulatively across levels up to each MIL.
    """
    card = score_assessment(model, assessment, policy)
    ring_domains = []
    for domain in model.domains:
        score = card.domain(domain.id)
        levels = []
        cum_total = 0
        cum = {"full": 0, "partial": 0, "none": 0, "not_assessed": 0}
        for level in range(1, model.max_level + 1):
            tally = score.per_level[level]
            cum_total += tally.introduced
            cum["full"] += tally.full
            cum["partial"] += tally.partial
            cum["none"] += tally.none
            cum["not_assessed"] += tally.not_assessed
            levels.append(RingLevel(
                level=level,
                introduced=tally.introduced,
                cumulative_total=cum_total,
                introduced_states=StateCounts(
                    full=tally.full, partial=tally.partial,
                    none=tally.none, not_assessed=tally.not_assessed),
                cumulative_states=StateCounts(**cum),
            ))
        ring_domains.append(RingDomain(domain_id=domain.id,
                                       achieved_mil=score.achieved_mil,
                                       levels=tuple(levels)))
    return RingReport(model_id=model.id, model_version=model.version,
                      policy=policy, generated_at=_stamp(generated_at),
                      assessment_id=assessment.id, max_level=model.max_level,
                      domains=tuple(ring_domains))


def compare(model: MaturityModel, assessments: list[Assessment],
            policy: ScoringPolicy = ScoringPolicy.STRICT,
            generated_at: datetime | None = None) -> ComparisonMatrix:
    """Testbeds as rows, domains as columns, achieved MILs as cells."""
    if not assessments:
        raise ValueError("comparison requires at least one assessment")
    rows = []
    for a in assessments:
        card = score_assessment(model, a, policy)
        rows.append(MatrixRow(
            assessment_id=a.id, name=a.meta.name, institute=a.meta.institute,
            sector=a.meta.sector,
            mils=tuple(d.achieved_mil for d in card.domains)))
    return ComparisonMatrix(model_id=model.id, model_version=model.version,
                            policy=policy, generated_at=_stamp(generated_at),
                            domains=model.domain_ids(), rows=tuple(rows))


def gap_analysis(model: MaturityModel, assessment: Assessment,
                 policy: ScoringPolicy = ScoringPolicy.STRICT,
                 generated_at: datetime | None = None) -> GapReport:
    """Blocking criteria per domain, targeting one level above the achieved MIL."""
    card = score_assessment(model, assessment, policy)
    gap_domains = []
    for domain in model.domains:
        score = card.domain(domain.id)
        if score.achieved_mil >= model.max_level:
            gap_domains.append(GapDomain(domain_id=domain.id,
                                         achieved_mil=score.achieved_mil,
                                         target_level=None, blocking=()))
            continue
        target = score.achieved_mil + 1
        blocking = tuple(
            BlockingCriterion(criterion_id=c.id, text=c.text,
                              state=assessment.state_of(c.id))
            for c in domain.criteria
            if c.level <= target and not policy.satisfies(assessment.state_of(c.id))
        )
        gap_domains.append(GapDomain(domain_id=domain.id,
                                     achieved_mil=score.achieved_mil,
                                     target_level=target, blocking=blocking))
    return GapReport(model_id=model.id, model_version=model.version,
                     policy=policy, generated_at=_stamp(generated_at),
                     assessment_id=assessment.id, domains=tuple(gap_domains))


def what_if(model: MaturityModel, assessment: Assessment,
            policy: ScoringPolicy,
            changes: dict[str, ImplementationState]) -> WhatIfResult:
    """Score the assessment with ``changes`` overlaid; the input stays as-is."""
    known = model.criterion_ids()
    unknown = set(changes) - known
    if unknown:
        raise UnknownIdError("unknown criterion ids in change set: "
                             + ", ".join(sorted(unknown)))
    before = score_assessment(model, assessment, policy)
    overlaid = dict(assessment.responses)
    overlaid.update(changes)
    after = score_assessment(
        model, dataclasses.replace(assessment, responses=overlaid), policy)
    deltas = {
        b.domain_id: a.achieved_mil - b.achieved_mil
        for b, a in zip(before.domains, after.domains)
    }
    return WhatIfResult(before=before, after=after, deltas=deltas)


# --- report JSON -------------------------------------------------------
#
# Every report serializes to UTF-8 JSON mirroring its fields and carrying
# the model binding, the policy and a generation timestamp. The *_from_json
# functions invert the corresponding *_to_json exactly.

def _dump(payload: dict) -> bytes:
    return (json.dumps(payload, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def _load(source: bytes | str) -> dict:
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    try:
        data = json.loads(source)
    except json.JSONDecodeError as exc:
        raise ReportParseError(f"invalid report JSON: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ReportParseError("report document must be a JSON object")
    return data


def _counts_payload(c: StateCounts) -> dict:
    return {"full": c.full, "partial": c.partial, "none": c.none,
            "not_assessed": c.not_assessed}


def _counts_from(data: dict) -> StateCounts:
    return StateCounts(full=data["full"], partial=data["partial"],
                       none=data["none"], not_assessed=data["not_assessed"])


def radar_payload(report: RadarReport) -> dict:
    return {
        "model_id": report.model_id,
        "model_version": report.model_version,
        "policy": report.policy.value,
        "generated_at": format_timestamp(report.generated_at),
        "max_level": report.max_level,
        "domains": list(report.domains),
        "entries": [
            {"assessment_id": e.assessment_id, "name": e.name, "mils": list(e.mils)}
            for e in report.entries
        ],
    }


def radar_to_json(report: RadarReport) -> bytes:
    return _dump(radar_payload(report))


def radar_from_json(source: bytes | str) -> RadarReport:
    data = _load(source)
    try:
        return RadarReport(
            model_id=data["model_id"], model_version=data["model_version"],
            policy=ScoringPolicy(data["policy"]),
            generated_at=parse_timestamp(data["generated_at"]),
            max_level=data["max_level"], domains=tuple(data["domains"]),
            entries=tuple(
                RadarEntry(assessment_id=e["assessment_id"], name=e["name"],
                           mils=tuple(e["mils"]))
                for e in data["entries"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ReportParseError(f"malformed radar report: {exc}") from exc


def ring_payload(report: RingReport) -> dict:
    return {
        "model_id": report.model_id,
        "model_version": report.model_version,
        "policy": report.policy.value,
        "generated_at": format_timestamp(report.generated_at),
        "assessment_id": report.assessment_id,
        "max_level": report.max_level,
        "domains": [
            {
                "domain_id": d.domain_id,
                "achieved_mil": d.achieved_mil,
                "levels": [
                    {
                        "level": lv.level,
                        "introduced": lv.introduced,
                        "cumulative_total": lv.cumulative_total,
                        "introduced_states": _counts_payload(lv.introduced_states),
                        "cumulative_states": _counts_payload(lv.cumulative_states),
                    }
                    for lv in d.levels
                ],
            }
            for d in report.domains
        ],
    }


def ring_to_json(report: RingReport) -> bytes:
    return _dump(ring_payload(report))


def ring_from_json(source: bytes | str) -> RingReport:
    data = _load(source)
    try:
        return RingReport(
            model_id=data["model_id"], model_version=data["model_version"],
            policy=ScoringPolicy(data["policy"]),
            generated_at=parse_timestamp(data["generated_at"]),
            assessment_id=data["assessment_id"], max_level=data["max_level"],
            domains=tuple(
                RingDomain(
                    domain_id=d["domain_id"], achieved_mil=d["achieved_mil"],
                    levels=tuple(
                        RingLevel(
                            level=lv["level"], introduced=lv["introduced"],
                            cumulative_total=lv["cumulative_total"],
                            introduced_states=_counts_from(lv["introduced_states"]),
                            cumulative_states=_counts_from(lv["cumulative_states"]),
                        )
                        for lv in d["levels"]),
                )
                for d in data["domains"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ReportParseError(f"malformed ring report: {exc}") from exc


def matrix_payload(report: ComparisonMatrix) -> dict:
    return {
        "model_id": report.model_id,
        "model_version": report.model_version,
        "policy": report.policy.value,
        "generated_at": format_timestamp(report.generated_at),
        "domains": list(report.domains),
        "rows": [
            {"assessment_id": r.assessment_id, "name": r.name,
             "institute": r.institute, "sector": r.sector, "mils": list(r.mils)}
            for r in report.rows
        ],
    }


def matrix_to_json(report: ComparisonMatrix) -> bytes:
    return _dump(matrix_payload(report))


def matrix_from_json(source: bytes | str) -> ComparisonMatrix:
    data = _load(source)
    try:
        return ComparisonMatrix(
            model_id=data["model_id"], model_version=data["model_version"],
            policy=ScoringPolicy(data["policy"]),
            generated_at=parse_timestamp(data["generated_at"]),
            domains=tuple(data["domains"]),
            rows=tuple(
                MatrixRow(assessment_id=r["assessment_id"], name=r["name"],
                          institute=r["institute"], sector=r["sector"],
                          mils=tuple(r["mils"]))
                for r in data["rows"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ReportParseError(f"malformed comparison matrix: {exc}") from exc


def gap_payload(report: GapReport) -> dict:
    return {
        "model_id": report.model_id,
        "model_version": report.model_version,
        "policy": report.policy.value,
        "generated_at": format_timestamp(report.generated_at),
        "assessment_id": report.assessment_id,
        "domains": [
            {
                "domain_id": d.domain_id,
                "achieved_mil": d.achieved_mil,
                "target_level": d.target_level,
                "blocking": [
                    {"criterion_id": b.criterion_id, "text": b.text,
                     "state": b.state.value}
                    for b in d.blocking
                ],
            }
            for d in report.domains
        ],
    }


def gap_to_json(report: GapReport) -> bytes:
    return _dump(gap_payload(report))


def gap_from_json(source: bytes | str) -> GapReport:
    data = _load(source)
    try:
        return GapReport(
            model_id=data["model_id"], model_version=data["model_version"],
            policy=ScoringPolicy(data["policy"]),
            generated_at=parse_timestamp(data["generated_at"]),
            assessment_id=data["assessment_id"],
            domains=tuple(
                GapDomain(
                    domain_id=d["domain_id"], achieved_mil=d["achieved_mil"],
                    target_level=d["target_level"],
                    blocking=tuple(
                        BlockingCriterion(criterion_id=b["criterion_id"],
                                          text=b["text"],
                                          state=ImplementationState(b["state"]))
                        for b in d["blocking"]),
                )
                for d in data["domains"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ReportParseError(f"malformed gap report: {exc}") from exc


def whatif_payload(result: WhatIfResult) -> dict:
    return {
        "before": scorecard_payload(result.before),
        "after": scorecard_payload(result.after),
        "deltas": dict(result.deltas),
    }


def whatif_to_json(result: WhatIfResult) -> bytes:
    return _dump(whatif_payload(result))


def whatif_from_json(source: bytes | str) -> WhatIfResult:
    data = _load(source)
    try:
        return WhatIfResult(before=scorecard_from_payload(data["before"]),
                            after=scorecard_from_payload(data["after"]),
                            deltas={k: int(v) for k, v in data["deltas"].items()})
    except (KeyError, TypeError, ValueError) as exc:
        raise ReportParseError(f"malformed what-if result: {exc}") from exc
