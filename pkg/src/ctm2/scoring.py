"""MIL scoring: turns assessment responses into per-domain maturity ratings.

The rating rule is cumulative: a domain earns MIL ``m`` only when every
criterion introduced at level ``m`` *and every lower level* is satisfied.
A level that introduces no criteria is vacuously satisfied and can never
block. MIL0 is the unconditional floor, so ``achieved_mil`` is always
defined.

Whether a partially implemented criterion counts is a policy knob:
``ScoringPolicy.STRICT`` (the default) credits only fully implemented
criteria, ``ScoringPolicy.LENIENT`` also credits partial ones. Criteria
without a response are treated as not assessed and never earn credit under
either policy; they only add a scorecard warning so an in-progress
questionnaire cannot inflate maturity.

Everything here is a pure function over immutable inputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum

from ctm2.errors import BindingError, TargetRangeError, UnknownIdError
from ctm2.model import MaturityModel


class ImplementationState(str, Enum):
    FULL = "full"
    PARTIAL = "partial"
    NONE = "none"
    NOT_ASSESSED = "not_assessed"


# Upgrade order: none = not_assessed < partial < full.
_STATE_RANK = {
    ImplementationState.NOT_ASSESSED: 0,
    ImplementationState.NONE: 0,
    ImplementationState.PARTIAL: 1,
    ImplementationState.FULL: 2,
}


def state_rank(state: ImplementationState) -> int:
    return _STATE_RANK[state]


class ScoringPolicy(str, Enum):
    STRICT = "strict"
    LENIENT = "lenient"

    def satisfies(self, state: ImplementationState) -> bool:
        if state is ImplementationState.FULL:
            return True
        return self is ScoringPolicy.LENIENT and state is ImplementationState.PARTIAL


class TestbedClassification(str, Enum):
    PHYSICAL = "physical"
    SIMULATION = "simulation"
    VIRTUAL = "virtual"
    HYBRID = "hybrid"


@dataclass(frozen=True)
class TestbedMeta:
    name: str
    institute: str = ""
    sector: str = ""
    classification: TestbedClassification = TestbedClassification.HYBRID
    notes: str = ""


def utcnow() -> datetime:
    """Current UTC time at second resolution (the interchange precision)."""
    return datetime.now(timezone.utc).replace(microsecond=0)


def format_timestamp(value: datetime) -> str:
    """ISO-8601 UTC with ``Z`` suffix; sub-second precision is dropped."""
    return value.astimezone(timezone.utc).replace(microsecond=0).strftime(
        "%Y-%m-%dT%H:%M:%SZ")


def parse_timestamp(value: str) -> datetime:
    return datetime.strptime(value, "%Y-%m-%dT%H:%M:%SZ").replace(
        tzinfo=timezone.utc)


@dataclass(frozen=True)
class Assessment:
    """One testbed's evaluation against a specific catalog version.

    ``responses`` maps criterion id to implementation state; criteria
    absent from the map count as not assessed. ``fixture_note`` is free
    text carried by bundled demonstration fixtures stating which of their
    values are anchored and which are placeholders.
    """

    id: str
    model_id: str
    model_version: str
    meta: TestbedMeta
    responses: dict[str, ImplementationState] = field(default_factory=dict)
    created: datetime = field(default_factory=utcnow)
    modified: datetime = field(default_factory=utcnow)
    fixture_note: str = ""

    def state_of(self, criterion_id: str) -> ImplementationState:
        return self.responses.get(criterion_id, ImplementationState.NOT_ASSESSED)


@dataclass(frozen=True)
class LevelTally:
    introduced: int = 0
    satisfied: int = 0
    full: int = 0
    partial: int = 0
    none: int = 0
    not_assessed: int = 0


@dataclass(frozen=True)
class DomainScore:
    domain_id: str
    achieved_mil: int
    per_level: dict[int, LevelTally]
    blocking_level: int | None = None


@dataclass(frozen=True)
class Scorecard:
    assessment_id: str
    policy: ScoringPolicy
    domains: tuple[DomainScore, ...]
    warnings: tuple[str, ...] = ()

    def domain(self, domain_id: str) -> DomainScore:
        for d in self.domains:
            if d.domain_id == domain_id:
                return d
        raise KeyError(domain_id)


def _check_response_keys(model: MaturityModel,
                         responses: dict[str, ImplementationState]) -> None:
    # Reject, do not ignore: a stray key means the responses belong to a
    # different or edited catalog.
    unknown = set(responses) - model.criterion_ids()
    if unknown:
        raise UnknownIdError(
            f"response keys not present in model '{model.id}': "
            + ", ".join(sorted(unknown))
        )


def score_domain(model: MaturityModel, domain_id: str,
                 responses: dict[str, ImplementationState],
                 policy: ScoringPolicy = ScoringPolicy.STRICT) -> DomainScore:
    """Score one domain: achieved MIL plus a per-level satisfaction tally.

    Deterministic and independent of response-map iteration order. Raises
    ``UnknownIdError`` for a missing domain or for response keys that do
    not belong to the model.
    """
    try:
        domain = model.domain(domain_id)
    except KeyError:
        raise UnknownIdError(f"unknown domain id '{domain_id}'") from None
    _check_response_keys(model, responses)

    per_level: dict[int, LevelTally] = {}
    for level in range(1, model.max_level + 1):
        introduced = satisfied = full = partial = none = not_assessed = 0
        for criterion in domain.criteria:
            if criterion.level != level:
                continue
            introduced += 1
            state = responses.get(criterion.id, ImplementationState.NOT_ASSESSED)
            if policy.satisfies(state):
                satisfied += 1
            if state is ImplementationState.FULL:
                full += 1
            elif state is ImplementationState.PARTIAL:
                partial += 1
            elif state is ImplementationState.NONE:
                none += 1
            else:
                not_assessed += 1
        per_level[level] = LevelTally(introduced=introduced, satisfied=satisfied,
                                      full=full, partial=partial, none=none,
                                      not_assessed=not_assessed)

    achieved = 0
    for level in range(1, model.max_level + 1):
        tally = per_level[level]
        if tally.satisfied < tally.introduced:
            break
        achieved = level

    blocking = achieved + 1 if achieved < model.max_level else None
    return DomainScore(domain_id=domain_id, achieved_mil=achieved,
                       per_level=per_level, blocking_level=blocking)


def check_binding(model: MaturityModel, assessment: Assessment) -> None:
    if assessment.model_id != model.id or assessment.model_version != model.version:
        raise BindingError(
            f"assessment '{assessment.id}' is bound to "
            f"{assessment.model_id}@{assessment.model_version}, "
            f"not {model.id}@{model.version}"
        )


def score_assessment(model: MaturityModel, assessment: Assessment,
                     policy: ScoringPolicy = ScoringPolicy.STRICT) -> Scorecard:
    """Scorecard with one DomainScore per catalog domain, in catalog order."""
    check_binding(model, assessment)
    domains = tuple(
        score_domain(model, d.id, assessment.responses, policy)
        for d in model.domains
    )
    unassessed = sum(
        1 for c in model.criteria()
        if assessment.state_of(c.id) is ImplementationState.NOT_ASSESSED
    )
    warnings: tuple[str, ...] = ()
    if unassessed:
        warnings = (f"{unassessed} criteria not assessed",)
    return Scorecard(assessment_id=assessment.id, policy=policy,
                     domains=domains, warnings=warnings)


def upgrade_distance(model: MaturityModel, domain_id: str,
                     responses: dict[str, ImplementationState],
                     policy: ScoringPolicy, target_mil: int) -> int:
    """Number of criteria at levels <= target still unsatisfied under policy."""
    try:
        domain = model.domain(domain_id)
    except KeyError:
        raise UnknownIdError(f"unknown domain id '{domain_id}'") from None
    if not 0 <= target_mil <= model.max_level:
        raise TargetRangeError(
            f"target MIL {target_mil} outside 0..{model.max_level}")
    _check_response_keys(model, responses)
    return sum(
        1 for c in domain.criteria
        if c.level <= target_mil
        and not policy.satisfies(responses.get(c.id, ImplementationState.NOT_ASSESSED))
    )


# --- scorecard JSON ----------------------------------------------------

def _tally_payload(tally: LevelTally) -> dict:
    return {
        "introduced": tally.introduced,
        "satisfied": tally.satisfied,
        "full": tally.full,
        "partial": tally.partial,
        "none": tally.none,
        "not_assessed": tally.not_assessed,
    }


def domain_score_payload(score: DomainScore) -> dict:
    return {
        "domain_id": score.domain_id,
        "achieved_mil": score.achieved_mil,
        "blocking_level": score.blocking_level,
        "per_level": {str(level): _tally_payload(t)
                      for level, t in sorted(score.per_level.items())},
    }


def scorecard_payload(card: Scorecard) -> dict:
    return {
        "assessment_id": card.assessment_id,
        "policy": card.policy.value,
        "domains": [domain_score_payload(d) for d in card.domains],
        "warnings": list(card.warnings),
    }


def scorecard_to_json(card: Scorecard) -> bytes:
    return (json.dumps(scorecard_payload(card), indent=2, ensure_ascii=False)
            + "\n").encode("utf-8")


def _tally_from_payload(data: dict) -> LevelTally:
    return LevelTally(introduced=data["introduced"], satisfied=data["satisfied"],
                      full=data["full"], partial=data["partial"],
                      none=data["none"], not_assessed=data["not_assessed"])


def domain_score_from_payload(data: dict) -> DomainScore:
    return DomainScore(
        domain_id=data["domain_id"],
        achieved_mil=data["achieved_mil"],
        blocking_level=data["blocking_level"],
        per_level={int(level): _tally_from_payload(t)
                   for level, t in data["per_level"].items()},
    )


def scorecard_from_payload(data: dict) -> Scorecard:
    return Scorecard(
        assessment_id=data["assessment_id"],
        policy=ScoringPolicy(data["policy"]),
        domains=tuple(domain_score_from_payload(d) for d in data["domains"]),
        warnings=tuple(data["warnings"]),
    )


def scorecard_from_json(source: bytes | str) -> Scorecard:
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    return scorecard_from_payload(json.loads(source))
