"""Seeded random generators for catalogs, responses and workspaces."""

from __future__ import annotations

import random
from datetime import datetime, timezone

from ctm2.model import Criterion, Domain, MaturityModel
from ctm2.scoring import (
    Assessment,
    ImplementationState,
    TestbedClassification,
    TestbedMeta,
)

STATES = list(ImplementationState)


def random_catalog(rng: random.Random, max_domains: int = 5,
                   max_level: int = 3, max_per_level: int = 8) -> MaturityModel:
    n_domains = rng.randint(1, max_domains)
    domains = []
    for d in range(n_domains):
        did = f"D{d + 1}"
        counts = [rng.randint(0, max_per_level) for _ in range(max_level)]
        if sum(counts) == 0:
            counts[rng.randrange(max_level)] = 1
        criteria = []
        for level, count in enumerate(counts, start=1):
            for ordinal in range(1, count + 1):
                criteria.append(Criterion(
                    id=f"{did}.{level}.{ordinal}",
                    text=f"criterion {did} level {level} number {ordinal}",
                    level=level))
        domains.append(Domain(id=did, name=f"Domain {d + 1}",
                              description=f"generated domain {d + 1}",
                              criteria=tuple(criteria)))
    return MaturityModel(
        id=f"gen-{rng.randrange(10 ** 9)}", version="1.0.0",
        name="generated catalog", max_level=max_level, domains=tuple(domains))


def random_responses(rng: random.Random, model: MaturityModel,
                     absent_chance: float = 0.2) -> dict[str, ImplementationState]:
    responses = {}
    for criterion in model.criteria():
        if rng.random() < absent_chance:
            continue
        responses[criterion.id] = rng.choice(STATES)
    return responses


def random_assessment(rng: random.Random, model: MaturityModel,
                      assessment_id: str) -> Assessment:
    stamp = datetime(2026, rng.randint(1, 8), rng.randint(1, 28),
                     rng.randint(0, 23), rng.randint(0, 59), rng.randint(0, 59),
                     tzinfo=timezone.utc)
    return Assessment(
        id=assessment_id, model_id=model.id, model_version=model.version,
        meta=TestbedMeta(
            name=f"Testbed {assessment_id}",
            institute=f"Institute {rng.randrange(100)}",
            sector=rng.choice(["Smart Grid", "Water Treatment", "Manufacturing", ""]),
            classification=rng.choice(list(TestbedClassification)),
            notes=""),
        responses=random_responses(rng, model),
        created=stamp, modified=stamp)


def upgraded_responses(rng: random.Random, model: MaturityModel,
                       responses: dict[str, ImplementationState]
                       ) -> dict[str, ImplementationState]:
    """A pointwise >= copy: some states bumped along the upgrade order."""
    order = [ImplementationState.NOT_ASSESSED, ImplementationState.NONE,
             ImplementationState.PARTIAL, ImplementationState.FULL]
    rank = {ImplementationState.NOT_ASSESSED: 0, ImplementationState.NONE: 0,
            ImplementationState.PARTIAL: 1, ImplementationState.FULL: 2}
    upgraded = {}
    for criterion in model.criteria():
        state = responses.get(criterion.id, ImplementationState.NOT_ASSESSED)
        if rng.random() < 0.4:
            candidates = [s for s in order if rank[s] >= rank[state]]
            state = rng.choice(candidates)
        if criterion.id in responses or state is not ImplementationState.NOT_ASSESSED:
            upgraded[criterion.id] = state
    return upgraded
