"""MIL scoring against the brute-force oracle and the rule's invariants."""

from __future__ import annotations

import dataclasses
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ctm2.errors import BindingError, TargetRangeError, UnknownIdError
from ctm2.model import Criterion, Domain, MaturityModel
from ctm2.scoring import (
    Assessment,
    ImplementationState,
    ScoringPolicy,
    TestbedMeta,
    score_assessment,
    score_domain,
    state_rank,
    upgrade_distance,
)

from gen import random_catalog, random_responses, upgraded_responses
from oracles import oracle_achieved_mil, oracle_upgrade_distance

F, P, N, NA = (ImplementationState.FULL, ImplementationState.PARTIAL,
               ImplementationState.NONE, ImplementationState.NOT_ASSESSED)
STRICT, LENIENT = ScoringPolicy.STRICT, ScoringPolicy.LENIENT


def fill(model: MaturityModel, state: ImplementationState) -> dict:
    return {c.id: state for c in model.criteria()}


class TestScoreDomain:
    def test_powercyber_arch_rule(self, study_model):
        """All L1+L2 full and one L3 none scores exactly MIL2."""
        responses = fill_domain(study_model, "ARCH", F)
        level3 = [c for c in study_model.domain("ARCH").criteria if c.level == 3]
        responses[level3[0].id] = N
        score = score_domain(study_model, "ARCH", responses, STRICT)
        assert score.achieved_mil == 2
        assert score.blocking_level == 3

    def test_all_none_scores_zero(self, study_model):
        responses = fill(study_model, N)
        for domain in study_model.domains:
            assert score_domain(study_model, domain.id, responses).achieved_mil == 0

    def test_all_full_scores_max(self, study_model):
        responses = fill(study_model, F)
        for domain in study_model.domains:
            score = score_domain(study_model, domain.id, responses)
            assert score.achieved_mil == study_model.max_level
            assert score.blocking_level is None

    def test_oracle_equivalence_sample(self):
        rng = random.Random(1)
        for _ in range(300):
            model = random_catalog(rng)
            responses = random_responses(rng, model)
            policy = rng.choice([STRICT, LENIENT])
            for domain in model.domains:
                got = score_domain(model, domain.id, responses, policy).achieved_mil
                assert got == oracle_achieved_mil(model, domain.id, responses, policy)

    def test_unknown_domain_rejected(self, study_model):
        with pytest.raises(UnknownIdError):
            score_domain(study_model, "NOPE", {})

    def test_foreign_response_key_rejected(self, study_model):
        with pytest.raises(UnknownIdError, match="OTHER.1.1"):
            score_domain(study_model, "ARCH", {"OTHER.1.1": F})

    def test_independent_of_response_order(self, study_model):
        rng = random.Random(2)
        responses = random_responses(rng, study_model)
        items = list(responses.items())
        rng.shuffle(items)
        assert (score_domain(study_model, "ARCH", dict(items))
                == score_domain(study_model, "ARCH", responses))

    def test_tally_counts_add_up(self):
        rng = random.Random(3)
        for _ in range(50):
            model = random_catalog(rng)
            responses = random_responses(rng, model)
            for domain in model.domains:
                score = score_domain(model, domain.id, responses)
                for tally in score.per_level.values():
                    assert (tally.full + tally.partial + tally.none
                            + tally.not_assessed == tally.introduced)

    def test_blocking_level_is_never_vacuous(self):
        rng = random.Random(4)
        for _ in range(200):
            model = random_catalog(rng)
            responses = random_responses(rng, model)
            for domain in model.domains:
                score = score_domain(model, domain.id, responses)
                if score.blocking_level is not None:
                    tally = score.per_level[score.blocking_level]
                    assert tally.introduced > tally.satisfied > -1

    def test_cumulativity_audit(self):
        """achieved_mil >= m implies every criterion at levels <= m passes."""
        rng = random.Random(5)
        for _ in range(200):
            model = random_catalog(rng)
            responses = random_responses(rng, model)
            policy = rng.choice([STRICT, LENIENT])
            for domain in model.domains:
                achieved = score_domain(model, domain.id, responses, policy).achieved_mil
                for criterion in domain.criteria:
                    if criterion.level <= achieved:
                        state = responses.get(criterion.id, NA)
                        assert policy.satisfies(state)


def fill_domain(model: MaturityModel, domain_id: str,
                state: ImplementationState) -> dict:
    return {c.id: state for c in model.domain(domain_id).criteria}


class TestPolicies:
    def test_partial_credits_only_lenient(self, study_model):
        responses = fill_domain(study_model, "APP", P)
        assert score_domain(study_model, "APP", responses, STRICT).achieved_mil == 0
        assert (score_domain(study_model, "APP", responses, LENIENT).achieved_mil
                == study_model.max_level)

    def test_not_assessed_never_credits(self, study_model):
        responses = fill_domain(study_model, "APP", NA)
        for policy in (STRICT, LENIENT):
            assert score_domain(study_model, "APP", responses, policy).achieved_mil == 0

    def test_lenient_never_below_strict(self):
        rng = random.Random(6)
        for _ in range(200):
            model = random_catalog(rng)
            responses = random_responses(rng, model)
            for domain in model.domains:
                strict = score_domain(model, domain.id, responses, STRICT).achieved_mil
                lenient = score_domain(model, domain.id, responses, LENIENT).achieved_mil
                assert lenient >= strict

    def test_monotone_under_pointwise_upgrades(self):
        rng = random.Random(7)
        for _ in range(200):
            model = random_catalog(rng)
            before = random_responses(rng, model)
            after = upgraded_responses(rng, model, before)
            for policy in (STRICT, LENIENT):
                for domain in model.domains:
                    assert (score_domain(model, domain.id, after, policy).achieved_mil
                            >= score_domain(model, domain.id, before, policy).achieved_mil)

    def test_catalog_growth_never_raises_mil(self):
        rng = random.Random(8)
        for _ in range(100):
            model = random_catalog(rng, max_domains=3)
            responses = random_responses(rng, model)
            domain = rng.choice(model.domains)
            level = rng.randint(1, model.max_level)
            ordinal = sum(1 for c in domain.criteria if c.level == level) + 1
            grown_domain = dataclasses.replace(
                domain,
                criteria=domain.criteria + (Criterion(
                    id=f"{domain.id}.{level}.{ordinal}",
                    text="added afterwards", level=level),))
            grown = dataclasses.replace(
                model,
                domains=tuple(grown_domain if d.id == domain.id else d
                              for d in model.domains))
            for policy in (STRICT, LENIENT):
                assert (score_domain(grown, domain.id, responses, policy).achieved_mil
                        <= score_domain(model, domain.id, responses, policy).achieved_mil)


# Single-domain catalogs driven by hypothesis: states drawn per criterion.
@st.composite
def domain_and_states(draw):
    counts = draw(st.lists(st.integers(0, 4), min_size=3, max_size=3))
    if sum(counts) == 0:
        counts[0] = 1
    criteria = tuple(
        Criterion(id=f"X.{level}.{i + 1}", text=f"c{level}.{i}", level=level)
        for level, count in enumerate(counts, start=1)
        for i in range(count))
    model = MaturityModel(
        id="hyp", version="1.0.0", name="hyp", max_level=3,
        domains=(Domain(id="X", name="X", description="d", criteria=criteria),))
    states = draw(st.lists(
        st.sampled_from([F, P, N, NA]),
        min_size=len(criteria), max_size=len(criteria)))
    return model, dict(zip((c.id for c in criteria), states))


@given(domain_and_states())
@settings(max_examples=200)
def test_hypothesis_oracle_equivalence(case):
    model, responses = case
    for policy in (STRICT, LENIENT):
        assert (score_domain(model, "X", responses, policy).achieved_mil
                == oracle_achieved_mil(model, "X", responses, policy))


@given(domain_and_states(), st.randoms(use_true_random=False))
@settings(max_examples=200)
def test_hypothesis_upgrade_monotone(case, rng):
    model, responses = case
    upgraded = {
        cid: rng.choice([s for s in (F, P, N, NA)
                         if state_rank(s) >= state_rank(state)])
        for cid, state in responses.items()
    }
    for policy in (STRICT, LENIENT):
        assert (score_domain(model, "X", upgraded, policy).achieved_mil
                >= score_domain(model, "X", responses, policy).achieved_mil)


class TestScoreAssessment:
    def test_powercyber_fixture(self, study_model, powercyber):
        card = score_assessment(study_model, powercyber)
        assert card.domain("ARCH").achieved_mil == 2
        assert card.policy is STRICT
        assert [d.domain_id for d in card.domains] == list(study_model.domain_ids())

    def test_empty_responses_all_zero_with_warning(self, study_model):
        assessment = Assessment(
            id="empty", model_id=study_model.id, model_version=study_model.version,
            meta=TestbedMeta(name="Empty"), responses={})
        card = score_assessment(study_model, assessment)
        assert all(d.achieved_mil == 0 for d in card.domains)
        total = len(study_model.criteria())
        assert card.warnings == (f"{total} criteria not assessed",)

    def test_equals_per_domain_calls(self):
        rng = random.Random(9)
        for _ in range(50):
            model = random_catalog(rng)
            assessment = Assessment(
                id="a", model_id=model.id, model_version=model.version,
                meta=TestbedMeta(name="A"),
                responses=random_responses(rng, model))
            card = score_assessment(model, assessment, LENIENT)
            for domain_score in card.domains:
                assert domain_score == score_domain(
                    model, domain_score.domain_id, assessment.responses, LENIENT)

    def test_binding_mismatch_rejected(self, study_model, powercyber):
        stale = dataclasses.replace(powercyber, model_version="9.9.9")
        with pytest.raises(BindingError):
            score_assessment(study_model, stale)


class TestUpgradeDistance:
    def test_powercyber_arch_target_two_is_zero(self, study_model, powercyber):
        assert upgrade_distance(study_model, "ARCH", powercyber.responses,
                                STRICT, 2) == 0

    def test_all_none_target_one_is_five(self, study_model):
        responses = fill(study_model, N)
        assert upgrade_distance(study_model, "ARCH", responses, STRICT, 1) == 5

    def test_target_zero_is_always_zero(self, study_model):
        rng = random.Random(10)
        responses = random_responses(rng, study_model)
        for domain in study_model.domains:
            assert upgrade_distance(study_model, domain.id, responses, STRICT, 0) == 0

    def test_zero_iff_target_reached(self):
        rng = random.Random(11)
        for _ in range(100):
            model = random_catalog(rng)
            responses = random_responses(rng, model)
            policy = rng.choice([STRICT, LENIENT])
            for domain in model.domains:
                achieved = score_domain(model, domain.id, responses, policy).achieved_mil
                for target in range(model.max_level + 1):
                    distance = upgrade_distance(model, domain.id, responses,
                                                policy, target)
                    assert distance == oracle_upgrade_distance(
                        model, domain.id, responses, policy, target)
                    assert (distance == 0) == (achieved >= target)

    def test_target_out_of_range(self, study_model):
        with pytest.raises(TargetRangeError):
            upgrade_distance(study_model, "ARCH", {}, STRICT, 4)
        with pytest.raises(TargetRangeError):
            upgrade_distance(study_model, "ARCH", {}, STRICT, -1)
