"""Acceptance suite: one test per criterion, run at the stated tolerances.

The terminal summary hook in conftest prints a PASS/FAIL line per
criterion at the end of the run.
"""

from __future__ import annotations

import json
import random
import time
import xml.etree.ElementTree as ET
from datetime import datetime, timezone
from pathlib import Path

import pytest
from click.testing import CliRunner

from ctm2 import analysis, render
from ctm2.cli import main
from ctm2.model import Criterion, Domain, MaturityModel, parse_model, serialize_model
from ctm2.scoring import (
    Assessment,
    ImplementationState,
    ScoringPolicy,
    TestbedMeta,
    score_assessment,
    score_domain,
    scorecard_to_json,
)
from ctm2.workspace import (
    load_workspace,
    parse_assessment,
    save_workspace,
    serialize_assessment,
)

from gen import (
    random_assessment,
    random_catalog,
    random_responses,
    upgraded_responses,
)
from oracles import oracle_achieved_mil

F, P, N, NA = (ImplementationState.FULL, ImplementationState.PARTIAL,
               ImplementationState.NONE, ImplementationState.NOT_ASSESSED)
STRICT, LENIENT = ScoringPolicy.STRICT, ScoringPolicy.LENIENT
STAMP = datetime(2026, 8, 10, 12, 0, 0, tzinfo=timezone.utc)
GOLDEN = Path(__file__).parent / "golden"


def test_c1_ring_counts_via_cli(casestudy_root):
    """ARCH cumulative totals are exactly {1: 5, 2: 9, 3: 21}; runtime < 1 s."""
    runner = CliRunner()
    started = time.monotonic()
    result = runner.invoke(main, ["ring", "--workspace", str(casestudy_root),
                                  "powercyber"], catch_exceptions=False)
    elapsed = time.monotonic() - started
    assert result.exit_code == 0
    payload = json.loads(result.stdout)
    arch = next(d for d in payload["domains"] if d["domain_id"] == "ARCH")
    assert {lv["level"]: lv["cumulative_total"] for lv in arch["levels"]} \
        == {1: 5, 2: 9, 3: 21}
    assert elapsed < 1.0, f"ring took {elapsed:.3f}s"


def test_c2_powercyber_arch_mil2(study_model, powercyber):
    """ARCH scores MIL2: levels 1+2 fully implemented, level 3 incomplete."""
    card = score_assessment(study_model, powercyber, STRICT)
    arch = card.domain("ARCH")
    assert arch.achieved_mil == 2
    assert arch.per_level[1].full == arch.per_level[1].introduced
    assert arch.per_level[2].full == arch.per_level[2].introduced
    assert arch.per_level[3].satisfied < arch.per_level[3].introduced


def test_c3_staircase_rule_500_instances():
    """All MIL1+MIL2 satisfied but not all MIL3 scores exactly MIL2."""
    rng = random.Random(9001)
    checked = 0
    for _ in range(500):
        model = random_catalog(rng)
        policy = rng.choice([STRICT, LENIENT])
        satisfying = [F] if policy is STRICT else [F, P]
        responses: dict[str, ImplementationState] = {}
        for domain in model.domains:
            level3 = [c for c in domain.criteria if c.level == 3]
            for criterion in domain.criteria:
                if criterion.level <= 2:
                    responses[criterion.id] = rng.choice(satisfying)
            if not level3:
                continue
            broken = rng.randrange(len(level3))
            for index, criterion in enumerate(level3):
                if index == broken:
                    responses[criterion.id] = (
                        rng.choice([N, NA]) if policy is LENIENT
                        else rng.choice([P, N, NA]))
                else:
                    responses[criterion.id] = rng.choice(satisfying + [N])
        for domain in model.domains:
            if not any(c.level == 3 for c in domain.criteria):
                continue
            score = score_domain(model, domain.id, responses, policy)
            assert score.achieved_mil == 2, (model.id, domain.id, policy)
            checked += 1
    assert checked >= 500


def test_c4_oracle_equivalence_1000_instances():
    """score_domain agrees with the brute-force oracle; suite under 30 s."""
    rng = random.Random(9002)
    started = time.monotonic()
    disagreements = 0
    for _ in range(1000):
        model = random_catalog(rng, max_domains=5, max_level=3, max_per_level=8)
        responses = random_responses(rng, model)
        policy = rng.choice([STRICT, LENIENT])
        for domain in model.domains:
            engine = score_domain(model, domain.id, responses, policy).achieved_mil
            oracle = oracle_achieved_mil(model, domain.id, responses, policy)
            if engine != oracle:
                disagreements += 1
    elapsed = time.monotonic() - started
    assert disagreements == 0
    assert elapsed < 30.0, f"oracle suite took {elapsed:.1f}s"


def test_c5_monotonicity_1000_pairs():
    """Pointwise upgrades never lower a MIL; lenient >= strict throughout."""
    rng = random.Random(9003)
    for _ in range(1000):
        model = random_catalog(rng, max_domains=3)
        before = random_responses(rng, model)
        after = upgraded_responses(rng, model, before)
        for domain in model.domains:
            for policy in (STRICT, LENIENT):
                assert (score_domain(model, domain.id, after, policy).achieved_mil
                        >= score_domain(model, domain.id, before, policy).achieved_mil)
            assert (score_domain(model, domain.id, before, LENIENT).achieved_mil
                    >= score_domain(model, domain.id, before, STRICT).achieved_mil)


def test_c6_triple_consistency_200_workspaces():
    """Radar, matrix and scorecard agree on every (assessment, domain) MIL."""
    rng = random.Random(9004)
    for _ in range(200):
        model = random_catalog(rng, max_domains=4)
        assessments = [
            random_assessment(rng, model, f"t{i}")
            for i in range(rng.randint(1, 4))
        ]
        policy = rng.choice([STRICT, LENIENT])
        radar = analysis.radar_analysis(model, assessments, policy)
        matrix = analysis.compare(model, assessments, policy)
        for assessment, entry, row in zip(assessments, radar.entries, matrix.rows):
            card = score_assessment(model, assessment, policy)
            mils = tuple(d.achieved_mil for d in card.domains)
            assert entry.mils == mils == row.mils


def test_c7_round_trips_500_values(tmp_path):
    """Serialization round-trips for catalogs, assessments and reports."""
    rng = random.Random(9005)
    for _ in range(170):
        model = random_catalog(rng)
        assert parse_model(serialize_model(model)) == model
    for _ in range(170):
        model = random_catalog(rng)
        assessment = random_assessment(rng, model, "round")
        assert parse_assessment(serialize_assessment(assessment)) == assessment
    for index in range(160):
        model = random_catalog(rng)
        assessment = random_assessment(rng, model, "report")
        policy = rng.choice([STRICT, LENIENT])
        kind = index % 4
        if kind == 0:
            report = analysis.radar_analysis(model, [assessment], policy,
                                             generated_at=STAMP)
            assert analysis.radar_from_json(analysis.radar_to_json(report)) == report
        elif kind == 1:
            report = analysis.ring_analysis(model, assessment, policy,
                                            generated_at=STAMP)
            assert analysis.ring_from_json(analysis.ring_to_json(report)) == report
        elif kind == 2:
            report = analysis.gap_analysis(model, assessment, policy,
                                           generated_at=STAMP)
            assert analysis.gap_from_json(analysis.gap_to_json(report)) == report
        else:
            report = analysis.compare(model, [assessment], policy,
                                      generated_at=STAMP)
            assert analysis.matrix_from_json(analysis.matrix_to_json(report)) == report

    # workspace save -> load equality
    for index in range(10):
        model = random_catalog(rng)
        assessments = {
            f"ws-a{i}": random_assessment(rng, model, f"ws-a{i}")
            for i in range(rng.randint(0, 3))
        }
        from ctm2.workspace import Workspace
        ws = Workspace(root=tmp_path / f"ws{index}",
                       catalogs={model.id: model}, assessments=assessments)
        save_workspace(ws)
        loaded = load_workspace(ws.root)
        assert loaded.catalogs == ws.catalogs
        assert loaded.assessments == ws.assessments


def test_c8_render_structure_and_goldens(bundled_workspace, study_model, powercyber):
    """Axis/gridline counts, ring angle sums, golden byte equality."""
    assessments = list(bundled_workspace.assessments.values())
    radar = analysis.radar_analysis(study_model, assessments, generated_at=STAMP)
    radar_svg = render.render_radar_svg(radar)
    root = ET.fromstring(radar_svg.decode("utf-8"))
    axes = [el for el in root.iter()
            if el.tag.endswith("}line") and el.get("class") == "axis"]
    gridlines = [el for el in root.iter()
                 if el.tag.endswith("}circle") and el.get("class") == "gridline"]
    assert len(axes) == len(study_model.domains)
    assert len(gridlines) == study_model.max_level + 1

    ring = analysis.ring_analysis(study_model, powercyber, generated_at=STAMP)
    for domain in study_model.domains:
        ring_svg = render.render_ring_svg(ring, domain.id)
        ring_root = ET.fromstring(ring_svg.decode("utf-8"))
        sums: dict[str, float] = {}
        for path in ring_root.iter():
            if path.tag.endswith("}path") and "segment" in (path.get("class") or ""):
                level = path.get("data-level")
                sums[level] = sums.get(level, 0.0) + float(path.get("data-angle"))
        for level, total in sums.items():
            assert abs(total - 360.0) < 1e-6, (domain.id, level, total)

    assert (render.render_ring_svg(ring, "ARCH")
            == (GOLDEN / "powercyber-arch-ring.svg").read_bytes())
    assert radar_svg == (GOLDEN / "casestudy-radar.svg").read_bytes()


def test_c9_cli_contract(casestudy_root):
    """`ring` refuses multiple ids with exit 2; score JSON is byte-exact."""
    runner = CliRunner()
    two = runner.invoke(main, ["ring", "--workspace", str(casestudy_root),
                               "powercyber", "ornl-hvac"])
    assert two.exit_code == 2
    assert "ring analysis is per-testbed" in two.stderr

    scored = runner.invoke(main, ["score", "--workspace", str(casestudy_root),
                                  "powercyber"], catch_exceptions=False)
    ws = load_workspace(casestudy_root)
    card = score_assessment(ws.catalogs["icsctm2-casestudy"],
                            ws.assessments["powercyber"], STRICT)
    assert scored.stdout_bytes == scorecard_to_json(card)
