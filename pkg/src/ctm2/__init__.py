"""ICS-CTM2 testbed maturity assessment engine.

Declarative maturity-model catalogs, per-testbed assessments, Maturity
Indicator Level (MIL) scoring, and radar/ring/gap analysis, exposed as a
library, a CLI (``ctm2``) and a local HTTP service backing the bundled
self-evaluation UI.
"""

from ctm2.model import (
    Criterion,
    Domain,
    LevelProfile,
    MaturityModel,
    Finding,
    ValidationReport,
    level_profile,
    parse_model,
    serialize_model,
    validate_model,
)
from ctm2.scoring import (
    Assessment,
    DomainScore,
    ImplementationState,
    Scorecard,
    ScoringPolicy,
    TestbedClassification,
    TestbedMeta,
    score_assessment,
    score_domain,
    upgrade_distance,
)
from ctm2.analysis import (
    ComparisonMatrix,
    GapReport,
    RadarReport,
    RingReport,
    WhatIfResult,
    compare,
    gap_analysis,
    radar_analysis,
    ring_analysis,
    what_if,
)

__version__ = "0.1.0"

__all__ = [
    "Assessment",
    "ComparisonMatrix",
    "Criterion",
    "Domain",
    "DomainScore",
    "Finding",
    "GapReport",
    "ImplementationState",
    "LevelProfile",
    "MaturityModel",
    "RadarReport",
    "RingReport",
    "Scorecard",
    "ScoringPolicy",
    "TestbedClassification",
    "TestbedMeta",
    "ValidationReport",
    "WhatIfResult",
    "compare",
    "gap_analysis",
    "level_profile",
    "parse_model",
    "radar_analysis",
    "ring_analysis",
    "score_assessment",
    "score_domain",
    "serialize_model",
    "upgrade_distance",
    "validate_model",
    "what_if",
]
