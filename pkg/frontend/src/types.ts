// Payload shapes of the ctm2 HTTP API. The client renders these verbatim;
// it never derives a MIL on its own.

export type ImplementationState = "full" | "partial" | "none" | "not_assessed";
export type Policy = "strict" | "lenient";

// Selector order mirrors the upgrade ordering of states.
export const STATE_ORDER: ImplementationState[] = [
  "not_assessed", "none", "partial", "full",
];

export const STATE_LABELS: Record<ImplementationState, string> = {
  not_assessed: "not assessed",
  none: "none",
  partial: "partial",
  full: "full",
};

export interface CriterionDoc {
  id: string;
  text: string;
  level: number;
  refs: string[];
}

export interface DomainDoc {
  id: string;
  name: string;
  description: string;
  criteria: CriterionDoc[];
}

export interface CatalogDoc {
  id: string;
  version: string;
  name: string;
  max_level: number;
  domains: DomainDoc[];
}

export interface MetaDoc {
  name: string;
  institute: string;
  sector: string;
  classification: string;
  notes: string;
}

export interface AssessmentDoc {
  id: string;
  model_id: string;
  model_version: string;
  meta: MetaDoc;
  responses: Record<string, ImplementationState>;
  created: string;
  modified: string;
  fixture_note?: string;
}

export interface LevelTally {
  introduced: number;
  satisfied: number;
  full: number;
  partial: number;
  none: number;
  not_assessed: number;
}

export interface DomainScoreDoc {
  domain_id: string;
  achieved_mil: number;
  blocking_level: number | null;
  per_level: Record<string, LevelTally>;
}

export interface ScorecardDoc {
  assessment_id: string;
  policy: Policy;
  domains: DomainScoreDoc[];
  warnings: string[];
}

export interface BlockingDoc {
  criterion_id: string;
  text: string;
  state: ImplementationState;
}

export interface GapDomainDoc {
  domain_id: string;
  achieved_mil: number;
  target_level: number | null;
  blocking: BlockingDoc[];
}

export interface GapReportDoc {
  model_id: string;
  model_version: string;
  policy: Policy;
  generated_at: string;
  assessment_id: string;
  domains: GapDomainDoc[];
}

export interface WhatIfDoc {
  before: ScorecardDoc;
  after: ScorecardDoc;
  deltas: Record<string, number>;
}

export interface CatalogSummary {
  id: string;
  version: string;
  name: string;
  domains: string[];
}

export interface AssessmentSummary {
  id: string;
  name: string;
  institute: string;
  sector: string;
  classification: string;
  model_id: string;
  model_version: string;
  modified: string;
}
