// Client session state. The engine is the single source of truth: every
// MIL shown comes from a fetched scorecard / gap / what-if payload, and
// the local draft only exists between an edit and its PATCH settling.

import { ApiClient, ApiError } from "./api";
import type {
  AssessmentDoc,
  AssessmentSummary,
  CatalogDoc,
  CatalogSummary,
  GapReportDoc,
  ImplementationState,
  Policy,
  ScorecardDoc,
  WhatIfDoc,
} from "./types";

export interface SessionState {
  catalogs: CatalogSummary[];
  assessments: AssessmentSummary[];
  catalogId: string | null;
  assessmentId: string | null;
  catalog: CatalogDoc | null;
  assessment: AssessmentDoc | null;
  scorecard: ScorecardDoc | null;
  gap: GapReportDoc | null;
  radarSvg: string | null;
  policy: Policy;
  draft: Record<string, ImplementationState>;
  staged: Record<string, ImplementationState>;
  preview: WhatIfDoc | null;
  scorePending: boolean;
  saving: boolean;
  conflict: boolean;
  error: string | null;
}

type Listener = (state: SessionState) => void;

function initialState(): SessionState {
  return {
    catalogs: [],
    assessments: [],
    catalogId: null,
    assessmentId: null,
    catalog: null,
    assessment: null,
    scorecard: null,
    gap: null,
    radarSvg: null,
    policy: "strict",
    draft: {},
    staged: {},
    preview: null,
    scorePending: false,
    saving: false,
    conflict: false,
    error: null,
  };
}

export class Session {
  state: SessionState = initialState();
  private listeners: Listener[] = [];
  private pending = new Set<Promise<unknown>>();

  constructor(private api: ApiClient) {}

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private emit(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  private track<T>(promise: Promise<T>): Promise<T> {
    this.pending.add(promise);
    promise.finally(() => this.pending.delete(promise));
    return promise;
  }

  /** Resolves when every in-flight operation has settled (test hook). */
  async idle(): Promise<void> {
    while (this.pending.size > 0) {
      await Promise.allSettled([...this.pending]);
    }
  }

  get dirty(): boolean {
    return Object.keys(this.state.draft).length > 0;
  }

  /** State a criterion selector should show: draft wins over server copy. */
  displayedState(criterionId: string): ImplementationState {
    return (
      this.state.draft[criterionId] ??
      this.state.assessment?.responses[criterionId] ??
      "not_assessed"
    );
  }

  start(): Promise<void> {
    return this.track(this.doStart());
  }

  private async doStart(): Promise<void> {
    try {
      this.state.error = null;
      this.state.catalogs = await this.api.listCatalogs();
      this.state.assessments = await this.api.listAssessments();
      this.emit();
      if (this.state.assessments.length > 0) {
        await this.doOpen(this.state.assessments[0].id);
      }
    } catch (err) {
      this.state.error = err instanceof Error ? err.message : String(err);
      this.emit();
    }
  }

  openAssessment(id: string): Promise<void> {
    return this.track(this.doOpen(id));
  }

  private async doOpen(id: string): Promise<void> {
    try {
      const assessment = await this.api.getAssessment(id);
      const catalog = await this.api.getCatalog(assessment.model_id);
      this.state.assessmentId = id;
      this.state.catalogId = catalog.id;
      this.state.assessment = assessment;
      this.state.catalog = catalog;
      this.state.draft = {};
      this.state.staged = {};
      this.state.preview = null;
      this.state.conflict = false;
      this.state.error = null;
      this.emit();
      await this.refreshScore();
      this.state.gap = await this.api.getGap(id, this.state.policy);
      this.state.radarSvg = await this.api.radarSvg([id], this.state.policy);
      this.emit();
    } catch (err) {
      this.state.error = err instanceof Error ? err.message : String(err);
      this.emit();
    }
  }

  private async refreshScore(): Promise<void> {
    if (!this.state.assessmentId) return;
    this.state.scorePending = true;
    this.emit();
    try {
      this.state.scorecard = await this.api.getScore(
        this.state.assessmentId,
        this.state.policy,
      );
    } finally {
      this.state.scorePending = false;
      this.emit();
    }
  }

  /**
   * Questionnaire toggle: record the draft, save it with a single PATCH,
   * then refetch the score once. Nothing else touches the network.
   */
  setResponse(criterionId: string, state: ImplementationState): Promise<void> {
    return this.track(this.doSetResponse(criterionId, state));
  }

  private async doSetResponse(
    criterionId: string,
    state: ImplementationState,
  ): Promise<void> {
    const id = this.state.assessmentId;
    const assessment = this.state.assessment;
    if (!id || !assessment) return;
    this.state.draft = { ...this.state.draft, [criterionId]: state };
    this.state.saving = true;
    this.emit();
    try {
      this.state.assessment = await this.api.patchResponses(
        id,
        { [criterionId]: state },
        assessment.modified,
      );
      const { [criterionId]: _saved, ...rest } = this.state.draft;
      this.state.draft = rest;
      this.state.saving = false;
      this.emit();
      await this.refreshScore();
    } catch (err) {
      this.state.saving = false;
      this.state.draft = {};
      if (err instanceof ApiError && err.status === 409) {
        this.state.conflict = true;
      } else {
        this.state.error = err instanceof Error ? err.message : String(err);
      }
      this.emit();
    }
  }

  /** Policy switch re-fetches engine scores; MILs are never derived here. */
  setPolicy(policy: Policy): Promise<void> {
    return this.track(this.doSetPolicy(policy));
  }

  private async doSetPolicy(policy: Policy): Promise<void> {
    this.state.policy = policy;
    this.state.preview = null;
    this.emit();
    if (!this.state.assessmentId) return;
    await this.refreshScore();
    this.state.gap = await this.api.getGap(this.state.assessmentId, policy);
    this.emit();
  }

  // --- what-if staging -------------------------------------------------

  stage(criterionId: string, state: ImplementationState): void {
    this.state.staged = { ...this.state.staged, [criterionId]: state };
    this.state.preview = null;
    this.emit();
  }

  unstage(criterionId: string): void {
    const { [criterionId]: _gone, ...rest } = this.state.staged;
    this.state.staged = rest;
    this.state.preview = null;
    this.emit();
  }

  /** Preview is side-effect-free on the server: one POST /whatif. */
  previewStaged(): Promise<void> {
    return this.track(this.doPreview());
  }

  private async doPreview(): Promise<void> {
    if (!this.state.assessmentId) return;
    this.state.preview = await this.api.whatIf(
      this.state.assessmentId,
      this.state.staged,
      this.state.policy,
    );
    this.emit();
  }

  /** Cancel discards staged changes locally; no network traffic. */
  cancelStaged(): void {
    this.state.staged = {};
    this.state.preview = null;
    this.emit();
  }

  /** Apply commits the staged changes with one PATCH, then refreshes. */
  applyStaged(): Promise<void> {
    return this.track(this.doApply());
  }

  private async doApply(): Promise<void> {
    const id = this.state.assessmentId;
    const assessment = this.state.assessment;
    if (!id || !assessment || Object.keys(this.state.staged).length === 0) return;
    try {
      this.state.assessment = await this.api.patchResponses(
        id,
        this.state.staged,
        assessment.modified,
      );
      this.state.staged = {};
      this.state.preview = null;
      this.emit();
      await this.refreshScore();
      this.state.gap = await this.api.getGap(id, this.state.policy);
      this.emit();
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        this.state.conflict = true;
        this.emit();
      } else {
        throw err;
      }
    }
  }

  /** Conflict recovery: drop local edits and reload the server copy. */
  reload(): Promise<void> {
    const id = this.state.assessmentId;
    if (!id) return Promise.resolve();
    this.state.conflict = false;
    this.state.draft = {};
    this.state.staged = {};
    this.state.preview = null;
    return this.openAssessment(id);
  }
}
