"use strict";
(() => {
  // src/api.ts
  var ApiError = class extends Error {
    constructor(status, code, message) {
      super(message);
      this.status = status;
      this.code = code;
      this.name = "ApiError";
    }
  };
  async function raiseFor(response) {
    let code = "http_error";
    let message = `${response.status} ${response.statusText}`;
    try {
      const body = await response.json();
      if (body && body.error) {
        code = body.error.code;
        message = body.error.message;
      }
    } catch {
    }
    throw new ApiError(response.status, code, message);
  }
  var ApiClient = class {
    constructor(fetchImpl = (url, init) => fetch(url, init), base = "") {
      this.fetchImpl = fetchImpl;
      this.base = base;
    }
    async json(path, init) {
      const response = await this.fetchImpl(this.base + path, init);
      if (!response.ok) await raiseFor(response);
      return await response.json();
    }
    listCatalogs() {
      return this.json("/api/catalogs");
    }
    getCatalog(id) {
      return this.json(`/api/catalogs/${id}`);
    }
    listAssessments() {
      return this.json("/api/assessments");
    }
    getAssessment(id) {
      return this.json(`/api/assessments/${id}`);
    }
    // expectedModified enables optimistic concurrency: the server answers
    // 409 when someone else saved in between.
    patchResponses(id, changes, expectedModified) {
      const headers = {
        "Content-Type": "application/json"
      };
      if (expectedModified) headers["X-Expected-Modified"] = expectedModified;
      return this.json(`/api/assessments/${id}/responses`, {
        method: "PATCH",
        headers,
        body: JSON.stringify(changes)
      });
    }
    getScore(id, policy) {
      return this.json(`/api/assessments/${id}/score?policy=${policy}`);
    }
    getGap(id, policy) {
      return this.json(`/api/assessments/${id}/gap?policy=${policy}`);
    }
    whatIf(id, changes, policy) {
      return this.json(`/api/assessments/${id}/whatif?policy=${policy}`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(changes)
      });
    }
    async radarSvg(ids, policy) {
      const response = await this.fetchImpl(
        `${this.base}/api/radar?ids=${ids.join(",")}&policy=${policy}&format=svg`
      );
      if (!response.ok) await raiseFor(response);
      return await response.text();
    }
  };

  // src/state.ts
  function initialState() {
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
      error: null
    };
  }
  var Session = class {
    constructor(api) {
      this.api = api;
      this.state = initialState();
      this.listeners = [];
      this.pending = /* @__PURE__ */ new Set();
    }
    subscribe(listener) {
      this.listeners.push(listener);
      return () => {
        this.listeners = this.listeners.filter((l) => l !== listener);
      };
    }
    emit() {
      for (const listener of this.listeners) listener(this.state);
    }
    track(promise) {
      this.pending.add(promise);
      promise.finally(() => this.pending.delete(promise));
      return promise;
    }
    /** Resolves when every in-flight operation has settled (test hook). */
    async idle() {
      while (this.pending.size > 0) {
        await Promise.allSettled([...this.pending]);
      }
    }
    get dirty() {
      return Object.keys(this.state.draft).length > 0;
    }
    /** State a criterion selector should show: draft wins over server copy. */
    displayedState(criterionId) {
      return this.state.draft[criterionId] ?? this.state.assessment?.responses[criterionId] ?? "not_assessed";
    }
    start() {
      return this.track(this.doStart());
    }
    async doStart() {
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
    openAssessment(id) {
      return this.track(this.doOpen(id));
    }
    async doOpen(id) {
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
    async refreshScore() {
      if (!this.state.assessmentId) return;
      this.state.scorePending = true;
      this.emit();
      try {
        this.state.scorecard = await this.api.getScore(
          this.state.assessmentId,
          this.state.policy
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
    setResponse(criterionId, state) {
      return this.track(this.doSetResponse(criterionId, state));
    }
    async doSetResponse(criterionId, state) {
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
          assessment.modified
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
    setPolicy(policy) {
      return this.track(this.doSetPolicy(policy));
    }
    async doSetPolicy(policy) {
      this.state.policy = policy;
      this.state.preview = null;
      this.emit();
      if (!this.state.assessmentId) return;
      await this.refreshScore();
      this.state.gap = await this.api.getGap(this.state.assessmentId, policy);
      this.emit();
    }
    // --- what-if staging -------------------------------------------------
    stage(criterionId, state) {
      this.state.staged = { ...this.state.staged, [criterionId]: state };
      this.state.preview = null;
      this.emit();
    }
    unstage(criterionId) {
      const { [criterionId]: _gone, ...rest } = this.state.staged;
      this.state.staged = rest;
      this.state.preview = null;
      this.emit();
    }
    /** Preview is side-effect-free on the server: one POST /whatif. */
    previewStaged() {
      return this.track(this.doPreview());
    }
    async doPreview() {
      if (!this.state.assessmentId) return;
      this.state.preview = await this.api.whatIf(
        this.state.assessmentId,
        this.state.staged,
        this.state.policy
      );
      this.emit();
    }
    /** Cancel discards staged changes locally; no network traffic. */
    cancelStaged() {
      this.state.staged = {};
      this.state.preview = null;
      this.emit();
    }
    /** Apply commits the staged changes with one PATCH, then refreshes. */
    applyStaged() {
      return this.track(this.doApply());
    }
    async doApply() {
      const id = this.state.assessmentId;
      const assessment = this.state.assessment;
      if (!id || !assessment || Object.keys(this.state.staged).length === 0) return;
      try {
        this.state.assessment = await this.api.patchResponses(
          id,
          this.state.staged,
          assessment.modified
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
    reload() {
      const id = this.state.assessmentId;
      if (!id) return Promise.resolve();
      this.state.conflict = false;
      this.state.draft = {};
      this.state.staged = {};
      this.state.preview = null;
      return this.openAssessment(id);
    }
  };

  // src/types.ts
  var STATE_ORDER = [
    "not_assessed",
    "none",
    "partial",
    "full"
  ];
  var STATE_LABELS = {
    not_assessed: "not assessed",
    none: "none",
    partial: "partial",
    full: "full"
  };

  // src/views.ts
  function esc(text) {
    return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
  }
  function banner(session) {
    const { error, conflict } = session.state;
    if (error) {
      return `<div class="banner error" data-role="error-banner">
      <span>Cannot reach the engine: ${esc(error)}</span>
      <button data-action="retry">Retry</button>
    </div>`;
    }
    if (conflict) {
      return `<div class="banner conflict" data-role="conflict-banner">
      <span>This assessment changed on the server. Reload to continue.</span>
      <button data-action="reload">Reload</button>
    </div>`;
    }
    return "";
  }
  function header(session) {
    const { assessments, assessmentId, policy, saving } = session.state;
    const options = assessments.map(
      (a) => `<option value="${esc(a.id)}"${a.id === assessmentId ? " selected" : ""}>
          ${esc(a.name)}</option>`
    ).join("");
    const dirtyBadge = session.dirty || saving ? `<span class="save-indicator dirty" data-role="dirty">&#9679; saving</span>` : `<span class="save-indicator" data-role="dirty">saved</span>`;
    const policyButton = (value) => `<label><input type="radio" name="policy" value="${value}"${policy === value ? " checked" : ""}> ${value}</label>`;
    return `<header class="topbar">
    <h1>ctm2 self-evaluation</h1>
    <select data-role="assessment-picker">${options}</select>
    <span class="policy-toggle" data-role="policy-toggle">
      ${policyButton("strict")}${policyButton("lenient")}
    </span>
    ${dirtyBadge}
  </header>`;
  }
  function scoreboard(session) {
    const { scorecard, scorePending } = session.state;
    if (!scorecard) return `<section class="scoreboard"></section>`;
    const badges = scorecard.domains.map(
      (d) => `<span class="badge${scorePending ? " stale" : ""}" data-badge="${d.domain_id}">
          ${esc(d.domain_id)} <b>MIL ${d.achieved_mil}</b></span>`
    ).join("");
    const warnings = scorecard.warnings.map((w) => `<li class="warning">${esc(w)}</li>`).join("");
    return `<section class="scoreboard">
    <div class="badges" data-role="badges">${badges}</div>
    <div class="radar-thumb" data-role="radar-thumb"></div>
    ${warnings ? `<ul class="warnings">${warnings}</ul>` : ""}
  </section>`;
  }
  function selector(session, criterion) {
    const current = session.displayedState(criterion.id);
    const buttons = STATE_ORDER.map(
      (state) => `<button class="state-btn${state === current ? " selected" : ""}"
        data-criterion="${esc(criterion.id)}" data-state="${state}">
        ${STATE_LABELS[state]}</button>`
    ).join("");
    const dirty = criterion.id in session.state.draft ? `<span class="dirty-dot" title="unsaved">&#9679;</span>` : "";
    return `<div class="selector" role="radiogroup">${buttons}${dirty}</div>`;
  }
  function criterionRow(session, criterion) {
    const refs = criterion.refs.length ? `<span class="refs">${esc(criterion.refs.join("; "))}</span>` : "";
    return `<div class="criterion" data-criterion-row="${esc(criterion.id)}">
    <div class="crit-text">
      <code>${esc(criterion.id)}</code> ${esc(criterion.text)} ${refs}
    </div>
    ${selector(session, criterion)}
  </div>`;
  }
  function domainSection(session, domain) {
    const { scorecard, catalog } = session.state;
    const score = scorecard?.domains.find((d) => d.domain_id === domain.id);
    const badge = score ? `<span class="badge" data-domain-badge="${domain.id}">MIL ${score.achieved_mil}</span>` : "";
    const maxLevel = catalog?.max_level ?? 3;
    const groups = [];
    for (let level = 1; level <= maxLevel; level += 1) {
      const criteria = domain.criteria.filter((c) => c.level === level);
      if (criteria.length === 0) continue;
      groups.push(`<div class="level-group" data-level="${level}">
      <h3>MIL${level} <span class="count">(${criteria.length})</span></h3>
      ${criteria.map((c) => criterionRow(session, c)).join("")}
    </div>`);
    }
    return `<section class="domain" data-domain="${domain.id}">
    <header><h2>${esc(domain.id)} &middot; ${esc(domain.name)}</h2>${badge}</header>
    <p class="desc">${esc(domain.description)}</p>
    ${groups.join("")}
  </section>`;
  }
  function whatifPanel(session) {
    const { gap, staged, preview } = session.state;
    if (!gap) return "";
    const checklists = gap.domains.filter((d) => d.target_level !== null && d.blocking.length > 0).map((d) => {
      const rows = d.blocking.map(
        (b) => `<label class="gap-row">
              <input type="checkbox" data-stage="${esc(b.criterion_id)}"${b.criterion_id in staged ? " checked" : ""}>
              <code>${esc(b.criterion_id)}</code> ${esc(b.text)}
              <span class="state-chip ${b.state}">${STATE_LABELS[b.state]}</span>
            </label>`
      ).join("");
      return `<div class="gap-domain" data-gap-domain="${d.domain_id}">
        <h3>${esc(d.domain_id)}: MIL ${d.achieved_mil}, target ${d.target_level}</h3>
        ${rows}
      </div>`;
    }).join("");
    const deltas = preview ? Object.entries(preview.deltas).filter(([, delta]) => delta !== 0).map(([domainId, delta]) => {
      const before = preview.before.domains.find(
        (d) => d.domain_id === domainId
      );
      const after = preview.after.domains.find(
        (d) => d.domain_id === domainId
      );
      return `<div class="delta" data-delta="${domainId}">
            ${esc(domainId)} MIL ${before.achieved_mil} &rarr; ${after.achieved_mil}
            (${delta > 0 ? "+" : ""}${delta})</div>`;
    }).join("") || `<div class="delta none">No MIL changes</div>` : "";
    const stagedCount = Object.keys(staged).length;
    return `<section class="whatif" data-role="whatif">
    <h2>What-if explorer</h2>
    ${checklists || "<p>No blocking criteria anywhere: every domain is at the ceiling.</p>"}
    <div class="whatif-actions">
      <span data-role="staged-count">${stagedCount} staged</span>
      <button data-action="preview"${stagedCount ? "" : " disabled"}>Preview</button>
      <button data-action="apply"${stagedCount ? "" : " disabled"}>Apply</button>
      <button data-action="cancel">Cancel</button>
    </div>
    <div class="preview" data-role="preview">${deltas}</div>
  </section>`;
  }
  function renderApp(container2, session) {
    const { catalog } = session.state;
    const questionnaire = catalog ? catalog.domains.map((d) => domainSection(session, d)).join("") : "<p>No assessment loaded.</p>";
    container2.innerHTML = `
    ${banner(session)}
    ${header(session)}
    ${scoreboard(session)}
    ${whatifPanel(session)}
    <section class="questionnaire" data-role="questionnaire">${questionnaire}</section>
  `;
    const thumb = container2.querySelector('[data-role="radar-thumb"]');
    if (thumb && session.state.radarSvg) {
      thumb.innerHTML = session.state.radarSvg;
    }
  }
  function mountApp(container2, session) {
    container2.addEventListener("click", (event) => {
      const target = event.target.closest(
        "button[data-action], button.state-btn"
      );
      if (!target) return;
      if (target.classList.contains("state-btn")) {
        void session.setResponse(
          target.dataset.criterion,
          target.dataset.state
        );
        return;
      }
      switch (target.dataset.action) {
        case "retry":
          void session.start();
          break;
        case "reload":
          void session.reload();
          break;
        case "preview":
          void session.previewStaged();
          break;
        case "apply":
          void session.applyStaged();
          break;
        case "cancel":
          session.cancelStaged();
          break;
      }
    });
    container2.addEventListener("change", (event) => {
      const target = event.target;
      if (target.matches('[data-role="assessment-picker"]')) {
        void session.openAssessment(target.value);
        return;
      }
      if (target.matches('input[name="policy"]')) {
        void session.setPolicy(
          target.value
        );
        return;
      }
      if (target.matches("input[data-stage]")) {
        const input = target;
        const criterionId = input.dataset.stage;
        if (input.checked) session.stage(criterionId, "full");
        else session.unstage(criterionId);
      }
    });
    session.subscribe(() => renderApp(container2, session));
    renderApp(container2, session);
  }

  // src/app.ts
  var container = document.getElementById("app");
  if (container) {
    const session = new Session(new ApiClient());
    mountApp(container, session);
    void session.start();
  }
})();
