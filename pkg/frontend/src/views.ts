// DOM rendering. Views are a pure projection of SessionState; all event
// handling goes through one delegated listener pair installed by mountApp.

import { Session } from "./state";
import {
  STATE_LABELS,
  STATE_ORDER,
  type CriterionDoc,
  type DomainDoc,
  type ImplementationState,
} from "./types";

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function banner(session: Session): string {
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

function header(session: Session): string {
  const { assessments, assessmentId, policy, saving } = session.state;
  const options = assessments
    .map(
      (a) =>
        `<option value="${esc(a.id)}"${a.id === assessmentId ? " selected" : ""}>
          ${esc(a.name)}</option>`,
    )
    .join("");
  const dirtyBadge = session.dirty || saving
    ? `<span class="save-indicator dirty" data-role="dirty">&#9679; saving</span>`
    : `<span class="save-indicator" data-role="dirty">saved</span>`;
  const policyButton = (value: string) =>
    `<label><input type="radio" name="policy" value="${value}"${
      policy === value ? " checked" : ""
    }> ${value}</label>`;
  return `<header class="topbar">
    <h1>ctm2 self-evaluation</h1>
    <select data-role="assessment-picker">${options}</select>
    <span class="policy-toggle" data-role="policy-toggle">
      ${policyButton("strict")}${policyButton("lenient")}
    </span>
    ${dirtyBadge}
  </header>`;
}

function scoreboard(session: Session): string {
  const { scorecard, scorePending } = session.state;
  if (!scorecard) return `<section class="scoreboard"></section>`;
  const badges = scorecard.domains
    .map(
      (d) =>
        `<span class="badge${scorePending ? " stale" : ""}" data-badge="${d.domain_id}">
          ${esc(d.domain_id)} <b>MIL ${d.achieved_mil}</b></span>`,
    )
    .join("");
  const warnings = scorecard.warnings
    .map((w) => `<li class="warning">${esc(w)}</li>`)
    .join("");
  return `<section class="scoreboard">
    <div class="badges" data-role="badges">${badges}</div>
    <div class="radar-thumb" data-role="radar-thumb"></div>
    ${warnings ? `<ul class="warnings">${warnings}</ul>` : ""}
  </section>`;
}

function selector(session: Session, criterion: CriterionDoc): string {
  const current = session.displayedState(criterion.id);
  const buttons = STATE_ORDER.map(
    (state) =>
      `<button class="state-btn${state === current ? " selected" : ""}"
        data-criterion="${esc(criterion.id)}" data-state="${state}">
        ${STATE_LABELS[state]}</button>`,
  ).join("");
  const dirty = criterion.id in session.state.draft
    ? `<span class="dirty-dot" title="unsaved">&#9679;</span>`
    : "";
  return `<div class="selector" role="radiogroup">${buttons}${dirty}</div>`;
}

function criterionRow(session: Session, criterion: CriterionDoc): string {
  const refs = criterion.refs.length
    ? `<span class="refs">${esc(criterion.refs.join("; "))}</span>`
    : "";
  return `<div class="criterion" data-criterion-row="${esc(criterion.id)}">
    <div class="crit-text">
      <code>${esc(criterion.id)}</code> ${esc(criterion.text)} ${refs}
    </div>
    ${selector(session, criterion)}
  </div>`;
}

function domainSection(session: Session, domain: DomainDoc): string {
  const { scorecard, catalog } = session.state;
  const score = scorecard?.domains.find((d) => d.domain_id === domain.id);
  const badge = score
    ? `<span class="badge" data-domain-badge="${domain.id}">MIL ${score.achieved_mil}</span>`
    : "";
  const maxLevel = catalog?.max_level ?? 3;
  const groups: string[] = [];
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

function whatifPanel(session: Session): string {
  const { gap, staged, preview } = session.state;
  if (!gap) return "";
  const checklists = gap.domains
    .filter((d) => d.target_level !== null && d.blocking.length > 0)
    .map((d) => {
      const rows = d.blocking
        .map(
          (b) =>
            `<label class="gap-row">
              <input type="checkbox" data-stage="${esc(b.criterion_id)}"${
                b.criterion_id in staged ? " checked" : ""
              }>
              <code>${esc(b.criterion_id)}</code> ${esc(b.text)}
              <span class="state-chip ${b.state}">${STATE_LABELS[b.state]}</span>
            </label>`,
        )
        .join("");
      return `<div class="gap-domain" data-gap-domain="${d.domain_id}">
        <h3>${esc(d.domain_id)}: MIL ${d.achieved_mil}, target ${d.target_level}</h3>
        ${rows}
      </div>`;
    })
    .join("");
  const deltas = preview
    ? Object.entries(preview.deltas)
        .filter(([, delta]) => delta !== 0)
        .map(([domainId, delta]) => {
          const before = preview.before.domains.find(
            (d) => d.domain_id === domainId,
          )!;
          const after = preview.after.domains.find(
            (d) => d.domain_id === domainId,
          )!;
          return `<div class="delta" data-delta="${domainId}">
            ${esc(domainId)} MIL ${before.achieved_mil} &rarr; ${after.achieved_mil}
            (${delta > 0 ? "+" : ""}${delta})</div>`;
        })
        .join("") || `<div class="delta none">No MIL changes</div>`
    : "";
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

export function renderApp(container: HTMLElement, session: Session): void {
  const { catalog } = session.state;
  const questionnaire = catalog
    ? catalog.domains.map((d) => domainSection(session, d)).join("")
    : "<p>No assessment loaded.</p>";
  container.innerHTML = `
    ${banner(session)}
    ${header(session)}
    ${scoreboard(session)}
    ${whatifPanel(session)}
    <section class="questionnaire" data-role="questionnaire">${questionnaire}</section>
  `;
  // The radar thumbnail is the engine-rendered SVG, inserted verbatim.
  const thumb = container.querySelector<HTMLElement>('[data-role="radar-thumb"]');
  if (thumb && session.state.radarSvg) {
    thumb.innerHTML = session.state.radarSvg;
  }
}

export function mountApp(container: HTMLElement, session: Session): void {
  container.addEventListener("click", (event) => {
    const target = (event.target as HTMLElement).closest<HTMLElement>(
      "button[data-action], button.state-btn",
    );
    if (!target) return;
    if (target.classList.contains("state-btn")) {
      void session.setResponse(
        target.dataset.criterion as string,
        target.dataset.state as ImplementationState,
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
  container.addEventListener("change", (event) => {
    const target = event.target as HTMLElement;
    if (target.matches('[data-role="assessment-picker"]')) {
      void session.openAssessment((target as HTMLSelectElement).value);
      return;
    }
    if (target.matches('input[name="policy"]')) {
      void session.setPolicy(
        (target as HTMLInputElement).value as "strict" | "lenient",
      );
      return;
    }
    if (target.matches("input[data-stage]")) {
      const input = target as HTMLInputElement;
      const criterionId = input.dataset.stage as string;
      if (input.checked) session.stage(criterionId, "full");
      else session.unstage(criterionId);
    }
  });
  session.subscribe(() => renderApp(container, session));
  renderApp(container, session);
}
