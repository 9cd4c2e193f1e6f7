// What-if panel contract: server-side preview without persistence,
// local-only cancel, commit via PATCH, conflict prompt on 409
// (acceptance criterion 11).

import { describe, expect, it } from "vitest";

import { fixtures } from "./mock";
import { bootApp, click, setChecked, text } from "./helpers";

const BLOCKERS = ["ARCH.3.9", "ARCH.3.10", "ARCH.3.11", "ARCH.3.12"];

describe("what-if panel", () => {
  it("lists the gap checklist from the engine's gap report", async () => {
    const { container } = await bootApp();
    const archPanel = container.querySelector('[data-gap-domain="ARCH"]')!;
    const ids = [...archPanel.querySelectorAll("input[data-stage]")].map(
      (el) => el.getAttribute("data-stage"),
    );
    expect(ids!.sort()).toEqual([...BLOCKERS].sort());
    expect(archPanel.querySelector("h3")!.textContent).toContain(
      "ARCH: MIL 2, target 3",
    );
  });

  it("staging all ARCH blockers previews MIL 2 to 3 without persisting", async () => {
    const { mock, session, container } = await bootApp();
    const before = structuredClone(mock.assessment);

    for (const criterionId of BLOCKERS) {
      setChecked(container, `input[data-stage="${criterionId}"]`, true);
    }
    expect(text(container, '[data-role="staged-count"]')).toBe("4 staged");

    const patchesBefore = mock.count("PATCH", "/responses");
    click(container, 'button[data-action="preview"]');
    await session.idle();

    expect(mock.count("POST", "/whatif")).toBe(1);
    const whatifCall = mock.calls.find((c) => c.method === "POST");
    expect(whatifCall!.body).toEqual(
      Object.fromEntries(BLOCKERS.map((id) => [id, "full"])),
    );
    expect(text(container, '[data-delta="ARCH"]')).toContain("MIL 2 → 3");

    // nothing persisted: no PATCH went out and a refetch sees the old state
    expect(mock.count("PATCH", "/responses")).toBe(patchesBefore);
    const serverCopy = JSON.parse(
      await (await mock.fetch("/api/assessments/powercyber")).text(),
    );
    expect(serverCopy).toEqual(before);
  });

  it("cancel clears staging locally and leaves the server untouched", async () => {
    const { mock, session, container } = await bootApp();
    const before = structuredClone(mock.assessment);
    for (const criterionId of BLOCKERS) {
      setChecked(container, `input[data-stage="${criterionId}"]`, true);
    }
    const callsBefore = mock.calls.length;

    click(container, 'button[data-action="cancel"]');
    await session.idle();

    expect(Object.keys(session.state.staged)).toHaveLength(0);
    expect(text(container, '[data-role="staged-count"]')).toBe("0 staged");
    expect(mock.calls.length).toBe(callsBefore); // no network traffic at all
    const serverCopy = JSON.parse(
      await (await mock.fetch("/api/assessments/powercyber")).text(),
    );
    expect(serverCopy).toEqual(before);
  });

  it("previewing an empty staging shows zero deltas", async () => {
    const { session, container } = await bootApp();
    await session.previewStaged();
    await session.idle();
    expect(text(container, '[data-role="preview"]')).toBe("No MIL changes");
  });

  it("apply commits the staged changes with one PATCH and refreshes", async () => {
    const { mock, session, container } = await bootApp();
    for (const criterionId of BLOCKERS) {
      setChecked(container, `input[data-stage="${criterionId}"]`, true);
    }
    const patchesBefore = mock.count("PATCH", "/responses");

    click(container, 'button[data-action="apply"]');
    await session.idle();

    expect(mock.count("PATCH", "/responses") - patchesBefore).toBe(1);
    for (const criterionId of BLOCKERS) {
      expect(mock.assessment.responses[criterionId]).toBe("full");
    }
    expect(Object.keys(session.state.staged)).toHaveLength(0);
    const engineArch = fixtures.scoreAfterAll.domains.find(
      (d) => d.domain_id === "ARCH",
    )!;
    expect(text(container, `[data-badge="ARCH"]`)).toBe(
      `ARCH MIL ${engineArch.achieved_mil}`,
    );
  });

  it("prompts to reload when the server copy moved on", async () => {
    const { mock, session, container } = await bootApp();
    // someone else saved meanwhile
    mock.assessment = { ...mock.assessment, modified: "2031-01-01T00:00:00Z" };

    click(container, '.state-btn[data-criterion="ARCH.3.9"][data-state="full"]');
    await session.idle();

    expect(session.state.conflict).toBe(true);
    expect(container.querySelector('[data-role="conflict-banner"]')).not.toBeNull();

    click(container, 'button[data-action="reload"]');
    await session.idle();
    expect(session.state.conflict).toBe(false);
    expect(session.state.assessment!.modified).toBe("2031-01-01T00:00:00Z");
  });
});
