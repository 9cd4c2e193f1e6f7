// Thin typed client over the /api routes. fetch is injectable so the
// contract tests can count and stub network calls.

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

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function raiseFor(response: Response): Promise<never> {
  let code = "http_error";
  let message = `${response.status} ${response.statusText}`;
  try {
    const body = await response.json();
    if (body && body.error) {
      code = body.error.code;
      message = body.error.message;
    }
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ApiError(response.status, code, message);
}

export class ApiClient {
  constructor(
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
    private base: string = "",
  ) {}

  private async json<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.base + path, init);
    if (!response.ok) await raiseFor(response);
    return (await response.json()) as T;
  }

  listCatalogs(): Promise<CatalogSummary[]> {
    return this.json("/api/catalogs");
  }

  getCatalog(id: string): Promise<CatalogDoc> {
    return this.json(`/api/catalogs/${id}`);
  }

  listAssessments(): Promise<AssessmentSummary[]> {
    return this.json("/api/assessments");
  }

  getAssessment(id: string): Promise<AssessmentDoc> {
    return this.json(`/api/assessments/${id}`);
  }

  // expectedModified enables optimistic concurrency: the server answers
  // 409 when someone else saved in between.
  patchResponses(
    id: string,
    changes: Record<string, ImplementationState>,
    expectedModified?: string,
  ): Promise<AssessmentDoc> {
    const headers: Record<string, string> = {
      "Content-Type": "application/json",
    };
    if (expectedModified) headers["X-Expected-Modified"] = expectedModified;
    return this.json(`/api/assessments/${id}/responses`, {
      method: "PATCH",
      headers,
      body: JSON.stringify(changes),
    });
  }

  getScore(id: string, policy: Policy): Promise<ScorecardDoc> {
    return this.json(`/api/assessments/${id}/score?policy=${policy}`);
  }

  getGap(id: string, policy: Policy): Promise<GapReportDoc> {
    return this.json(`/api/assessments/${id}/gap?policy=${policy}`);
  }

  whatIf(
    id: string,
    changes: Record<string, ImplementationState>,
    policy: Policy,
  ): Promise<WhatIfDoc> {
    return this.json(`/api/assessments/${id}/whatif?policy=${policy}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(changes),
    });
  }

  async radarSvg(ids: string[], policy: Policy): Promise<string> {
    const response = await this.fetchImpl(
      `${this.base}/api/radar?ids=${ids.join(",")}&policy=${policy}&format=svg`,
    );
    if (!response.ok) await raiseFor(response);
    return await response.text();
  }
}
