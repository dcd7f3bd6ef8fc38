// Thin typed client for the review service. The fetch function is
// injectable so tests can run against an in-memory server.

import {
  AnnotationRecord,
  ConcordanceInstancePayload,
  EntryListing,
  EntryPayload,
  KappaReportPayload,
  PrecisionReportPayload,
  SessionInfo,
} from './types.js';

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
    private readonly base: string = '',
  ) {}

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.fetchImpl(this.base + path);
    const body = await response.json();
    if (!response.ok) {
      throw new ApiError(response.status, body.error ?? `GET ${path} failed`);
    }
    return body as T;
  }

  session(): Promise<SessionInfo> {
    return this.getJson('/session');
  }

  entries(annotator: string, status: string): Promise<EntryListing> {
    const query = new URLSearchParams({ annotator, status });
    return this.getJson(`/entries?${query}`);
  }

  entry(entryId: string): Promise<EntryPayload> {
    return this.getJson(`/entries/${entryId}`);
  }

  async concordance(entryId: string): Promise<ConcordanceInstancePayload[]> {
    const body = await this.getJson<{ instances: ConcordanceInstancePayload[] }>(
      `/entries/${entryId}/concordance`,
    );
    return body.instances;
  }

  async annotate(entryId: string, record: AnnotationRecord): Promise<{ flagged: boolean }> {
    const response = await this.fetchImpl(`${this.base}/entries/${entryId}/annotation`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(record),
    });
    const body = await response.json();
    if (!response.ok) {
      throw new ApiError(response.status, body.error ?? 'annotation rejected');
    }
    return { flagged: Boolean(body.flagged) };
  }

  precisionReport(): Promise<PrecisionReportPayload> {
    return this.getJson('/report/precision');
  }

  kappaReport(): Promise<KappaReportPayload> {
    return this.getJson('/report/kappa');
  }
}
