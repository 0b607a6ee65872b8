/**
 * Typed client for the backend JSON API.
 *
 * The fetch implementation is injected so tests can substitute a mock;
 * the browser entry point passes window.fetch. Non-2xx responses throw
 * ApiError carrying the status and the decoded error body.
 */

import type {
  AdminMinute,
  ExtractionDraft,
  ExtractionPayload,
  MinutePayload,
  Municipality,
  OverviewPayload,
  PublishPayload,
  SearchPayload,
  SubscribePayload,
  TimelinePayload,
} from "./types.js";
import { apiSearchQuery, type QueryState } from "./state.js";

export interface ErrorBody {
  error: string;
  fields?: Record<string, string>;
  status?: string;
}

export class ApiError extends Error {
  status: number;
  body: ErrorBody;

  constructor(status: number, body: ErrorBody) {
    super(body.error || `request failed with status ${status}`);
    this.name = "ApiError";
    this.status = status;
    this.body = body;
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export interface ClientOptions {
  fetchImpl: FetchLike;
  baseUrl?: string;
}

export class ApiClient {
  private fetchImpl: FetchLike;
  private baseUrl: string;
  adminToken: string | null = null;

  constructor(options: ClientOptions) {
    this.fetchImpl = options.fetchImpl;
    this.baseUrl = options.baseUrl ?? "";
  }

  private async request<T>(
    method: string,
    path: string,
    options: { body?: unknown; admin?: boolean; signal?: AbortSignal } = {},
  ): Promise<T> {
    const headers: Record<string, string> = {};
    if (options.body !== undefined) headers["Content-Type"] = "application/json";
    if (options.admin) {
      headers["Authorization"] = `Bearer ${this.adminToken ?? ""}`;
    }
    const response = await this.fetchImpl(this.baseUrl + path, {
      method,
      headers,
      body: options.body === undefined ? undefined : JSON.stringify(options.body),
      signal: options.signal,
      credentials: "same-origin",
    });
    if (!response.ok) {
      let body: ErrorBody;
      try {
        body = (await response.json()) as ErrorBody;
      } catch {
        body = { error: `request failed with status ${response.status}` };
      }
      throw new ApiError(response.status, body);
    }
    return (await response.json()) as T;
  }

  municipalities(): Promise<Municipality[]> {
    return this.request("GET", "/api/municipalities");
  }

  overview(municipalityId: string): Promise<OverviewPayload> {
    return this.request("GET", `/api/municipalities/${encodeURIComponent(municipalityId)}/overview`);
  }

  timeline(municipalityId: string): Promise<TimelinePayload> {
    return this.request("GET", `/api/municipalities/${encodeURIComponent(municipalityId)}/timeline`);
  }

  municipalityMinutes(
    municipalityId: string,
    query: QueryState,
    signal?: AbortSignal,
  ): Promise<SearchPayload> {
    const qs = apiSearchQuery(query, "municipality");
    const path = `/api/municipalities/${encodeURIComponent(municipalityId)}/minutes`;
    return this.request("GET", qs ? `${path}?${qs}` : path, { signal });
  }

  search(query: QueryState, signal?: AbortSignal): Promise<SearchPayload> {
    const qs = apiSearchQuery(query, "global");
    return this.request("GET", qs ? `/api/search?${qs}` : "/api/search", { signal });
  }

  minute(minuteId: string): Promise<MinutePayload> {
    return this.request("GET", `/api/minutes/${encodeURIComponent(minuteId)}`);
  }

  async minuteRaw(minuteId: string, admin = false): Promise<string> {
    const headers: Record<string, string> = {};
    if (admin) headers["Authorization"] = `Bearer ${this.adminToken ?? ""}`;
    const response = await this.fetchImpl(
      `${this.baseUrl}/api/minutes/${encodeURIComponent(minuteId)}/raw`,
      { method: "GET", headers, credentials: "same-origin" },
    );
    if (!response.ok) {
      throw new ApiError(response.status, { error: `raw text unavailable (${response.status})` });
    }
    return response.text();
  }

  subscribe(email: string, municipalityIds: string[] = []): Promise<SubscribePayload> {
    return this.request("POST", "/api/newsletter/subscribe", {
      body: { email, municipality_ids: municipalityIds },
    });
  }

  access(password: string): Promise<{ gated: boolean }> {
    return this.request("POST", "/api/access", { body: { password } });
  }

  // Back-office.

  adminList(): Promise<{ minutes: AdminMinute[] }> {
    return this.request("GET", "/api/admin/minutes", { admin: true });
  }

  adminUpload(body: {
    municipality: string;
    text: string;
    source_filename: string;
    extractor: string;
  }): Promise<{ minute_id: string; status: string }> {
    return this.request("POST", "/api/admin/minutes", { body, admin: true });
  }

  adminExtraction(minuteId: string): Promise<ExtractionPayload> {
    return this.request(
      "GET",
      `/api/admin/minutes/${encodeURIComponent(minuteId)}/extraction`,
      { admin: true },
    );
  }

  adminPutExtraction(
    minuteId: string,
    draft: ExtractionDraft,
  ): Promise<{ minute_id: string; preview: ExtractionPayload["preview"] }> {
    return this.request(
      "PUT",
      `/api/admin/minutes/${encodeURIComponent(minuteId)}/extraction`,
      { body: draft, admin: true },
    );
  }

  adminValidate(
    minuteId: string,
    ackUnresolved: boolean,
  ): Promise<{ minute_id: string; status: string }> {
    return this.request(
      "POST",
      `/api/admin/minutes/${encodeURIComponent(minuteId)}/validate`,
      { body: { ack_unresolved: ackUnresolved }, admin: true },
    );
  }

  adminPublish(minuteId: string): Promise<PublishPayload> {
    return this.request(
      "POST",
      `/api/admin/minutes/${encodeURIComponent(minuteId)}/publish`,
      { admin: true },
    );
  }
}
