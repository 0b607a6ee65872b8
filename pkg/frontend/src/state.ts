/**
 * View state and its URL encoding.
 *
 * The hash fragment is the single source of truth for what the page
 * shows: route, query text, facet selections, dates, page. Encoding is
 * canonical (fixed param order, facet values sorted and deduplicated,
 * defaults omitted), so two different selections always produce two
 * different URLs and every state survives a round trip through the
 * address bar.
 */

export const FACET_DIMENSIONS = [
  "municipality",
  "topic",
  "party",
  "participant",
  "meeting_type",
] as const;

export type FacetDimension = (typeof FACET_DIMENSIONS)[number];

export type FacetSelections = Record<FacetDimension, string[]>;

export type Scope = "all" | "minutes" | "subjects";

export interface QueryState {
  text: string;
  scope: Scope;
  facets: FacetSelections;
  dateFrom: string;
  dateTo: string;
  page: number;
}

export type ViewState =
  | { route: "home" }
  | { route: "municipality"; municipalityId: string }
  | { route: "list"; municipalityId: string; query: QueryState }
  | { route: "timeline"; municipalityId: string }
  | { route: "minute"; minuteId: string }
  | { route: "search"; query: QueryState }
  | { route: "admin" }
  | { route: "review"; minuteId: string };

export function emptyFacets(): FacetSelections {
  return {
    municipality: [],
    topic: [],
    party: [],
    participant: [],
    meeting_type: [],
  };
}

export function emptyQuery(scope: Scope = "all"): QueryState {
  return { text: "", scope, facets: emptyFacets(), dateFrom: "", dateTo: "", page: 1 };
}

function canonicalValues(values: string[]): string[] {
  return [...new Set(values)].sort();
}

export function canonicalQuery(query: QueryState): QueryState {
  const facets = emptyFacets();
  for (const dim of FACET_DIMENSIONS) {
    facets[dim] = canonicalValues(query.facets[dim]);
  }
  return {
    text: query.text,
    scope: query.scope,
    facets,
    dateFrom: query.dateFrom,
    dateTo: query.dateTo,
    page: Number.isInteger(query.page) && query.page >= 1 ? query.page : 1,
  };
}

/** Toggle one facet value; always returns a canonical copy. */
export function toggleFacet(
  query: QueryState,
  dimension: FacetDimension,
  value: string,
): QueryState {
  const next = canonicalQuery(query);
  const current = next.facets[dimension];
  next.facets[dimension] = current.includes(value)
    ? current.filter((v) => v !== value)
    : [...current, value].sort();
  next.page = 1; // a changed filter restarts pagination
  return next;
}

export function clearFacets(query: QueryState): QueryState {
  const next = canonicalQuery(query);
  next.facets = emptyFacets();
  next.page = 1;
  return next;
}

function isScope(value: string): value is Scope {
  return value === "all" || value === "minutes" || value === "subjects";
}

function queryParams(query: QueryState, defaultScope: Scope): URLSearchParams {
  const canonical = canonicalQuery(query);
  const params = new URLSearchParams();
  if (canonical.text) params.set("q", canonical.text);
  if (canonical.scope !== defaultScope) params.set("scope", canonical.scope);
  for (const dim of FACET_DIMENSIONS) {
    for (const value of canonical.facets[dim]) params.append(dim, value);
  }
  if (canonical.dateFrom) params.set("date_from", canonical.dateFrom);
  if (canonical.dateTo) params.set("date_to", canonical.dateTo);
  if (canonical.page !== 1) params.set("page", String(canonical.page));
  return params;
}

function parseQueryParams(params: URLSearchParams, defaultScope: Scope): QueryState {
  const facets = emptyFacets();
  for (const dim of FACET_DIMENSIONS) {
    facets[dim] = canonicalValues(params.getAll(dim));
  }
  const scopeRaw = params.get("scope") ?? defaultScope;
  const page = parseInt(params.get("page") ?? "1", 10);
  return {
    text: params.get("q") ?? "",
    scope: isScope(scopeRaw) ? scopeRaw : defaultScope,
    facets,
    dateFrom: params.get("date_from") ?? "",
    dateTo: params.get("date_to") ?? "",
    page: Number.isInteger(page) && page >= 1 ? page : 1,
  };
}

export function encodeHash(state: ViewState): string {
  switch (state.route) {
    case "home":
      return "#/";
    case "municipality":
      return `#/m/${encodeURIComponent(state.municipalityId)}`;
    case "timeline":
      return `#/m/${encodeURIComponent(state.municipalityId)}/timeline`;
    case "list": {
      const params = queryParams(state.query, "minutes").toString();
      const base = `#/m/${encodeURIComponent(state.municipalityId)}/minutes`;
      return params ? `${base}?${params}` : base;
    }
    case "minute":
      return `#/minute/${encodeURIComponent(state.minuteId)}`;
    case "search": {
      const params = queryParams(state.query, "all").toString();
      return params ? `#/search?${params}` : "#/search";
    }
    case "admin":
      return "#/admin";
    case "review":
      return `#/admin/review/${encodeURIComponent(state.minuteId)}`;
  }
}

export function parseHash(hash: string): ViewState | null {
  const body = hash.startsWith("#") ? hash.slice(1) : hash;
  const queryAt = body.indexOf("?");
  const path = queryAt === -1 ? body : body.slice(0, queryAt);
  const params = new URLSearchParams(queryAt === -1 ? "" : body.slice(queryAt + 1));
  const segments = path.split("/").filter((s) => s.length > 0).map(decodeURIComponent);

  if (segments.length === 0) return { route: "home" };
  if (segments[0] === "m" && segments.length === 2) {
    return { route: "municipality", municipalityId: segments[1] };
  }
  if (segments[0] === "m" && segments.length === 3 && segments[2] === "timeline") {
    return { route: "timeline", municipalityId: segments[1] };
  }
  if (segments[0] === "m" && segments.length === 3 && segments[2] === "minutes") {
    return {
      route: "list",
      municipalityId: segments[1],
      query: parseQueryParams(params, "minutes"),
    };
  }
  if (segments[0] === "minute" && segments.length === 2) {
    return { route: "minute", minuteId: segments[1] };
  }
  if (segments[0] === "search" && segments.length === 1) {
    return { route: "search", query: parseQueryParams(params, "all") };
  }
  if (segments[0] === "admin" && segments.length === 1) return { route: "admin" };
  if (segments[0] === "admin" && segments.length === 3 && segments[1] === "review") {
    return { route: "review", minuteId: segments[2] };
  }
  return null;
}

/**
 * Query string for the search endpoints, in canonical sorted-pair order.
 *
 * The global route always names its scope; the per-municipality route
 * never does (the path already pins municipality and the backend scopes
 * it to minutes).
 */
export function apiSearchQuery(query: QueryState, kind: "global" | "municipality"): string {
  const canonical = canonicalQuery(query);
  const pairs: [string, string][] = [];
  if (canonical.text) pairs.push(["q", canonical.text]);
  if (kind === "global") pairs.push(["scope", canonical.scope]);
  for (const dim of FACET_DIMENSIONS) {
    if (kind === "municipality" && dim === "municipality") continue;
    for (const value of canonical.facets[dim]) pairs.push([dim, value]);
  }
  if (canonical.dateFrom) pairs.push(["date_from", canonical.dateFrom]);
  if (canonical.dateTo) pairs.push(["date_to", canonical.dateTo]);
  if (canonical.page !== 1) pairs.push(["page", String(canonical.page)]);
  pairs.sort(([ka, va], [kb, vb]) => (ka === kb ? va.localeCompare(vb) : ka.localeCompare(kb)));
  const params = new URLSearchParams();
  for (const [key, value] of pairs) params.append(key, value);
  return params.toString();
}
