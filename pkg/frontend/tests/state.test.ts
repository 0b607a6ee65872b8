import { describe, expect, it } from "vitest";

import {
  apiSearchQuery,
  canonicalQuery,
  clearFacets,
  emptyFacets,
  emptyQuery,
  encodeHash,
  parseHash,
  toggleFacet,
  FACET_DIMENSIONS,
  type QueryState,
  type Scope,
  type ViewState,
} from "../src/state.js";

function query(overrides: Partial<QueryState> = {}): QueryState {
  return { ...emptyQuery(), facets: emptyFacets(), ...overrides };
}

describe("hash round trips", () => {
  const cases: [string, ViewState][] = [
    ["#/", { route: "home" }],
    ["#/m/mun-covilha", { route: "municipality", municipalityId: "mun-covilha" }],
    ["#/m/mun-covilha/timeline", { route: "timeline", municipalityId: "mun-covilha" }],
    ["#/minute/min-000003", { route: "minute", minuteId: "min-000003" }],
    ["#/admin", { route: "admin" }],
    ["#/admin/review/min-000001", { route: "review", minuteId: "min-000001" }],
  ];

  it.each(cases)("%s", (hash, state) => {
    expect(parseHash(hash)).toEqual(state);
    expect(encodeHash(state)).toBe(hash);
  });

  it("keeps list query state in the URL", () => {
    const state: ViewState = {
      route: "list",
      municipalityId: "mun-covilha",
      query: query({
        scope: "minutes",
        text: "water",
        facets: { ...emptyFacets(), topic: ["t-budget", "t-culture"], party: ["PS"] },
        page: 3,
      }),
    };
    const hash = encodeHash(state);
    expect(hash).toBe(
      "#/m/mun-covilha/minutes?q=water&topic=t-budget&topic=t-culture&party=PS&page=3",
    );
    expect(parseHash(hash)).toEqual(state);
  });

  it("keeps search query state in the URL", () => {
    const state: ViewState = {
      route: "search",
      query: query({
        scope: "subjects",
        text: "health",
        dateFrom: "2025-01-01",
      }),
    };
    const hash = encodeHash(state);
    expect(hash).toBe("#/search?q=health&scope=subjects&date_from=2025-01-01");
    expect(parseHash(hash)).toEqual(state);
  });

  it("canonicalizes unsorted and duplicated facet values on parse", () => {
    const state = parseHash("#/search?topic=t-b&topic=t-a&topic=t-b");
    expect(state).not.toBeNull();
    if (state?.route !== "search") throw new Error("expected search route");
    expect(state.query.facets.topic).toEqual(["t-a", "t-b"]);
  });

  it("falls back to defaults for bad scope and page", () => {
    const state = parseHash("#/search?scope=bogus&page=zero&q=x");
    if (state?.route !== "search") throw new Error("expected search route");
    expect(state.query.scope).toBe("all");
    expect(state.query.page).toBe(1);
  });

  it("rejects unknown routes", () => {
    expect(parseHash("#/bogus")).toBeNull();
    expect(parseHash("#/m/x/unknown")).toBeNull();
    expect(parseHash("#/admin/review")).toBeNull();
  });

  it("round-trips url-encoded ids", () => {
    const state: ViewState = { route: "municipality", municipalityId: "mun açores/1" };
    expect(parseHash(encodeHash(state))).toEqual(state);
  });
});

describe("facet toggling", () => {
  it("adds, sorts, and removes values", () => {
    const base = query();
    const once = toggleFacet(base, "topic", "t-z");
    const twice = toggleFacet(once, "topic", "t-a");
    expect(twice.facets.topic).toEqual(["t-a", "t-z"]);
    const removed = toggleFacet(twice, "topic", "t-z");
    expect(removed.facets.topic).toEqual(["t-a"]);
    expect(base.facets.topic).toEqual([]); // inputs are not mutated
  });

  it("resets the page on any filter change", () => {
    const paged = query({ page: 4 });
    expect(toggleFacet(paged, "party", "PS").page).toBe(1);
    expect(clearFacets(paged).page).toBe(1);
  });

  it("clears every dimension", () => {
    let state = query();
    for (const dim of FACET_DIMENSIONS) state = toggleFacet(state, dim, "v");
    const cleared = clearFacets(state);
    for (const dim of FACET_DIMENSIONS) expect(cleared.facets[dim]).toEqual([]);
  });
});

describe("api query strings", () => {
  it("always names the scope on the global route", () => {
    expect(apiSearchQuery(query({ text: "health", scope: "subjects" }), "global")).toBe(
      "q=health&scope=subjects",
    );
    expect(apiSearchQuery(query({ text: "health" }), "global")).toBe("q=health&scope=all");
  });

  it("emits sorted pairs and omits defaults on the municipality route", () => {
    const state = query({
      scope: "minutes",
      facets: { ...emptyFacets(), topic: ["t-budget"], meeting_type: ["ordinary"] },
    });
    expect(apiSearchQuery(state, "municipality")).toBe("meeting_type=ordinary&topic=t-budget");
  });

  it("drops the municipality dimension on the municipality route only", () => {
    const state = query({ facets: { ...emptyFacets(), municipality: ["mun-x"] } });
    expect(apiSearchQuery(state, "municipality")).toBe("");
    expect(apiSearchQuery(state, "global")).toBe("municipality=mun-x&scope=all");
  });

  it("includes dates and page beyond one", () => {
    const state = query({ dateFrom: "2025-01-01", dateTo: "2025-02-01", page: 2 });
    expect(apiSearchQuery(state, "municipality")).toBe(
      "date_from=2025-01-01&date_to=2025-02-01&page=2",
    );
  });
});

// A small deterministic PRNG is enough to probe injectivity: distinct
// canonical states must never share a URL, and parsing must invert
// encoding exactly.
function mulberry32(seed: number): () => number {
  let a = seed;
  return () => {
    a |= 0;
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function randomQuery(rand: () => number): QueryState {
  const pick = <T>(xs: T[]): T => xs[Math.floor(rand() * xs.length)];
  const values = ["a", "b", "c c", "t-x", "João"];
  const facets = emptyFacets();
  for (const dim of FACET_DIMENSIONS) {
    const n = Math.floor(rand() * 3);
    for (let i = 0; i < n; i++) facets[dim].push(pick(values));
  }
  return canonicalQuery({
    text: pick(["", "health", "a b", "ação"]),
    scope: pick(["all", "minutes", "subjects"] as Scope[]),
    facets,
    dateFrom: pick(["", "2025-01-01"]),
    dateTo: pick(["", "2025-03-01"]),
    page: 1 + Math.floor(rand() * 3),
  });
}

describe("injectivity", () => {
  it("distinct search states never share a hash, and parse inverts encode", () => {
    const rand = mulberry32(20250814);
    const seen = new Map<string, string>();
    for (let i = 0; i < 400; i++) {
      const state: ViewState = { route: "search", query: randomQuery(rand) };
      const hash = encodeHash(state);
      const fingerprint = JSON.stringify(state);
      const prior = seen.get(hash);
      if (prior !== undefined) {
        expect(prior).toBe(fingerprint);
      } else {
        seen.set(hash, fingerprint);
      }
      expect(parseHash(hash)).toEqual(state);
    }
    expect(seen.size).toBeGreaterThan(100);
  });

  it("distinct states produce distinct api query strings", () => {
    const rand = mulberry32(99);
    const seen = new Map<string, string>();
    for (let i = 0; i < 400; i++) {
      const query = randomQuery(rand);
      const qs = apiSearchQuery(query, "global");
      const fingerprint = JSON.stringify(query);
      const prior = seen.get(qs);
      if (prior !== undefined) {
        expect(prior).toBe(fingerprint);
      } else {
        seen.set(qs, fingerprint);
      }
    }
  });
});
