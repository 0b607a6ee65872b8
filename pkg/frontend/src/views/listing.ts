/**
 * Faceted list of a municipality's minutes.
 *
 * The facet panels are drawn purely from the payload's facet_counts:
 * every number shown is the backend's count for the current selection
 * state (the counting semantics, including the own-dimension exclusion,
 * live server-side). Toggling a value updates the URL, which re-queries
 * and redraws panels and results.
 */

import type { AppContext } from "../context.js";
import { el, replace } from "../dom.js";
import { renderSnippet } from "../highlight.js";
import { t } from "../labels.js";
import { dimensionLabel } from "../format.js";
import {
  clearFacets,
  toggleFacet,
  type FacetDimension,
  type QueryState,
} from "../state.js";
import type { OverviewPayload, SearchPayload } from "../types.js";
import { infoBanner, stateLink } from "./shared.js";

const PANEL_DIMENSIONS: FacetDimension[] = ["topic", "party", "participant", "meeting_type"];

function labelMaps(overview: OverviewPayload): Map<string, string> {
  const labels = new Map<string, string>();
  for (const group of overview.topics) labels.set(group.topic.id, group.topic.label);
  for (const member of overview.executive_members) labels.set(member.id, member.full_name);
  return labels;
}

function facetPanel(
  ctx: AppContext,
  municipalityId: string,
  query: QueryState,
  dimension: FacetDimension,
  counts: Record<string, number>,
  labels: Map<string, string>,
): HTMLElement {
  const selected = query.facets[dimension];
  // Selected values missing from the payload still need a row so they
  // can be unchecked; they get no count because none was returned.
  const values = [...new Set([...Object.keys(counts), ...selected])].sort();
  const list = el("ul", {});
  for (const value of values) {
    const checkbox = el("input", { type: "checkbox", "data-value": value });
    checkbox.checked = selected.includes(value);
    checkbox.addEventListener("change", () => {
      ctx.navigate({
        route: "list",
        municipalityId,
        query: toggleFacet(query, dimension, value),
      });
    });
    const label = el(
      "label",
      {},
      checkbox,
      el("span", { class: "facet-label" }, labels.get(value) ?? value),
    );
    const row = el("li", {}, label);
    if (value in counts) {
      row.appendChild(
        el(
          "span",
          { class: "facet-count", "data-dimension": dimension, "data-value": value },
          String(counts[value]),
        ),
      );
    }
    list.appendChild(row);
  }
  return el(
    "section",
    { class: "facet-panel", "data-dimension": dimension },
    el("h4", {}, dimensionLabel(dimension)),
    list,
  );
}

function resultsList(ctx: AppContext, payload: SearchPayload): HTMLElement {
  if (payload.hits.length === 0) return infoBanner(t("no_results"));
  const list = el("ol", { class: "hits" });
  for (const hit of payload.hits) {
    const snippet = el("p", { class: "snippet" });
    snippet.appendChild(renderSnippet(hit.snippet));
    list.appendChild(
      el(
        "li",
        { class: "hit", "data-unit": hit.unit_id },
        el(
          "h4",
          {},
          stateLink(ctx, { route: "minute", minuteId: hit.minute_id }, hit.title),
        ),
        el("p", { class: "meta" }, `${hit.meeting_date} · ${hit.kind}`),
        snippet,
      ),
    );
  }
  return list;
}

export async function renderListing(
  root: HTMLElement,
  ctx: AppContext,
  municipalityId: string,
  query: QueryState,
): Promise<void> {
  const overviewPromise = ctx.client.overview(municipalityId);
  const payload = await ctx.listGate.run((signal) =>
    ctx.client.municipalityMinutes(municipalityId, query, signal),
  );
  if (payload === null) return; // a newer query superseded this one
  const overview = await overviewPromise;
  const labels = labelMaps(overview);

  const searchInput = el("input", {
    type: "search",
    value: query.text,
    placeholder: t("search_placeholder"),
    "aria-label": t("search_heading"),
  });
  const searchForm = el(
    "form",
    { class: "search-box" },
    searchInput,
    el("button", { type: "submit" }, t("search_button")),
  );
  searchForm.addEventListener("submit", (event) => {
    event.preventDefault();
    ctx.navigate({
      route: "list",
      municipalityId,
      query: { ...query, text: searchInput.value.trim(), page: 1 },
    });
  });

  const panels = el("aside", { class: "facets" }, el("h3", {}, t("filters")));
  const anySelected = PANEL_DIMENSIONS.some((dim) => query.facets[dim].length > 0);
  if (anySelected) {
    const clearButton = el("button", { type: "button", class: "clear-facets" }, t("clear_filters"));
    clearButton.addEventListener("click", () => {
      ctx.navigate({ route: "list", municipalityId, query: clearFacets(query) });
    });
    panels.appendChild(clearButton);
  }
  for (const dimension of PANEL_DIMENSIONS) {
    panels.appendChild(
      facetPanel(
        ctx,
        municipalityId,
        query,
        dimension,
        payload.facet_counts[dimension] ?? {},
        labels,
      ),
    );
  }

  const results = el(
    "section",
    { class: "results" },
    el("p", { class: "total" }, `${payload.total} ${t("results")}`),
    resultsList(ctx, payload),
  );

  replace(
    root,
    el("h2", {}, overview.municipality.name),
    searchForm,
    el("div", { class: "listing" }, panels, results),
  );
}
