/**
 * Global search results: hits rendered in the order the API ranked
 * them, snippets with the match markers turned into highlights.
 */

import type { AppContext } from "../context.js";
import { el, replace } from "../dom.js";
import { renderSnippet } from "../highlight.js";
import { t } from "../labels.js";
import { FACET_DIMENSIONS, type QueryState, type Scope } from "../state.js";
import type { SearchPayload } from "../types.js";
import { infoBanner, stateLink } from "./shared.js";

function hasCriteria(query: QueryState): boolean {
  return (
    query.text.length > 0 ||
    FACET_DIMENSIONS.some((dim) => query.facets[dim].length > 0) ||
    query.dateFrom.length > 0 ||
    query.dateTo.length > 0
  );
}

function searchForm(ctx: AppContext, query: QueryState): HTMLElement {
  const input = el("input", {
    type: "search",
    value: query.text,
    placeholder: t("search_placeholder"),
    "aria-label": t("search_heading"),
  });
  const scope = el("select", {});
  for (const value of ["all", "minutes", "subjects"] as const) {
    const option = el("option", { value }, t(`scope_${value}`));
    if (value === query.scope) option.setAttribute("selected", "selected");
    scope.appendChild(option);
  }
  const form = el(
    "form",
    { class: "search-box" },
    input,
    scope,
    el("button", { type: "submit" }, t("search_button")),
  );
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    ctx.navigate({
      route: "search",
      query: { ...query, text: input.value.trim(), scope: scope.value as Scope, page: 1 },
    });
  });
  return form;
}

function hitsSection(ctx: AppContext, query: QueryState, payload: SearchPayload): HTMLElement {
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
          " ",
          el("span", { class: "chip kind" }, hit.kind),
        ),
        el("p", { class: "meta" }, `${hit.municipality_id} · ${hit.meeting_date}`),
        snippet,
      ),
    );
  }
  const pager = el("p", { class: "pager" });
  const previous = el("button", { type: "button", class: "prev" }, "<");
  const next = el("button", { type: "button", class: "next" }, ">");
  previous.disabled = payload.page <= 1;
  next.disabled = payload.page * payload.page_size >= payload.total;
  previous.addEventListener("click", () =>
    ctx.navigate({ route: "search", query: { ...query, page: payload.page - 1 } }),
  );
  next.addEventListener("click", () =>
    ctx.navigate({ route: "search", query: { ...query, page: payload.page + 1 } }),
  );
  pager.append(previous, ` ${payload.page} `, next);

  return el(
    "section",
    { class: "results" },
    el("p", { class: "total" }, `${payload.total} ${t("results")}`),
    list,
    pager,
  );
}

export async function renderResults(
  root: HTMLElement,
  ctx: AppContext,
  query: QueryState,
): Promise<void> {
  if (!hasCriteria(query)) {
    replace(root, el("h2", {}, t("search_button")), searchForm(ctx, query), infoBanner(t("search_prompt")));
    return;
  }
  const payload = await ctx.searchGate.run((signal) => ctx.client.search(query, signal));
  if (payload === null) return; // superseded by a newer search
  replace(
    root,
    el("h2", {}, t("search_button")),
    searchForm(ctx, query),
    hitsSection(ctx, query, payload),
  );
}
