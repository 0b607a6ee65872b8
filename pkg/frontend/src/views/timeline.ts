/**
 * Chronological browsing: the backend returns year-month groups already
 * in ascending order and the view renders them exactly as given.
 */

import type { AppContext } from "../context.js";
import { el, replace } from "../dom.js";
import { monthLabel } from "../format.js";
import { t } from "../labels.js";
import { infoBanner, stateLink } from "./shared.js";

export async function renderTimeline(
  root: HTMLElement,
  ctx: AppContext,
  municipalityId: string,
): Promise<void> {
  const payload = await ctx.client.timeline(municipalityId);
  const groups = el("div", { class: "timeline" });
  for (const [yearMonth, minuteIds] of payload.groups) {
    const list = el("ul", {});
    for (const minuteId of minuteIds) {
      list.appendChild(el("li", {}, stateLink(ctx, { route: "minute", minuteId }, minuteId)));
    }
    groups.appendChild(
      el(
        "section",
        { class: "timeline-group", "data-month": yearMonth },
        el("h3", {}, monthLabel(yearMonth)),
        list,
      ),
    );
  }
  replace(
    root,
    el("h2", {}, t("timeline")),
    payload.groups.length > 0 ? groups : infoBanner(t("empty_store")),
  );
}
