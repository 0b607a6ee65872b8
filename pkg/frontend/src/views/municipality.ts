/**
 * Municipality overview: recent minutes, executive members, and the
 * published minutes grouped by topic, plus entry points into the
 * faceted list and the timeline.
 */

import type { AppContext } from "../context.js";
import { el, replace } from "../dom.js";
import { t } from "../labels.js";
import { emptyQuery } from "../state.js";
import { stateLink } from "./shared.js";

export async function renderMunicipality(
  root: HTMLElement,
  ctx: AppContext,
  municipalityId: string,
): Promise<void> {
  const overview = await ctx.client.overview(municipalityId);

  const recent = el("ul", { class: "recent-minutes" });
  for (const m of overview.recent_minutes) {
    recent.appendChild(
      el(
        "li",
        {},
        stateLink(ctx, { route: "minute", minuteId: m.id }, m.meeting_date ?? m.id),
        ` · ${m.meeting_type ?? "?"} · ${m.subjects} ${t("subjects")}`,
      ),
    );
  }

  const members = el("ul", { class: "members" });
  for (const p of overview.executive_members) {
    const parts = [p.party, p.role].filter((x): x is string => x !== null);
    members.appendChild(
      el("li", {}, el("strong", {}, p.full_name), parts.length ? ` — ${parts.join(", ")}` : ""),
    );
  }

  const topics = el("div", { class: "topic-groups" });
  for (const group of overview.topics) {
    const links = el("ul", {});
    for (const minuteId of group.minute_ids) {
      links.appendChild(
        el("li", {}, stateLink(ctx, { route: "minute", minuteId }, minuteId)),
      );
    }
    topics.appendChild(
      el(
        "section",
        { class: "topic-group", "data-topic": group.topic.id },
        el("h4", {}, group.topic.label),
        links,
      ),
    );
  }

  replace(
    root,
    el("h2", {}, overview.municipality.name),
    el(
      "p",
      { class: "quick-links" },
      stateLink(
        ctx,
        { route: "list", municipalityId, query: emptyQuery("minutes") },
        t("browse_minutes"),
      ),
      " · ",
      stateLink(ctx, { route: "timeline", municipalityId }, t("timeline")),
    ),
    el("section", { class: "recent" }, el("h3", {}, t("recent_minutes")), recent),
    el("section", { class: "executive" }, el("h3", {}, t("executive_members")), members),
    el("section", { class: "topics" }, el("h3", {}, t("topics")), topics),
  );
}
