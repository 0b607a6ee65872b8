/**
 * Single minute: metadata, each subject with its vote tally and outcome
 * badge, and the aggregate voting summary. All numbers come straight
 * from the payload; the widget adds nothing up.
 */

import type { AppContext } from "../context.js";
import { el, replace } from "../dom.js";
import { outcomeLabel } from "../format.js";
import { t } from "../labels.js";
import type { Tally } from "../types.js";
import { stateLink } from "./shared.js";

function tallyWidget(tally: Tally): HTMLElement {
  const counts = el(
    "div",
    { class: "tally-counts" },
    ...(["favor", "against", "abstention"] as const).map((position) =>
      el(
        "span",
        { class: "tally-count", "data-position": position },
        `${t(position)}: `,
        el("strong", {}, String(tally[position])),
      ),
    ),
  );
  const badge = el(
    "span",
    { class: `badge outcome-${tally.outcome}`, "data-outcome": tally.outcome },
    outcomeLabel(tally.outcome),
  );
  return el("div", { class: "tally" }, counts, badge);
}

export async function renderMinute(
  root: HTMLElement,
  ctx: AppContext,
  minuteId: string,
): Promise<void> {
  const payload = await ctx.client.minute(minuteId);
  const { minute, subjects, voting_summary } = payload;

  const header = el(
    "header",
    {},
    el("h2", {}, minute.metadata?.meeting_date ?? minute.id),
    el(
      "p",
      { class: "crumbs" },
      stateLink(
        ctx,
        { route: "municipality", municipalityId: minute.municipality_id },
        minute.municipality_id,
      ),
      ` · ${minute.id}`,
    ),
  );

  const metadata = el("dl", { class: "metadata" });
  if (minute.metadata) {
    const rows: [string, string][] = [
      [t("meeting_date"), minute.metadata.meeting_date],
      [t("location"), minute.metadata.location],
      [t("meeting_type"), minute.metadata.meeting_type],
    ];
    for (const [term, detail] of rows) {
      metadata.appendChild(el("dt", {}, term));
      metadata.appendChild(el("dd", {}, detail));
    }
    metadata.appendChild(el("dt", {}, t("participants")));
    const people = el("ul", { class: "participants" });
    for (const p of minute.metadata.participants) {
      const extra = [p.party, p.role].filter((x): x is string => x !== null).join(", ");
      people.appendChild(el("li", {}, p.full_name, extra ? ` (${extra})` : ""));
    }
    metadata.appendChild(el("dd", {}, people));
  }

  const subjectList = el("div", { class: "subjects" });
  for (const subject of subjects) {
    const topicChips = el(
      "p",
      { class: "topics" },
      ...subject.topics.map((topic) => el("span", { class: "chip" }, topic.label)),
    );
    subjectList.appendChild(
      el(
        "article",
        { class: "subject", "data-subject": subject.id },
        el("h4", {}, `${subject.order}. ${subject.title}`),
        topicChips,
        el("p", { class: "summary" }, subject.summary),
        subject.tally ? tallyWidget(subject.tally) : el("p", { class: "no-vote" }, t("no_vote")),
      ),
    );
  }

  const summary = el(
    "section",
    { class: "voting-summary" },
    el("h3", {}, t("voting_summary")),
    el(
      "div",
      { class: "tally-counts" },
      ...(["favor", "against", "abstention"] as const).map((position) =>
        el(
          "span",
          { class: "tally-count", "data-position": position },
          `${t(position)}: `,
          el("strong", {}, String(voting_summary[position])),
        ),
      ),
    ),
  );

  replace(
    root,
    header,
    metadata,
    el("section", { class: "subject-list" }, el("h3", {}, t("scope_subjects")), subjectList),
    summary,
    el("p", {}, el("a", { href: payload.raw_text_path, class: "raw-link" }, t("raw_text"))),
  );
}
