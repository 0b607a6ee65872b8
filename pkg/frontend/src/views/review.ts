/**
 * Review screen: the raw minute text side by side with the editable
 * extraction draft, plus the validate and publish actions.
 *
 * Edits mutate a local copy of the draft; saving PUTs the whole draft
 * back and the screen re-fetches after every successful action so the
 * operator always sees the stored state, not an optimistic one.
 */

import { ApiError } from "../api.js";
import type { AppContext } from "../context.js";
import { el, replace } from "../dom.js";
import { t } from "../labels.js";
import { positionLabel } from "../format.js";
import type { ExtractionDraft, RawSubject, ResolutionPreview } from "../types.js";
import { renderTokenPrompt } from "./admin.js";
import { errorBanner, infoBanner, statusBadge } from "./shared.js";

const POSITIONS = ["favor", "against", "abstention"];

function emptyDraft(): ExtractionDraft {
  return {
    metadata_raw: { meeting_date: "", location: "", meeting_type: "ordinary", participants: [] },
    subjects_raw: [],
    extractor_id: "manual",
    model_id: null,
  };
}

function cloneDraft(draft: ExtractionDraft): ExtractionDraft {
  return JSON.parse(JSON.stringify(draft)) as ExtractionDraft;
}

function boundInput(value: string, onChange: (next: string) => void): HTMLInputElement {
  const input = el("input", { type: "text", value });
  input.addEventListener("input", () => onChange(input.value));
  return input;
}

function metadataEditor(draft: ExtractionDraft, rebuild: () => void): HTMLElement {
  const meta = draft.metadata_raw;
  const grid = el(
    "div",
    { class: "metadata-editor" },
    el("label", {}, `${t("meeting_date")}: `, boundInput(meta.meeting_date, (v) => (meta.meeting_date = v))),
    el("label", {}, `${t("location")}: `, boundInput(meta.location, (v) => (meta.location = v))),
    el("label", {}, `${t("meeting_type")}: `, boundInput(meta.meeting_type, (v) => (meta.meeting_type = v))),
  );
  const people = el("ul", { class: "participant-editor" });
  meta.participants.forEach((participant, index) => {
    const remove = el("button", { type: "button" }, t("remove"));
    remove.addEventListener("click", () => {
      meta.participants.splice(index, 1);
      rebuild();
    });
    people.appendChild(
      el(
        "li",
        {},
        boundInput(participant.name, (v) => (participant.name = v)),
        boundInput(participant.party ?? "", (v) => (participant.party = v || null)),
        boundInput(participant.role ?? "", (v) => (participant.role = v || null)),
        remove,
      ),
    );
  });
  const addPerson = el("button", { type: "button" }, "+");
  addPerson.addEventListener("click", () => {
    meta.participants.push({ name: "", party: null, role: null });
    rebuild();
  });
  return el(
    "section",
    { class: "draft-metadata" },
    grid,
    el("h5", {}, t("participants")),
    people,
    addPerson,
  );
}

function votesEditor(subject: RawSubject, rebuild: () => void): HTMLElement {
  const rows = el("ul", { class: "votes" });
  (subject.votes ?? []).forEach((vote, index) => {
    const select = el("select", { class: "vote-position", "data-voter": vote.participant_name });
    for (const position of POSITIONS) {
      const option = el("option", { value: position }, positionLabel(position));
      if (position === vote.position) option.setAttribute("selected", "selected");
      select.appendChild(option);
    }
    select.addEventListener("change", () => (vote.position = select.value));
    const remove = el("button", { type: "button" }, t("remove"));
    remove.addEventListener("click", () => {
      subject.votes?.splice(index, 1);
      rebuild();
    });
    rows.appendChild(
      el(
        "li",
        {},
        boundInput(vote.participant_name, (v) => (vote.participant_name = v)),
        select,
        remove,
      ),
    );
  });
  const add = el("button", { type: "button", class: "add-vote" }, t("add_vote"));
  add.addEventListener("click", () => {
    subject.votes = subject.votes ?? [];
    subject.votes.push({ participant_name: "", position: "favor" });
    rebuild();
  });
  return el("div", { class: "votes-editor" }, rows, add);
}

function subjectEditor(draft: ExtractionDraft, rebuild: () => void): HTMLElement {
  const container = el("div", { class: "subject-editor" });
  draft.subjects_raw.forEach((subject, index) => {
    const summary = el("textarea", { rows: "3" });
    summary.value = subject.summary;
    summary.addEventListener("input", () => (subject.summary = summary.value));
    const topics = boundInput(subject.topic_labels.join(", "), (v) => {
      subject.topic_labels = v
        .split(",")
        .map((s) => s.trim())
        .filter((s) => s.length > 0);
    });
    const remove = el("button", { type: "button" }, t("remove"));
    remove.addEventListener("click", () => {
      draft.subjects_raw.splice(index, 1);
      rebuild();
    });
    container.appendChild(
      el(
        "fieldset",
        { class: "subject-draft", "data-index": String(index) },
        el("legend", {}, `${index + 1}`),
        el("label", {}, "Title: ", boundInput(subject.title, (v) => (subject.title = v))),
        el("label", {}, "Summary: ", summary),
        el("label", {}, `${t("topics")}: `, topics),
        votesEditor(subject, rebuild),
        remove,
      ),
    );
  });
  const add = el("button", { type: "button", class: "add-subject" }, "+");
  add.addEventListener("click", () => {
    draft.subjects_raw.push({ title: "", summary: "", topic_labels: [], votes: null });
    rebuild();
  });
  container.appendChild(add);
  return container;
}

function previewSection(
  preview: ResolutionPreview | null,
  ackBox: HTMLInputElement,
): HTMLElement {
  const section = el("section", { class: "preview" });
  if (!preview) return section;
  if (preview.errors.length > 0) {
    section.appendChild(errorBanner(preview.errors.join("; ")));
  }
  if (preview.unresolved_names.length > 0) {
    const names = el("ul", { class: "unresolved" });
    for (const name of preview.unresolved_names) names.appendChild(el("li", {}, name));
    section.appendChild(
      el(
        "div",
        { class: "unresolved-block" },
        el("h5", {}, t("unresolved_participants")),
        names,
        el("label", { class: "ack" }, ackBox, ` ${t("ack_unresolved")}`),
      ),
    );
  }
  if (preview.new_topic_labels.length > 0) {
    section.appendChild(
      el("p", { class: "new-topics" }, `${t("topics")}: ${preview.new_topic_labels.join(", ")}`),
    );
  }
  return section;
}

export async function renderReview(
  root: HTMLElement,
  ctx: AppContext,
  minuteId: string,
  notice?: HTMLElement,
): Promise<void> {
  if (!ctx.client.adminToken) {
    renderTokenPrompt(root, ctx);
    return;
  }
  const payload = await ctx.client.adminExtraction(minuteId);
  const rawText = await ctx.client.minuteRaw(minuteId, true).catch(() => "");

  const rebuild = (nextNotice?: HTMLElement) => {
    void renderReview(root, ctx, minuteId, nextNotice);
  };

  const draft = payload.extraction ? cloneDraft(payload.extraction) : null;
  const ackBox = el("input", { type: "checkbox", class: "ack-unresolved" });

  const actions = el("div", { class: "actions" });
  const save = el("button", { type: "button", class: "save-draft" }, t("save_draft"));
  const validate = el("button", { type: "button", class: "validate" }, t("validate"));
  const publish = el("button", { type: "button", class: "publish" }, t("publish"));
  // the backend refuses publish before validation; mirror that in the control
  publish.disabled = payload.status !== "validated";
  save.disabled = draft === null;
  actions.append(save, validate, publish);

  const onApiError = (error: unknown) => {
    if (error instanceof ApiError) {
      const status = error.body.status ? ` (${t("status")}: ${error.body.status})` : "";
      rebuild(errorBanner(`${error.body.error}${status}`));
    } else {
      rebuild(errorBanner(String(error)));
    }
  };

  save.addEventListener("click", async () => {
    if (!draft) return;
    try {
      await ctx.client.adminPutExtraction(minuteId, draft);
      rebuild(infoBanner("Draft saved."));
    } catch (error) {
      onApiError(error);
    }
  });
  validate.addEventListener("click", async () => {
    try {
      await ctx.client.adminValidate(minuteId, ackBox.checked);
      rebuild(infoBanner("Validated."));
    } catch (error) {
      onApiError(error);
    }
  });
  publish.addEventListener("click", async () => {
    try {
      const result = await ctx.client.adminPublish(minuteId);
      rebuild(infoBanner(`Published. ${result.index_units} units indexed.`));
    } catch (error) {
      onApiError(error);
    }
  });

  const editorColumn = el("section", { class: "draft-column" }, el("h3", {}, t("extraction_draft")));
  if (draft) {
    editorColumn.appendChild(metadataEditor(draft, rebuild));
    editorColumn.appendChild(subjectEditor(draft, rebuild));
  } else {
    if (payload.error) editorColumn.appendChild(errorBanner(payload.error));
    const start = el("button", { type: "button", class: "start-draft" }, "+");
    start.addEventListener("click", async () => {
      try {
        await ctx.client.adminPutExtraction(minuteId, emptyDraft());
        rebuild(infoBanner("Draft saved."));
      } catch (error) {
        onApiError(error);
      }
    });
    editorColumn.appendChild(start);
  }

  const children: HTMLElement[] = [
    el(
      "header",
      {},
      el("h2", {}, minuteId),
      el("p", {}, `${t("status")}: `, statusBadge(payload.status)),
    ),
  ];
  if (notice) children.push(notice);
  children.push(
    previewSection(payload.preview, ackBox),
    actions,
    el(
      "div",
      { class: "review-columns" },
      el(
        "section",
        { class: "raw-column" },
        el("h3", {}, t("raw_text")),
        el("pre", { class: "raw-text" }, rawText),
      ),
      editorColumn,
    ),
  );
  replace(root, ...children);
}
