/**
 * Back-office entry: token prompt, minute inventory, and upload form.
 */

import { ApiError } from "../api.js";
import type { AppContext } from "../context.js";
import { el, replace } from "../dom.js";
import { t } from "../labels.js";
import { errorBanner, stateLink, statusBadge } from "./shared.js";

export function renderTokenPrompt(
  root: HTMLElement,
  ctx: AppContext,
  message?: string,
): void {
  const input = el("input", {
    type: "password",
    name: "token",
    "aria-label": t("admin_token"),
  });
  const form = el(
    "form",
    { class: "token-prompt" },
    el("label", {}, `${t("admin_token")}: `, input),
    el("button", { type: "submit" }, t("sign_in")),
  );
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    ctx.client.adminToken = input.value;
    ctx.rerender();
  });
  const children: (HTMLElement | string)[] = [
    el("h2", {}, t("nav_back_office")),
    el("p", {}, t("admin_token_prompt")),
  ];
  if (message) children.push(errorBanner(message));
  children.push(form);
  replace(root, ...children);
}

function uploadForm(ctx: AppContext): HTMLElement {
  const municipality = el("input", { type: "text", name: "municipality", required: "required" });
  const filename = el("input", { type: "text", name: "source_filename", value: "upload.txt" });
  const extractor = el("select", { name: "extractor" });
  extractor.appendChild(el("option", { value: "rule" }, "rule"));
  extractor.appendChild(el("option", { value: "llm" }, "llm"));
  const text = el("textarea", { name: "text", rows: "8", required: "required" });
  const message = el("p", { role: "status" });
  const form = el(
    "form",
    { class: "upload" },
    el("label", {}, `${t("dim_municipality")}: `, municipality),
    el("label", {}, "File name: ", filename),
    el("label", {}, "Extractor: ", extractor),
    text,
    el("button", { type: "submit" }, t("upload")),
    message,
  );
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    try {
      const result = await ctx.client.adminUpload({
        municipality: municipality.value.trim(),
        text: text.value,
        source_filename: filename.value.trim() || "upload.txt",
        extractor: extractor.value,
      });
      ctx.navigate({ route: "review", minuteId: result.minute_id });
    } catch (error) {
      message.textContent = error instanceof ApiError ? error.body.error : String(error);
      message.className = "error";
    }
  });
  return el("section", { class: "upload-section" }, el("h3", {}, t("upload_heading")), form);
}

export async function renderAdmin(root: HTMLElement, ctx: AppContext): Promise<void> {
  if (!ctx.client.adminToken) {
    renderTokenPrompt(root, ctx);
    return;
  }
  const listing = await ctx.client.adminList();
  const rows = el("tbody", {});
  for (const minute of listing.minutes) {
    rows.appendChild(
      el(
        "tr",
        { "data-minute": minute.id },
        el("td", {}, minute.id),
        el("td", {}, minute.municipality_id),
        el("td", {}, statusBadge(minute.status)),
        el("td", {}, minute.source_filename),
        el("td", {}, stateLink(ctx, { route: "review", minuteId: minute.id }, t("review"))),
      ),
    );
  }
  const table = el(
    "table",
    { class: "admin-minutes" },
    el(
      "thead",
      {},
      el(
        "tr",
        {},
        el("th", {}, "ID"),
        el("th", {}, t("dim_municipality")),
        el("th", {}, t("status")),
        el("th", {}, "File"),
        el("th", {}, ""),
      ),
    ),
    rows,
  );
  replace(
    root,
    el("h2", {}, t("nav_back_office")),
    el("section", { class: "inventory" }, el("h3", {}, t("minutes")), table),
    uploadForm(ctx),
  );
}
