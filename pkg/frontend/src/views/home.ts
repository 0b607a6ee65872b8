/**
 * Landing surface: one card per municipality with its published-minute
 * count, a global search box, and the newsletter signup form.
 */

import { ApiError } from "../api.js";
import type { AppContext } from "../context.js";
import { el, replace } from "../dom.js";
import { t } from "../labels.js";
import { emptyQuery, type Scope } from "../state.js";
import { infoBanner } from "./shared.js";
import { stateLink } from "./shared.js";

function searchSection(ctx: AppContext): HTMLElement {
  const input = el("input", {
    type: "search",
    name: "q",
    placeholder: t("search_placeholder"),
    "aria-label": t("search_heading"),
  });
  const scope = el("select", { name: "scope" });
  for (const value of ["all", "minutes", "subjects"] as const) {
    scope.appendChild(el("option", { value }, t(`scope_${value}`)));
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
    const query = emptyQuery(scope.value as Scope);
    query.text = input.value.trim();
    ctx.navigate({ route: "search", query });
  });
  return el("section", { class: "search" }, el("h2", {}, t("search_heading")), form);
}

function newsletterSection(ctx: AppContext): HTMLElement {
  const input = el("input", {
    type: "email",
    name: "email",
    placeholder: t("email_placeholder"),
    "aria-label": t("newsletter"),
    required: "required",
  });
  const message = el("p", { class: "newsletter-message", role: "status" });
  const form = el(
    "form",
    { class: "newsletter" },
    input,
    el("button", { type: "submit" }, t("subscribe")),
  );
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    try {
      const result = await ctx.client.subscribe(input.value.trim());
      message.textContent = result.created ? t("subscribed") : t("already_subscribed");
      message.className = "newsletter-message ok";
    } catch (error) {
      message.textContent = error instanceof ApiError ? error.body.error : String(error);
      message.className = "newsletter-message error";
    }
  });
  return el(
    "section",
    { class: "newsletter-signup" },
    el("h2", {}, t("newsletter")),
    el("p", {}, t("newsletter_hint")),
    form,
    message,
  );
}

export async function renderHome(root: HTMLElement, ctx: AppContext): Promise<void> {
  const municipalities = await ctx.client.municipalities();
  const cards = el("div", { class: "cards" });
  for (const m of municipalities) {
    cards.appendChild(
      el(
        "article",
        { class: "card", "data-municipality": m.id },
        el(
          "h3",
          {},
          stateLink(ctx, { route: "municipality", municipalityId: m.id }, m.name),
        ),
        el(
          "p",
          { class: "count" },
          el("strong", {}, String(m.published_minutes)),
          ` ${t("published_minutes")}`,
        ),
      ),
    );
  }
  const listing = el(
    "section",
    { class: "municipalities" },
    el("h2", {}, t("municipalities")),
    municipalities.length > 0 ? cards : infoBanner(t("empty_store")),
  );
  replace(root, listing, searchSection(ctx), newsletterSection(ctx));
}
