/**
 * Application shell: hash routing, the navigation chrome, and the
 * shared error surfaces (site gate, admin token prompt, not-found,
 * unreachable-service banner).
 */

import { ApiClient, ApiError } from "./api.js";
import type { AppContext } from "./context.js";
import { el, replace } from "./dom.js";
import { t, toggleLanguage } from "./labels.js";
import { latestGate } from "./latest.js";
import { encodeHash, parseHash, type ViewState } from "./state.js";
import { renderAdmin, renderTokenPrompt } from "./views/admin.js";
import { renderHome } from "./views/home.js";
import { renderListing } from "./views/listing.js";
import { renderMinute } from "./views/minute.js";
import { renderMunicipality } from "./views/municipality.js";
import { renderResults } from "./views/results.js";
import { renderReview } from "./views/review.js";
import { errorBanner } from "./views/shared.js";
import { renderTimeline } from "./views/timeline.js";

export interface App {
  ctx: AppContext;
  /** resolves when the render chain triggered so far has settled */
  idle(): Promise<void>;
  destroy(): void;
}

function renderGate(root: HTMLElement, ctx: AppContext, message?: string): void {
  const input = el("input", { type: "password", name: "password", "aria-label": t("password") });
  const form = el(
    "form",
    { class: "gate" },
    el("label", {}, `${t("password")}: `, input),
    el("button", { type: "submit" }, t("enter")),
  );
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    try {
      await ctx.client.access(input.value);
      ctx.rerender();
    } catch (error) {
      const text = error instanceof ApiError ? error.body.error : String(error);
      renderGate(root, ctx, text);
    }
  });
  const children: (HTMLElement | string)[] = [el("h2", {}, t("gate_prompt"))];
  if (message) children.push(errorBanner(message));
  children.push(form);
  replace(root, ...children);
}

export function boot(root: HTMLElement, client: ApiClient): App {
  const main = el("main", { id: "view" });
  const title = el("a", { href: "#/", class: "brand" }, t("app_title"));
  const homeLink = el("a", { href: "#/" }, t("nav_home"));
  const adminLink = el("a", { href: "#/admin" }, t("nav_back_office"));
  const langButton = el("button", { type: "button", class: "lang-toggle" }, t("language_toggle"));
  const nav = el("nav", {}, title, homeLink, adminLink, langButton);
  replace(root, nav, main);

  let currentHash = "";
  let pending: Promise<void> = Promise.resolve();

  const ctx: AppContext = {
    client,
    navigate(state: ViewState): void {
      const hash = encodeHash(state);
      currentHash = hash;
      if (window.location.hash !== hash) window.location.hash = hash;
      pending = renderRoute(state);
    },
    rerender(): void {
      pending = renderRoute(parseHash(window.location.hash || "#/"));
    },
    listGate: latestGate(),
    searchGate: latestGate(),
  };

  async function renderRoute(state: ViewState | null): Promise<void> {
    if (state === null) {
      replace(main, el("h2", {}, t("not_found")));
      return;
    }
    try {
      switch (state.route) {
        case "home":
          await renderHome(main, ctx);
          break;
        case "municipality":
          await renderMunicipality(main, ctx, state.municipalityId);
          break;
        case "list":
          await renderListing(main, ctx, state.municipalityId, state.query);
          break;
        case "timeline":
          await renderTimeline(main, ctx, state.municipalityId);
          break;
        case "minute":
          await renderMinute(main, ctx, state.minuteId);
          break;
        case "search":
          await renderResults(main, ctx, state.query);
          break;
        case "admin":
          await renderAdmin(main, ctx);
          break;
        case "review":
          await renderReview(main, ctx, state.minuteId);
          break;
      }
    } catch (error) {
      handleError(error);
    }
  }

  function handleError(error: unknown): void {
    if (error instanceof ApiError && error.status === 401) {
      if (error.body.error === "site access required") {
        renderGate(main, ctx);
        return;
      }
      client.adminToken = null;
      renderTokenPrompt(main, ctx, error.body.error);
      return;
    }
    if (error instanceof ApiError && error.status === 404) {
      replace(main, el("h2", {}, t("not_found")), el("p", {}, error.body.error));
      return;
    }
    const message = error instanceof ApiError ? error.body.error : t("unreachable");
    replace(
      main,
      errorBanner(message, () => ctx.rerender()),
    );
  }

  const onHashChange = () => {
    if (window.location.hash === currentHash) return; // navigate() already rendered
    currentHash = window.location.hash;
    pending = renderRoute(parseHash(currentHash || "#/"));
  };
  window.addEventListener("hashchange", onHashChange);

  langButton.addEventListener("click", () => {
    toggleLanguage();
    title.textContent = t("app_title");
    homeLink.textContent = t("nav_home");
    adminLink.textContent = t("nav_back_office");
    langButton.textContent = t("language_toggle");
    ctx.rerender();
  });

  ctx.rerender();

  return {
    ctx,
    async idle(): Promise<void> {
      let settled: Promise<void>;
      do {
        settled = pending;
        await settled;
      } while (settled !== pending);
    },
    destroy(): void {
      window.removeEventListener("hashchange", onHashChange);
    },
  };
}
