import { el } from "../dom.js";
import { t } from "../labels.js";
import type { AppContext } from "../context.js";
import type { ViewState } from "../state.js";
import { encodeHash } from "../state.js";

export function errorBanner(message: string, onRetry?: () => void): HTMLElement {
  const banner = el("div", { class: "banner error", role: "alert" }, message);
  if (onRetry) {
    const button = el("button", { type: "button" }, t("retry"));
    button.addEventListener("click", onRetry);
    banner.appendChild(button);
  }
  return banner;
}

export function infoBanner(message: string): HTMLElement {
  return el("div", { class: "banner info", role: "status" }, message);
}

/** In-app link that routes through the hash, no page reload. */
export function stateLink(ctx: AppContext, state: ViewState, text: string): HTMLAnchorElement {
  const anchor = el("a", { href: encodeHash(state) }, text);
  anchor.addEventListener("click", (event) => {
    event.preventDefault();
    ctx.navigate(state);
  });
  return anchor;
}

export function statusBadge(status: string): HTMLElement {
  return el("span", { class: `badge status-${status}`, "data-status": status }, status);
}
