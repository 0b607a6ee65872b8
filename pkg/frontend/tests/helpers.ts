/** Shared scaffolding for mounting the app against a mock fetch. */

import { ApiClient } from "../src/api.js";
import { boot, type App } from "../src/app.js";
import { setLanguage } from "../src/labels.js";
import type { FetchLike } from "../src/api.js";

const active: App[] = [];

export function mountApp(fetchImpl: FetchLike, hash = "#/"): App {
  window.history.replaceState(null, "", `/${hash}`);
  setLanguage("en");
  document.body.innerHTML = "";
  const root = document.createElement("div");
  document.body.appendChild(root);
  const app = boot(root, new ApiClient({ fetchImpl }));
  active.push(app);
  return app;
}

export function teardownApps(): void {
  while (active.length > 0) active.pop()?.destroy();
}

export function queryText(selector: string): string[] {
  return [...document.querySelectorAll(selector)].map((node) => node.textContent ?? "");
}

export function mustFind<T extends Element>(selector: string): T {
  const node = document.querySelector(selector);
  if (!node) throw new Error(`expected element ${selector}`);
  return node as T;
}

export async function settle(app: App): Promise<void> {
  // hash navigation and nested re-renders queue microtasks; drain a few rounds
  for (let round = 0; round < 4; round++) {
    await app.idle();
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}
