import { describe, expect, it } from "vitest";

import { renderSnippet } from "../src/highlight.js";
import { fixtures } from "./mock.js";
import type { SearchPayload } from "../src/types.js";

const START = "\u0001";
const END = "\u0002";

function mounted(snippet: string): HTMLElement {
  const host = document.createElement("div");
  host.appendChild(renderSnippet(snippet));
  return host;
}

describe("renderSnippet", () => {
  it("turns one marked run into a mark element", () => {
    const host = mounted(`Community ${START}health${END} screening`);
    const marks = host.querySelectorAll("mark");
    expect(marks).toHaveLength(1);
    expect(marks[0].textContent).toBe("health");
    expect(host.textContent).toBe("Community health screening");
  });

  it("handles several runs and keeps surrounding text intact", () => {
    const host = mounted(`${START}a${END}-b-${START}c${END}`);
    expect([...host.querySelectorAll("mark")].map((m) => m.textContent)).toEqual(["a", "c"]);
    expect(host.textContent).toBe("a-b-c");
  });

  it("never leaks marker bytes into the DOM", () => {
    const host = mounted(`x ${START}y${END} z ${START}w${END}`);
    expect(host.innerHTML).not.toContain(START);
    expect(host.innerHTML).not.toContain(END);
    expect(host.textContent).not.toContain(START);
    expect(host.textContent).not.toContain(END);
  });

  it("drops unpaired markers instead of showing them", () => {
    expect(mounted(`broken ${START}tail`).textContent).toBe("broken tail");
    expect(mounted(`stray${END} end`).textContent).toBe("stray end");
    expect(mounted(START + END).textContent).toBe("");
  });

  it("treats markup in the text as inert characters", () => {
    const host = mounted(`<b>bold</b> ${START}<i>term</i>${END}`);
    expect(host.querySelector("b")).toBeNull();
    expect(host.querySelector("i")).toBeNull();
    expect(host.textContent).toBe("<b>bold</b> <i>term</i>");
  });

  it("renders an empty snippet to an empty node", () => {
    expect(mounted("").childNodes).toHaveLength(0);
  });

  it("strips markers from every captured search payload exactly", () => {
    let checked = 0;
    for (const [key, canned] of Object.entries(fixtures.requests)) {
      const body = canned.body as Partial<SearchPayload>;
      if (!Array.isArray(body.hits)) continue;
      for (const hit of body.hits) {
        const host = mounted(hit.snippet);
        expect(host.innerHTML).not.toContain(START);
        expect(host.innerHTML).not.toContain(END);
        const plain = hit.snippet.replaceAll(START, "").replaceAll(END, "");
        expect(host.textContent, key).toBe(plain);
        checked += 1;
      }
    }
    expect(checked).toBeGreaterThan(10);
  });
});
