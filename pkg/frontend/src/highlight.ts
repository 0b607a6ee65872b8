/**
 * Snippet rendering: the API brackets matched terms between the control
 * characters U+0001 and U+0002. Those bytes must never reach the DOM;
 * each bracketed run becomes a <mark> element and everything else plain
 * text, so markup in the source text cannot inject HTML either.
 */

const MARK_START = "\u0001";
const MARK_END = "\u0002";

export function renderSnippet(snippet: string): DocumentFragment {
  const fragment = document.createDocumentFragment();
  let rest = snippet;
  while (rest.length > 0) {
    const start = rest.indexOf(MARK_START);
    if (start === -1) break;
    const end = rest.indexOf(MARK_END, start + 1);
    if (end === -1) break;
    if (start > 0) fragment.appendChild(document.createTextNode(rest.slice(0, start)));
    const mark = document.createElement("mark");
    mark.textContent = rest.slice(start + 1, end);
    fragment.appendChild(mark);
    rest = rest.slice(end + 1);
  }
  // trailing text, with any unpaired markers dropped
  const tail = rest.replaceAll(MARK_START, "").replaceAll(MARK_END, "");
  if (tail.length > 0) fragment.appendChild(document.createTextNode(tail));
  return fragment;
}
