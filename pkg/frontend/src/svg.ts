// Small helpers for building SVG scenes without a framework.

const SVG_NS = "http://www.w3.org/2000/svg";

export function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number> = {},
  parent?: Element,
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, String(value));
  }
  parent?.appendChild(el);
  return el;
}

export function htmlEl<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  parent?: Element,
  text?: string,
): HTMLElementTagNameMap[K] {
  const el = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, value);
  }
  if (text !== undefined) el.textContent = text;
  parent?.appendChild(el);
  return el;
}

export function clearChildren(el: Element) {
  while (el.lastChild) el.removeChild(el.lastChild);
}

export function titleTip(target: SVGElement, text: string) {
  const title = document.createElementNS(SVG_NS, "title");
  title.textContent = text;
  target.appendChild(title);
}

export function dayOffset(iso: string, fromIso: string): number {
  return Math.round((Date.parse(iso) - Date.parse(fromIso)) / 86_400_000);
}

export function weekdayOf(iso: string): number {
  return new Date(iso + "T00:00:00Z").getUTCDay();
}
