/** DOM/SVG rendering. Every number shown is a service response value
 * formatted at display precision, and every displayed number carries the
 * snapshot digest in its tooltip for reproducibility. */

import type { ColorScale } from "./color.js";
import { layout } from "./layout.js";
import type {
  CountryResponse,
  Overlay,
  ProductSpaceResponse,
  RankingsResponse,
  WhatIfResponse,
} from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
export const DISPLAY_DECIMALS = 4;

export function fmt(value: number): string {
  return value.toFixed(DISPLAY_DECIMALS);
}

export interface SceneOptions {
  space: ProductSpaceResponse;
  country: CountryResponse;
  scale: ColorScale;
  overlay: Overlay;
  digest: string;
  width?: number;
  height?: number;
  onToggle?: (product: string) => void;
}

function radius(size: number, maxSize: number): number {
  if (maxSize <= 0) return 4;
  return 4 + 14 * Math.sqrt(size / maxSize);
}

export function renderScene(root: HTMLElement, opts: SceneOptions): void {
  const width = opts.width ?? 800;
  const height = opts.height ?? 600;
  root.textContent = "";

  const portfolio = new Set(opts.country.portfolio.map((p) => p.product));
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("class", "product-space");
  svg.setAttribute("data-digest", opts.digest);

  const positions = layout(opts.space.nodes, opts.space.links, width, height);
  const maxSize = Math.max(...opts.space.nodes.map((n) => n.size), 0);

  for (const link of opts.space.links) {
    const a = positions.get(link.source);
    const b = positions.get(link.target);
    if (!a || !b) continue;
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", a.x.toFixed(1));
    line.setAttribute("y1", a.y.toFixed(1));
    line.setAttribute("x2", b.x.toFixed(1));
    line.setAttribute("y2", b.y.toFixed(1));
    line.setAttribute("stroke", "#cccccc");
    line.setAttribute("stroke-width", (0.5 + 2 * link.phi).toFixed(2));
    line.setAttribute("class", "space-link");
    svg.appendChild(line);
  }

  for (const node of opts.space.nodes) {
    const p = positions.get(node.id)!;
    const value = opts.overlay === "pgi" ? node.pgi : node.pci;
    const circle = document.createElementNS(SVG_NS, "circle");
    circle.setAttribute("cx", p.x.toFixed(1));
    circle.setAttribute("cy", p.y.toFixed(1));
    circle.setAttribute("r", radius(node.size, maxSize).toFixed(2));
    circle.setAttribute("fill", opts.scale.color(value));
    circle.setAttribute("class", "space-node");
    circle.setAttribute("data-product", node.id);
    circle.setAttribute(
      "data-in-portfolio",
      portfolio.has(node.id) ? "true" : "false",
    );
    if (portfolio.has(node.id)) {
      circle.setAttribute("stroke", "#222222");
      circle.setAttribute("stroke-width", "2.5");
    }
    const overlayLabel = opts.overlay.toUpperCase();
    const shown = value === null ? "n/a" : fmt(value);
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent =
      `${node.id} ${overlayLabel}=${shown} (snapshot ${opts.digest})`;
    circle.appendChild(title);
    if (opts.onToggle) {
      circle.addEventListener("click", () => opts.onToggle!(node.id));
    }
    svg.appendChild(circle);
  }
  root.appendChild(svg);

  if (portfolio.size === 0) {
    const note = document.createElement("p");
    note.className = "empty-portfolio";
    note.textContent =
      `${opts.country.country} has no revealed-advantage products in ` +
      `${opts.country.period}.`;
    root.appendChild(note);
  }
}

export function recolorScene(
  root: HTMLElement,
  space: ProductSpaceResponse,
  scale: ColorScale,
  overlay: Overlay,
  digest: string,
): void {
  const byId = new Map(space.nodes.map((n) => [n.id, n]));
  for (const el of Array.from(root.querySelectorAll("circle.space-node"))) {
    const id = el.getAttribute("data-product");
    if (!id) continue;
    const node = byId.get(id);
    if (!node) continue;
    const value = overlay === "pgi" ? node.pgi : node.pci;
    el.setAttribute("fill", scale.color(value));
    const title = el.querySelector("title");
    if (title) {
      const shown = value === null ? "n/a" : fmt(value);
      title.textContent =
        `${id} ${overlay.toUpperCase()}=${shown} (snapshot ${digest})`;
    }
  }
}

export function renderRankings(
  root: HTMLElement,
  rankings: RankingsResponse,
  digest: string,
  selected: string,
  onSelect?: (country: string) => void,
): void {
  root.textContent = "";
  const list = document.createElement("ol");
  list.className = "ranking-list";
  for (const entry of rankings.entries) {
    const item = document.createElement("li");
    const value = entry[rankings.metric];
    const shown = typeof value === "number" ? fmt(value) : String(value);
    item.textContent = `${entry.country} ${shown}`;
    item.title = `${rankings.metric}=${shown} (snapshot ${digest})`;
    item.setAttribute("data-country", entry.country);
    if (entry.country === selected) item.className = "selected";
    if (onSelect) item.addEventListener("click", () => onSelect(entry.country));
    list.appendChild(item);
  }
  root.appendChild(list);
}

export function renderPanel(
  root: HTMLElement,
  result: WhatIfResponse,
  digest: string,
): void {
  root.textContent = "";
  const rows: [string, string, string][] = [
    ["baseline", fmt(result.baseline), "baseline expected Gini"],
    ["scenario", fmt(result.scenario), "scenario expected Gini"],
    ["delta", fmt(result.delta), "scenario minus baseline"],
  ];
  const dl = document.createElement("dl");
  dl.className = "whatif-panel";
  for (const [key, shown, label] of rows) {
    const dt = document.createElement("dt");
    dt.textContent = label;
    const dd = document.createElement("dd");
    dd.setAttribute("data-field", key);
    dd.title = `${label}: ${shown} (snapshot ${digest})`;
    if (key === "delta") {
      const cue = result.delta > 0 ? "▲" : result.delta < 0 ? "▼" : "▬";
      const direction =
        result.delta > 0
          ? "more unequal"
          : result.delta < 0
            ? "more equal"
            : "unchanged";
      dd.textContent = `${cue} ${shown} (${direction})`;
      dd.setAttribute(
        "data-direction",
        result.delta > 0 ? "up" : result.delta < 0 ? "down" : "flat",
      );
    } else {
      dd.textContent = shown;
    }
    dl.appendChild(dt);
    dl.appendChild(dd);
  }
  const edits = document.createElement("p");
  edits.className = "edit-summary";
  const added = result.added.map((e) => e.product).join(", ") || "none";
  const removed = result.removed.join(", ") || "none";
  edits.textContent = `added: ${added}; removed: ${removed}`;
  dl.appendChild(edits);
  root.appendChild(dl);
}

export function renderError(
  root: HTMLElement,
  message: string,
  onRetry: () => void,
): void {
  root.textContent = "";
  const box = document.createElement("div");
  box.className = "error-state";
  box.setAttribute("role", "alert");
  const text = document.createElement("p");
  text.textContent = message;
  const retry = document.createElement("button");
  retry.textContent = "Retry";
  retry.className = "retry";
  retry.addEventListener("click", onRetry);
  box.appendChild(text);
  box.appendChild(retry);
  root.appendChild(box);
}
