/** Deterministic force layout: positions seeded from node ids, a fixed
 * number of spring/repulsion steps, no randomness anywhere else, so the
 * same graph lays out identically across reloads. */

import type { SpaceLink, SpaceNode } from "./types.js";

export interface Point {
  x: number;
  y: number;
}

function hash32(text: string): number {
  let h = 2166136261 >>> 0;
  for (let i = 0; i < text.length; i++) {
    h ^= text.charCodeAt(i);
    h = Math.imul(h, 16777619) >>> 0;
  }
  return h;
}

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function seedPosition(id: string, width: number, height: number): Point {
  const rng = mulberry32(hash32(id));
  return { x: (0.1 + 0.8 * rng()) * width, y: (0.1 + 0.8 * rng()) * height };
}

export function layout(
  nodes: SpaceNode[],
  links: SpaceLink[],
  width = 800,
  height = 600,
  steps = 120,
): Map<string, Point> {
  const pos = new Map<string, Point>();
  for (const node of nodes) {
    pos.set(node.id, seedPosition(node.id, width, height));
  }
  const ids = nodes.map((n) => n.id);
  const springLength = Math.min(width, height) / 6;
  for (let step = 0; step < steps; step++) {
    const cool = 1 - step / steps;
    const force = new Map<string, Point>(ids.map((id) => [id, { x: 0, y: 0 }]));
    // pairwise repulsion
    for (let i = 0; i < ids.length; i++) {
      for (let j = i + 1; j < ids.length; j++) {
        const a = pos.get(ids[i]!)!;
        const b = pos.get(ids[j]!)!;
        const dx = a.x - b.x;
        const dy = a.y - b.y;
        const d2 = Math.max(dx * dx + dy * dy, 1);
        const f = 2000 / d2;
        const d = Math.sqrt(d2);
        const fa = force.get(ids[i]!)!;
        const fb = force.get(ids[j]!)!;
        fa.x += (f * dx) / d;
        fa.y += (f * dy) / d;
        fb.x -= (f * dx) / d;
        fb.y -= (f * dy) / d;
      }
    }
    // spring attraction along links, stronger for higher phi
    for (const link of links) {
      const a = pos.get(link.source);
      const b = pos.get(link.target);
      if (!a || !b) continue;
      const dx = b.x - a.x;
      const dy = b.y - a.y;
      const d = Math.max(Math.sqrt(dx * dx + dy * dy), 1e-6);
      const stretch = (d - springLength) / d;
      const k = 0.04 * (0.5 + link.phi);
      const fa = force.get(link.source)!;
      const fb = force.get(link.target)!;
      fa.x += k * stretch * dx;
      fa.y += k * stretch * dy;
      fb.x -= k * stretch * dx;
      fb.y -= k * stretch * dy;
    }
    // gentle centering plus capped displacement
    for (const id of ids) {
      const p = pos.get(id)!;
      const f = force.get(id)!;
      f.x += (width / 2 - p.x) * 0.01;
      f.y += (height / 2 - p.y) * 0.01;
      const mag = Math.sqrt(f.x * f.x + f.y * f.y);
      const cap = 12 * cool + 0.5;
      const scale = mag > cap ? cap / mag : 1;
      p.x = Math.min(width - 10, Math.max(10, p.x + f.x * scale));
      p.y = Math.min(height - 10, Math.max(10, p.y + f.y * scale));
    }
  }
  return pos;
}
