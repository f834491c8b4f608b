// Vertex placement.  Seeds that came from a word are laid out in rows,
// one row per layer of the word (the letter each position uses); anything
// else falls back to a small deterministic force-directed relaxation.

import type { QuiverArrow, SeedPayload, VertexId } from "./types.js";

export interface Point {
  x: number;
  y: number;
}

export type Layout = Map<string, Point>;

export function layoutSeed(
  payload: SeedPayload,
  arrows: QuiverArrow[],
  width = 800,
  height = 400,
): Layout {
  if (payload.layers) {
    return layeredLayout(payload, width, height);
  }
  return forceLayout(payload.seed.I, arrows, width, height);
}

export function layeredLayout(
  payload: SeedPayload,
  width = 800,
  height = 400,
): Layout {
  const layers = payload.layers ?? {};
  const rows = new Map<number, number[]>();
  for (const [pos, layer] of Object.entries(layers)) {
    const row = rows.get(layer) ?? [];
    row.push(Number(pos));
    rows.set(layer, row);
  }
  const layerIds = [...rows.keys()].sort((a, b) => a - b);
  const out: Layout = new Map();
  layerIds.forEach((layer, r) => {
    const positions = rows.get(layer)!.sort((a, b) => a - b);
    const y = height * ((r + 1) / (layerIds.length + 1));
    positions.forEach((pos, c) => {
      const x = width * ((c + 1) / (positions.length + 1));
      out.set(String(pos), { x, y });
    });
  });
  return out;
}

export function forceLayout(
  ids: VertexId[],
  arrows: QuiverArrow[],
  width = 800,
  height = 400,
  iterations = 200,
): Layout {
  // Deterministic spring relaxation from a circle; no randomness so the
  // same seed always renders the same picture.
  const n = ids.length;
  const pos = new Map<string, Point>();
  ids.forEach((id, i) => {
    const t = (2 * Math.PI * i) / Math.max(n, 1);
    pos.set(String(id), {
      x: width / 2 + 0.35 * width * Math.cos(t),
      y: height / 2 + 0.35 * height * Math.sin(t),
    });
  });
  const spring = 0.02;
  const repel = 2000;
  const rest = Math.min(width, height) / 3;
  for (let it = 0; it < iterations; it++) {
    const force = new Map<string, Point>();
    for (const id of pos.keys()) {
      force.set(id, { x: 0, y: 0 });
    }
    const keys = [...pos.keys()];
    for (let a = 0; a < keys.length; a++) {
      for (let b = a + 1; b < keys.length; b++) {
        const pa = pos.get(keys[a])!;
        const pb = pos.get(keys[b])!;
        const dx = pa.x - pb.x;
        const dy = pa.y - pb.y;
        const d2 = Math.max(dx * dx + dy * dy, 1);
        const f = repel / d2;
        const d = Math.sqrt(d2);
        force.get(keys[a])!.x += (f * dx) / d;
        force.get(keys[a])!.y += (f * dy) / d;
        force.get(keys[b])!.x -= (f * dx) / d;
        force.get(keys[b])!.y -= (f * dy) / d;
      }
    }
    for (const arrow of arrows) {
      const pa = pos.get(String(arrow.from));
      const pb = pos.get(String(arrow.to));
      if (!pa || !pb) {
        continue;
      }
      const dx = pb.x - pa.x;
      const dy = pb.y - pa.y;
      const d = Math.max(Math.sqrt(dx * dx + dy * dy), 1);
      const f = spring * (d - rest);
      force.get(String(arrow.from))!.x += (f * dx) / d;
      force.get(String(arrow.from))!.y += (f * dy) / d;
      force.get(String(arrow.to))!.x -= (f * dx) / d;
      force.get(String(arrow.to))!.y -= (f * dy) / d;
    }
    for (const [id, p] of pos) {
      const f = force.get(id)!;
      p.x = Math.min(Math.max(p.x + f.x, 20), width - 20);
      p.y = Math.min(Math.max(p.y + f.y, 20), height - 20);
    }
  }
  return pos;
}
