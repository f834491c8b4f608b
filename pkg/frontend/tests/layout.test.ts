// Layered placement for word seeds; deterministic fallback otherwise.

import { describe, expect, it } from "vitest";
import { forceLayout, layeredLayout, layoutSeed } from "../src/layout.js";
import type { SeedPayload } from "../src/types.js";

function wordPayload(): SeedPayload {
  // the 7-letter two-string word: positions 1,3,4,7 on layer 1 and
  // 2,5,6 on layer 2
  return {
    seed: {
      I: [1, 2, 3, 4, 5, 6, 7],
      I_uf: [3, 4, 5],
      d: [1, 1, 1, 1, 1, 1, 1],
      B: [],
      Lambda: null,
      labels: {},
    },
    history: [],
    word: [1, 2, 1, 1, 2, 2, 1],
    layers: { "1": 1, "2": 2, "3": 1, "4": 1, "5": 2, "6": 2, "7": 1 },
    undo_depth: 0,
  };
}

describe("layeredLayout", () => {
  it("places each layer on its own row, positions left to right", () => {
    const layout = layeredLayout(wordPayload(), 800, 400);
    expect(layout.size).toBe(7);
    const row1 = [1, 3, 4, 7].map((p) => layout.get(String(p))!);
    const row2 = [2, 5, 6].map((p) => layout.get(String(p))!);
    expect(new Set(row1.map((p) => p.y)).size).toBe(1);
    expect(new Set(row2.map((p) => p.y)).size).toBe(1);
    expect(row1[0].y).toBeLessThan(row2[0].y);
    for (const row of [row1, row2]) {
      for (let i = 1; i < row.length; i++) {
        expect(row[i].x).toBeGreaterThan(row[i - 1].x);
      }
    }
  });

  it("is chosen by layoutSeed when layers are present", () => {
    const viaDispatch = layoutSeed(wordPayload(), []);
    const direct = layeredLayout(wordPayload());
    expect(viaDispatch).toEqual(direct);
  });
});

describe("forceLayout", () => {
  it("is deterministic and keeps vertices inside the frame", () => {
    const ids = [1, 2, 3, 4];
    const arrows = [
      { from: 1, to: 2, weight: 1 },
      { from: 2, to: 3, weight: 2 },
    ];
    const a = forceLayout(ids, arrows, 800, 400);
    const b = forceLayout(ids, arrows, 800, 400);
    expect(a).toEqual(b);
    for (const p of a.values()) {
      expect(p.x).toBeGreaterThanOrEqual(20);
      expect(p.x).toBeLessThanOrEqual(780);
      expect(p.y).toBeGreaterThanOrEqual(20);
      expect(p.y).toBeLessThanOrEqual(380);
    }
    // distinct vertices do not collapse onto one point
    const keys = [...a.keys()];
    for (let i = 0; i < keys.length; i++) {
      for (let j = i + 1; j < keys.length; j++) {
        const pi = a.get(keys[i])!;
        const pj = a.get(keys[j])!;
        const d = Math.hypot(pi.x - pj.x, pi.y - pj.y);
        expect(d).toBeGreaterThan(5);
      }
    }
  });
});
