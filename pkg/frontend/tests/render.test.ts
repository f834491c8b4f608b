// Markup conventions: frozen boxes, unfrozen circles, weights, witnesses.

import { describe, expect, it } from "vitest";
import {
  renderDbsPanel, renderError, renderInspector, renderQuiver,
} from "../src/render.js";
import type { Layout } from "../src/layout.js";
import type { QuiverPayload, SeedPayload } from "../src/types.js";

function payloads(): { seed: SeedPayload; quiver: QuiverPayload } {
  const seed: SeedPayload = {
    seed: { I: [1, 2, 3], I_uf: [1], d: [1, 1, 1], B: [[0], [1], [-1]],
            Lambda: null, labels: {} },
    history: [],
    word: null,
    layers: null,
    undo_depth: 0,
  };
  const quiver: QuiverPayload = {
    dot: "digraph {}",
    arrows: [
      { from: 2, to: 1, weight: 1 },
      { from: 1, to: 3, weight: 2 },
    ],
    frozen: [2, 3],
  };
  return { seed, quiver };
}

function grid(): Layout {
  return new Map([
    ["1", { x: 100, y: 100 }],
    ["2", { x: 300, y: 100 }],
    ["3", { x: 200, y: 250 }],
  ]);
}

describe("renderQuiver", () => {
  it("draws unfrozen vertices as circles and frozen ones as boxes", () => {
    const { seed, quiver } = payloads();
    const svg = renderQuiver(seed, quiver, grid(), null);
    expect(svg.match(/<circle[^>]*class="vertex unfrozen"/g)).toHaveLength(1);
    expect(svg.match(/<rect[^>]*class="vertex frozen"/g)).toHaveLength(2);
    expect(svg).toContain('data-vertex="1"');
    expect(svg).toContain('data-vertex="3"');
  });

  it("labels multi-arrows with their weight", () => {
    const { seed, quiver } = payloads();
    const svg = renderQuiver(seed, quiver, grid(), null);
    expect(svg.match(/<line/g)).toHaveLength(2);
    expect(svg).toContain('class="weight"');
    expect(svg).toContain(">2</text>");
  });

  it("marks the selected vertex", () => {
    const { seed, quiver } = payloads();
    const svg = renderQuiver(seed, quiver, grid(), 1);
    expect(svg).toContain('class="vertex unfrozen selected"');
  });
});

describe("panels", () => {
  it("renders the interval degree table", () => {
    const html = renderDbsPanel({
      intervals: [
        { j: 3, k: 7, beta: [-1, 0, 0, 0, 0, 0, 1] },
        { j: 6, k: 6, beta: [0, 0, 0, 0, -1, 1, 0] },
      ],
      flat_word: [1, 3, 4, 2, 5, 1, 3, 1, 2],
      sigma: { "1": 4, "4": 1, "2": 5, "5": 2, "3": 3 },
    });
    expect(html).toContain("[3, 7]");
    expect(html).toContain("(-1, 0, 0, 0, 0, 0, 1)");
    expect(html).toContain("flat word: (1, 3, 4, 2, 5, 1, 3, 1, 2)");
  });

  it("escapes the error witness", () => {
    expect(renderError("bad <seed>")).toContain("bad &lt;seed&gt;");
    expect(renderError(null)).toBe("");
  });

  it("shows degree and expansion in the inspector", () => {
    const html = renderInspector(1, { text: "x[(-1, 0)] + x[(-1, 1)]",
      terms: [] }, { "1": [1, 0] });
    expect(html).toContain("vertex 1");
    expect(html).toContain("degree: (1, 0)");
    expect(html).toContain("x[(-1, 0)] + x[(-1, 1)]");
  });
});
