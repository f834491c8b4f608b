// Markup builders.  Everything renders to strings so the logic is testable
// without a DOM; main.ts injects the strings and wires click delegation.
//
// Frozen vertices are boxes, unfrozen ones circles, matching the DOT
// output of the engine.

import type { Layout } from "./layout.js";
import type {
  DbsDegreesPayload, DegreesPayload, LaurentPayload, QuiverPayload,
  SeedPayload, TSystemPayload, VertexId,
} from "./types.js";

const R = 16;

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderQuiver(
  seed: SeedPayload,
  quiver: QuiverPayload,
  layout: Layout,
  selected: VertexId | null,
  width = 800,
  height = 400,
): string {
  const frozen = new Set(quiver.frozen.map(String));
  const parts: string[] = [];
  parts.push(
    `<svg viewBox="0 0 ${width} ${height}" class="quiver">` +
    `<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" ` +
    `markerWidth="7" markerHeight="7" orient="auto-start-reverse">` +
    `<path d="M 0 0 L 10 5 L 0 10 z"/></marker></defs>`,
  );
  for (const arrow of quiver.arrows) {
    const a = layout.get(String(arrow.from));
    const b = layout.get(String(arrow.to));
    if (!a || !b) {
      continue;
    }
    const dx = b.x - a.x;
    const dy = b.y - a.y;
    const d = Math.max(Math.sqrt(dx * dx + dy * dy), 1);
    const x1 = a.x + (R * dx) / d;
    const y1 = a.y + (R * dy) / d;
    const x2 = b.x - (R * dx) / d;
    const y2 = b.y - (R * dy) / d;
    parts.push(
      `<line class="arrow" x1="${x1.toFixed(1)}" y1="${y1.toFixed(1)}" ` +
      `x2="${x2.toFixed(1)}" y2="${y2.toFixed(1)}" marker-end="url(#arrow)"/>`,
    );
    if (arrow.weight !== 1) {
      const mx = (x1 + x2) / 2;
      const my = (y1 + y2) / 2 - 4;
      parts.push(
        `<text class="weight" x="${mx.toFixed(1)}" y="${my.toFixed(1)}">` +
        `${arrow.weight}</text>`,
      );
    }
  }
  for (const id of seed.seed.I) {
    const p = layout.get(String(id));
    if (!p) {
      continue;
    }
    const isFrozen = frozen.has(String(id));
    const isSelected = selected !== null && String(selected) === String(id);
    const cls = `vertex${isFrozen ? " frozen" : " unfrozen"}` +
      `${isSelected ? " selected" : ""}`;
    const attrs = `class="${cls}" data-vertex="${esc(String(id))}"`;
    if (isFrozen) {
      parts.push(
        `<rect ${attrs} x="${(p.x - R).toFixed(1)}" ` +
        `y="${(p.y - R).toFixed(1)}" width="${2 * R}" height="${2 * R}"/>`,
      );
    } else {
      parts.push(
        `<circle ${attrs} cx="${p.x.toFixed(1)}" cy="${p.y.toFixed(1)}" ` +
        `r="${R}"/>`,
      );
    }
    parts.push(
      `<text class="label" x="${p.x.toFixed(1)}" y="${(p.y + 4).toFixed(1)}">` +
      `${esc(String(id))}</text>`,
    );
  }
  parts.push("</svg>");
  return parts.join("");
}

export function renderBreadcrumb(breadcrumb: string[]): string {
  if (!breadcrumb.length) {
    return "<em>no steps yet</em>";
  }
  return breadcrumb.map((s) => `<span class="crumb">${esc(s)}</span>`)
    .join(" &rsaquo; ");
}

export function renderError(witness: string | null): string {
  if (witness === null) {
    return "";
  }
  return `<div class="error">${esc(witness)}</div>`;
}

export function renderInspector(
  vertex: VertexId | null,
  variable: LaurentPayload | null,
  degrees: DegreesPayload | null,
): string {
  if (vertex === null) {
    return "<em>click a vertex to inspect it</em>";
  }
  const parts = [`<h3>vertex ${esc(String(vertex))}</h3>`];
  if (degrees) {
    const deg = degrees[String(vertex)];
    if (deg) {
      parts.push(`<div>degree: (${deg.join(", ")})</div>`);
    }
  }
  if (variable) {
    parts.push(`<pre class="laurent">${esc(variable.text)}</pre>`);
  }
  return parts.join("");
}

export function renderDbsPanel(payload: DbsDegreesPayload): string {
  const rows = payload.intervals.map((e) =>
    `<tr><td>[${e.j}, ${e.k}]</td><td>(${e.beta.join(", ")})</td></tr>`,
  );
  return (
    `<div>flat word: (${payload.flat_word.join(", ")})</div>` +
    `<table class="dbs"><thead><tr><th>interval</th><th>degree</th></tr>` +
    `</thead><tbody>${rows.join("")}</tbody></table>`
  );
}

export function renderTSystem(payload: TSystemPayload): string {
  const who = payload.participants
    .map((p) => `[${p.interval.join(", ")}]^${p.exponent}`)
    .join(" · ");
  return (
    `<div class="tsystem ${payload.holds ? "ok" : "bad"}">` +
    `T(${payload.j}, ${payload.s}): ${payload.holds ? "holds" : "FAILS"}; ` +
    `alpha = ${esc(payload.alpha)}, alpha' = ${esc(payload.alpha_prime)}; ` +
    `${esc(who)}</div>`
  );
}
