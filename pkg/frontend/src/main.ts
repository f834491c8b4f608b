// Application wiring: DOM events in, API calls out, view re-rendered from
// the reduced state after every accepted (non-stale) response.

import { ApiClient, ApiError } from "./api.js";
import { layoutSeed } from "./layout.js";
import {
  renderBreadcrumb, renderDbsPanel, renderError, renderInspector,
  renderQuiver, renderTSystem,
} from "./render.js";
import { initialState, reduce, ViewEvent, ViewState } from "./state.js";
import type { VertexId } from "./types.js";

const client = new ApiClient("");
let state: ViewState = initialState();

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node;
}

function dispatch(event: ViewEvent): void {
  state = reduce(state, event);
  render();
}

function render(): void {
  el("error").innerHTML = renderError(state.error);
  el("breadcrumb").innerHTML = renderBreadcrumb(state.breadcrumb);
  if (state.seed && state.quiver) {
    const layout = layoutSeed(state.seed, state.quiver.arrows);
    el("quiver").innerHTML =
      renderQuiver(state.seed, state.quiver, layout, state.selected);
  }
  el("inspector").innerHTML =
    renderInspector(state.selected, state.inspected, state.degrees);
  el("dbs").innerHTML = state.dbs ? renderDbsPanel(state.dbs) : "";
  el("tsystem").innerHTML = state.tsystem ? renderTSystem(state.tsystem) : "";
}

function fail(err: unknown): void {
  const witness = err instanceof ApiError ? err.witness : String(err);
  dispatch({ kind: "error", witness });
}

async function refresh(label: string): Promise<void> {
  const seed = await client.seed();
  const quiver = await client.quiver();
  const degrees = await client.degrees();
  if (seed.stale || quiver.stale || degrees.stale) {
    return;
  }
  dispatch({ kind: "seed", payload: seed.data, label });
  dispatch({ kind: "quiver", payload: quiver.data });
  dispatch({ kind: "degrees", payload: degrees.data });
  if (seed.data.word) {
    const dbs = await client.dbsDegrees();
    if (!dbs.stale) {
      dispatch({ kind: "dbs", payload: dbs.data });
    }
  }
}

async function loadWord(): Promise<void> {
  const text = (el("word-input") as HTMLInputElement).value;
  const cartan = (el("cartan-input") as HTMLInputElement).value || "A2";
  const word = text.split(",").map((x) => parseInt(x.trim(), 10));
  try {
    await client.loadWord(word, cartan);
    await refresh(`load ${text}`);
  } catch (err) {
    fail(err);
  }
}

async function clickVertex(id: VertexId): Promise<void> {
  const frozen = new Set((state.quiver?.frozen ?? []).map(String));
  dispatch({ kind: "select", vertex: id });
  try {
    if (!frozen.has(String(id))) {
      await client.mutate(coerce(id));
      await refresh(`mu_${id}`);
    }
    const variable = await client.variable(coerce(id));
    if (!variable.stale) {
      dispatch({ kind: "inspect", payload: variable.data });
    }
  } catch (err) {
    fail(err);
  }
}

function coerce(id: VertexId): VertexId {
  const n = Number(id);
  return Number.isInteger(n) && String(n) === String(id) ? n : id;
}

async function undo(): Promise<void> {
  try {
    await client.undo();
    await refresh("undo");
  } catch (err) {
    fail(err);
  }
}

export function boot(): void {
  el("load-btn").addEventListener("click", () => void loadWord());
  el("undo-btn").addEventListener("click", () => void undo());
  el("quiver").addEventListener("click", (ev) => {
    const target = (ev.target as Element).closest("[data-vertex]");
    if (target) {
      void clickVertex(target.getAttribute("data-vertex")!);
    }
  });
  el("tsystem-btn").addEventListener("click", () => {
    const j = parseInt((el("tsystem-j") as HTMLInputElement).value, 10);
    const s = parseInt((el("tsystem-s") as HTMLInputElement).value, 10);
    client.tsystem(j, s)
      .then((r) => {
        if (!r.stale) {
          dispatch({ kind: "tsystem", payload: r.data });
        }
      })
      .catch(fail);
  });
}

if (typeof document !== "undefined" && document.getElementById("load-btn")) {
  boot();
}
