// View state as a pure function of the latest server snapshots.
//
// Every successful or failed server interaction becomes an event; the view
// is the fold of the event list over the initial state, so replaying the
// breadcrumb reproduces the view exactly.

import type {
  DbsDegreesPayload, DegreesPayload, LaurentPayload, QuiverPayload,
  SeedPayload, TSystemPayload, VertexId,
} from "./types.js";

export interface ViewState {
  seed: SeedPayload | null;
  quiver: QuiverPayload | null;
  degrees: DegreesPayload | null;
  selected: VertexId | null;
  inspected: LaurentPayload | null;
  dbs: DbsDegreesPayload | null;
  tsystem: TSystemPayload | null;
  error: string | null;
  breadcrumb: string[];
}

export type ViewEvent =
  | { kind: "seed"; payload: SeedPayload; label: string }
  | { kind: "quiver"; payload: QuiverPayload }
  | { kind: "degrees"; payload: DegreesPayload }
  | { kind: "select"; vertex: VertexId | null }
  | { kind: "inspect"; payload: LaurentPayload }
  | { kind: "dbs"; payload: DbsDegreesPayload }
  | { kind: "tsystem"; payload: TSystemPayload }
  | { kind: "error"; witness: string };

export function initialState(): ViewState {
  return {
    seed: null,
    quiver: null,
    degrees: null,
    selected: null,
    inspected: null,
    dbs: null,
    tsystem: null,
    error: null,
    breadcrumb: [],
  };
}

export function reduce(state: ViewState, event: ViewEvent): ViewState {
  switch (event.kind) {
    case "seed":
      return {
        ...state,
        seed: event.payload,
        error: null,
        breadcrumb: [...state.breadcrumb, event.label],
      };
    case "quiver":
      return { ...state, quiver: event.payload, error: null };
    case "degrees":
      return { ...state, degrees: event.payload, error: null };
    case "select":
      return { ...state, selected: event.vertex, inspected: null };
    case "inspect":
      return { ...state, inspected: event.payload, error: null };
    case "dbs":
      return { ...state, dbs: event.payload, error: null };
    case "tsystem":
      return { ...state, tsystem: event.payload, error: null };
    case "error":
      return { ...state, error: event.witness };
  }
}

export function replay(events: ViewEvent[]): ViewState {
  return events.reduce(reduce, initialState());
}
