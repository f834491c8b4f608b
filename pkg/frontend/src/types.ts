// Payload shapes of the serve-mode JSON API.  All q-exponents arrive as
// exact fraction strings; nothing here is ever parsed into floats.

export type VertexId = number | string;

export interface SeedJson {
  I: VertexId[];
  I_uf: VertexId[];
  d: number[];
  B: number[][];
  Lambda: string[][] | number[][] | null;
  labels: Record<string, VertexId>;
}

export interface SeedPayload {
  seed: SeedJson;
  history: VertexId[];
  word: number[] | null;
  layers: Record<string, number> | null;
  undo_depth: number;
}

export interface QuiverArrow {
  from: VertexId;
  to: VertexId;
  weight: number;
}

export interface QuiverPayload {
  dot: string;
  arrows: QuiverArrow[];
  frozen: VertexId[];
}

export interface LaurentTerm {
  exp: number[];
  coeff: [string, number][];
}

export interface LaurentPayload {
  text: string;
  terms: LaurentTerm[];
}

export type DegreesPayload = Record<string, number[]>;

export interface IntervalEntry {
  j: number;
  k: number;
  beta: number[];
}

export interface DbsDegreesPayload {
  intervals: IntervalEntry[];
  flat_word: number[];
  sigma: Record<string, number>;
}

export interface TSystemPayload {
  j: number;
  s: number;
  alpha: string;
  alpha_prime: string;
  participants: { interval: number[]; exponent: number }[];
  holds: boolean;
}

export interface ApiErrorPayload {
  detail?: string;
}
