// Typed client for the serve-mode JSON API.
//
// Every request carries a monotone sequence number.  A response is only
// reported as current if no later-issued request has already completed;
// callers drop stale results instead of rendering them.

import type {
  DbsDegreesPayload, DegreesPayload, LaurentPayload, QuiverPayload,
  SeedPayload, TSystemPayload, VertexId,
} from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, public witness: string) {
    super(`HTTP ${status}: ${witness}`);
  }
}

export interface Tracked<T> {
  seq: number;
  stale: boolean;
  data: T;
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private seq = 0;
  private applied = 0;

  constructor(
    private base: string,
    private fetchFn: FetchLike = (u, i) => fetch(u, i),
  ) {}

  private async call<T>(
    method: string, path: string, body?: unknown,
  ): Promise<Tracked<T>> {
    const seq = ++this.seq;
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const resp = await this.fetchFn(this.base + path, init);
    if (!resp.ok) {
      throw new ApiError(resp.status, await witnessText(resp));
    }
    const data = (await resp.json()) as T;
    const stale = seq <= this.applied;
    if (!stale) {
      this.applied = seq;
    }
    return { seq, stale, data };
  }

  loadWord(word: number[], cartan: string): Promise<Tracked<SeedPayload>> {
    return this.call("POST", "/load", { word, cartan });
  }

  loadSeed(seed: unknown): Promise<Tracked<SeedPayload>> {
    return this.call("POST", "/load", { seed });
  }

  seed(): Promise<Tracked<SeedPayload>> {
    return this.call("GET", "/seed");
  }

  mutate(k: VertexId): Promise<Tracked<SeedPayload>> {
    return this.call("POST", "/mutate", { k });
  }

  freeze(F: VertexId[]): Promise<Tracked<SeedPayload>> {
    return this.call("POST", "/freeze", { F });
  }

  undo(): Promise<Tracked<SeedPayload>> {
    return this.call("POST", "/undo");
  }

  quiver(): Promise<Tracked<QuiverPayload>> {
    return this.call("GET", "/quiver");
  }

  degrees(): Promise<Tracked<DegreesPayload>> {
    return this.call("GET", "/degrees");
  }

  variable(i: VertexId): Promise<Tracked<LaurentPayload>> {
    return this.call("GET", `/var/${i}`);
  }

  dbsDegrees(): Promise<Tracked<DbsDegreesPayload>> {
    return this.call("GET", "/dbs/degrees");
  }

  tsystem(j: number, s: number): Promise<Tracked<TSystemPayload>> {
    return this.call("POST", "/dbs/tsystem", { j, s });
  }

  // Raw text fetch used for byte-identical snapshot comparison.
  async rawText(path: string): Promise<string> {
    const resp = await this.fetchFn(this.base + path, { method: "GET" });
    if (!resp.ok) {
      throw new ApiError(resp.status, await witnessText(resp));
    }
    return resp.text();
  }
}

async function witnessText(resp: Response): Promise<string> {
  const text = await resp.text();
  try {
    const parsed = JSON.parse(text) as { detail?: unknown };
    if (typeof parsed.detail === "string") {
      return parsed.detail;
    }
  } catch {
    // not JSON; fall through to the raw body
  }
  return text;
}
