// Full UI round trip against the real engine server: load the Kronecker
// word, mutate along the flattening sequence, read the interval-degree
// table, then undo everything and check the quiver snapshot is restored
// byte-identically.

import { ChildProcess, spawn } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { ApiClient } from "../src/api.js";

const PORT = 8900 + (process.pid % 1000);
const BASE = `http://127.0.0.1:${PORT}`;
const SIGMA = [1, 3, 4, 2, 5, 1, 3, 1, 2];

let server: ChildProcess;

async function waitForServer(): Promise<void> {
  for (let i = 0; i < 100; i++) {
    try {
      await fetch(`${BASE}/seed`);
      return;
    } catch {
      await new Promise((r) => setTimeout(r, 200));
    }
  }
  throw new Error("server did not come up");
}

beforeAll(async () => {
  server = spawn(
    "python3",
    ["-m", "qcluster.cli", "serve", "--port", String(PORT)],
    { cwd: "..", stdio: "ignore" },
  );
  await waitForServer();
}, 60_000);

afterAll(() => {
  server.kill();
});

describe("UI round trip", () => {
  it("load, mutate along the flattening word, inspect, undo", async () => {
    const client = new ApiClient(BASE);

    const loaded = await client.loadWord([1, 2, 1, 1, 2, 2, 1], "K2");
    expect(loaded.data.word).toEqual([1, 2, 1, 1, 2, 2, 1]);
    expect(loaded.data.layers).not.toBeNull();

    // snapshots of the initial state, as raw bytes
    const seed0 = await client.rawText("/seed");
    const quiver0 = await client.rawText("/quiver");

    // the degree panel shows the interval table
    const dbs = await client.dbsDegrees();
    expect(dbs.data.flat_word).toEqual(SIGMA);
    const table = new Map(
      dbs.data.intervals.map((e) => [`${e.j},${e.k}`, e.beta.join(",")]),
    );
    expect(table.get("3,7")).toBe("-1,0,0,0,0,0,1");
    expect(table.get("6,6")).toBe("0,0,0,0,-1,1,0");
    expect(table.get("4,4")).toBe("0,0,-1,1,0,0,0");
    expect(dbs.data.sigma).toEqual({ "1": 4, "4": 1, "2": 5, "5": 2, "3": 3 });

    // click-mutate along the flattening word
    for (const k of SIGMA) {
      const snap = await client.mutate(k);
      expect(snap.data.undo_depth).toBeGreaterThan(0);
    }
    const mutated = await client.rawText("/seed");
    expect(mutated).not.toBe(seed0);

    // inspector: the current variable at a mutated vertex is a Laurent
    // polynomial with more than one term
    const variable = await client.variable(1);
    expect(variable.data.terms.length).toBeGreaterThan(1);

    // undo all the way back; the server snapshot must match byte for byte
    for (let i = 0; i < SIGMA.length; i++) {
      await client.undo();
    }
    expect(await client.rawText("/seed")).toBe(seed0);
    expect(await client.rawText("/quiver")).toBe(quiver0);
  }, 120_000);

  it("surfaces server errors with their witness text", async () => {
    const client = new ApiClient(BASE);
    await client.loadWord([1, 2, 1], "A2");
    await expect(client.undo()).rejects.toThrowError(/nothing to undo/);
    await expect(client.mutate(99)).rejects.toThrowError(/99/);
  }, 60_000);

  it("freeze-then-mutate matches mutate-then-freeze on the B-matrix",
    async () => {
      const client = new ApiClient(BASE);
      await client.loadWord([1, 2, 1, 2], "A2");
      await client.freeze([2]);
      await client.mutate(1);
      const fm = (await client.seed()).data.seed.B;
      await client.loadWord([1, 2, 1, 2], "A2");
      await client.mutate(1);
      await client.freeze([2]);
      const mf = (await client.seed()).data.seed.B;
      expect(fm).toEqual(mf);
    }, 60_000);
});
