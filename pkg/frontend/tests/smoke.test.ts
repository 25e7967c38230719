/** End-to-end drive of the UI against a real engine server.

Walks the whole loop in one scripted browser session: load a generated
run table, drag three dims to Spatial 1 and two to Spatial 2, pick the
fitting task next to the always-on optimization, check the recommended
frames, copy two charts to the dashboard, then drag a slider and confirm
both views repaint from a single filter round trip.
*/

import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";
import { afterAll, beforeAll, expect, test } from "vitest";

import { ApiClient } from "../src/api.js";
import { App } from "../src/main.js";

const REPO_ROOT = resolve(process.cwd(), "..");
const PORT = 8300 + (process.pid % 400);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess | null = null;
let fixtureDir = "";
let csvText = "";
let sidecar: unknown;

const tick = () => new Promise<void>((resolve) => setTimeout(resolve, 0));

/** Wait out the mutation queue twice: handlers may queue a follow-up
request after the first one resolves. */
async function settle(app: App): Promise<void> {
  await app.api.idle();
  await tick();
  await app.api.idle();
  await tick();
}

beforeAll(async () => {
  fixtureDir = mkdtempSync(join(tmpdir(), "runviz-ui-"));
  const gen = spawnSync(
    "python3",
    ["-m", "runviz.cli", "fixture", "--kind", "edge", "--out", fixtureDir],
    { cwd: REPO_ROOT, encoding: "utf-8" },
  );
  if (gen.status !== 0) {
    throw new Error(`fixture generation failed: ${gen.stderr}`);
  }
  csvText = readFileSync(join(fixtureDir, "edge.csv"), "utf-8");
  sidecar = JSON.parse(readFileSync(join(fixtureDir, "edge.meta.json"), "utf-8"));

  server = spawn("python3", ["-m", "runviz.cli", "serve", "--port", String(PORT)], {
    cwd: REPO_ROOT,
    stdio: ["ignore", "ignore", "pipe"],
  });
  const deadline = Date.now() + 15000;
  for (;;) {
    try {
      const res = await fetch(`${BASE}/healthz`);
      if (res.ok) break;
    } catch {
      // not listening yet
    }
    if (Date.now() > deadline) throw new Error(`no server on port ${PORT} after 15s`);
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
});

afterAll(() => {
  server?.kill();
  if (fixtureDir) rmSync(fixtureDir, { recursive: true, force: true });
});

async function dragToField(app: App, dim: string, field: string): Promise<void> {
  const marker = document.querySelector<HTMLElement>(`#panel .marker[data-dim="${dim}"]`);
  expect(marker, `marker for ${dim}`).toBeTruthy();
  marker!.dispatchEvent(new Event("dragstart"));
  const box = document.querySelector<HTMLElement>(`#panel .field-box[data-field="${field}"]`);
  expect(box, `field box ${field}`).toBeTruthy();
  box!.dispatchEvent(new Event("drop"));
  await settle(app);
}

test("fixture to crossfiltered dashboard, end to end", async () => {
  document.body.innerHTML = "";
  const app = new App(document.body as HTMLElement, new ApiClient(BASE));
  await app.loadData(csvText, sidecar);
  expect(app.state.sessionId).toBeTruthy();
  expect(app.state.dimensions.length).toBeGreaterThanOrEqual(5);

  await dragToField(app, "low", "s1");
  await dragToField(app, "high", "s1");
  await dragToField(app, "sigma", "s1");
  await dragToField(app, "sep", "s2");
  await dragToField(app, "wep", "s2");
  expect(app.state.encoding.s1).toEqual(["low", "high", "sigma"]);
  expect(app.state.encoding.s2).toEqual(["sep", "wep"]);
  expect(
    document.querySelectorAll("#overview .option-block").length,
  ).toBeGreaterThanOrEqual(6);

  const fitting = document.querySelector<HTMLElement>('#taskbar [data-task="fitting"]');
  expect(fitting).toBeTruthy();
  fitting!.click();
  await settle(app);
  expect(app.state.activeTasks).toContain("optimization");
  expect(app.state.activeTasks).toContain("fitting");

  const framedOptions = new Set(
    [...document.querySelectorAll<HTMLElement>("#overview .option-block.framed")].map(
      (el) => el.dataset.option,
    ),
  );
  for (const wanted of ["SPLOM", "wDCP", "Hist", "SP"]) {
    expect(framedOptions.has(wanted), `frame on ${wanted}`).toBe(true);
  }
  const colorBox = document.querySelector<HTMLElement>(
    '#panel .field-box[data-field="color"]',
  );
  expect(colorBox?.classList.contains("framed"), "frame on the color field").toBe(true);

  const copy = async (option: string) => {
    const button = document.querySelector<HTMLElement>(
      `#overview .option-block[data-option="${option}"] .copy-view`,
    );
    expect(button, `copy button on ${option}`).toBeTruthy();
    button!.click();
    await settle(app);
  };
  await copy("SP");
  await copy("Hist");
  expect(app.state.doc?.views).toHaveLength(2);

  const viewsBefore = [...document.querySelectorAll<HTMLElement>("#dashboard .dash-view")];
  expect(viewsBefore).toHaveLength(2);
  const passBefore = viewsBefore.map((el) => el.dataset.passCount);
  expect(passBefore.every((v) => v !== undefined)).toBe(true);

  const filtersBefore = app.api.countRequests("PUT", "/filters");
  const hiThumb = document.querySelector<HTMLInputElement>(
    '#dashboard .slider[data-dim="low"] input.slider-hi',
  );
  expect(hiThumb, "slider for the low dimension").toBeTruthy();
  const extentLo = Number(hiThumb!.min);
  const extentHi = Number(hiThumb!.max);
  hiThumb!.value = String(extentLo + (extentHi - extentLo) * 0.35);
  hiThumb!.dispatchEvent(new Event("change"));
  await settle(app);

  expect(app.api.countRequests("PUT", "/filters") - filtersBefore).toBe(1);
  const viewsAfter = [...document.querySelectorAll<HTMLElement>("#dashboard .dash-view")];
  expect(viewsAfter).toHaveLength(2);
  const passAfter = viewsAfter.map((el) => el.dataset.passCount);
  expect(Number(passAfter[0])).toBeLessThan(Number(passBefore[0]));
  expect(passAfter[1]).not.toBe(passBefore[1]);
  expect(app.state.passCount).toBeLessThan(Number(passBefore[0]));
});
