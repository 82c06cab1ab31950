// Scripted wizard session against a real served model database: builds the
// demo db, boots the backend, and drives the same store the page uses.

import { spawn, spawnSync, ChildProcess } from 'node:child_process';
import { mkdtempSync, rmSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join, resolve } from 'node:path';
import { fileURLToPath } from 'node:url';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { ReportingApi } from '../src/api.js';
import { decodePpm, pixelAt } from '../src/ppm.js';
import { renderSuggestionList } from '../src/render.js';
import { WizardStore } from '../src/state.js';

const REPO_ROOT = resolve(fileURLToPath(new URL('.', import.meta.url)), '../..');
const PORT = 8640 + (process.pid % 200);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess | null = null;
let dbDir: string;

// Every estimate_size the server ever sent, in order, teed off global fetch.
const servedEstimates: number[] = [];
const realFetch = globalThis.fetch;

function teeFetch(): void {
  globalThis.fetch = (async (input: any, init?: any) => {
    const response = await realFetch(input, init);
    const clone = response.clone();
    try {
      const body = await clone.json();
      if (body && typeof body.estimate_size === 'number') {
        servedEstimates.push(body.estimate_size);
      }
    } catch {
      // non-JSON responses (markdown, screenshots) are not session state
    }
    return response;
  }) as typeof fetch;
}

async function waitForServer(): Promise<void> {
  for (let attempt = 0; attempt < 100; attempt++) {
    try {
      const response = await realFetch(`${BASE}/app`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((resolveSleep) => setTimeout(resolveSleep, 100));
  }
  throw new Error('backend did not come up');
}

beforeAll(async () => {
  dbDir = join(mkdtempSync(join(tmpdir(), 'wizard-e2e-')), 'db');
  const analyze = spawnSync('python3', [
    '-m', 'guiflow.cli', 'analyze', join(REPO_ROOT, 'corpora', 'demo-app'), '-o', dbDir,
  ], { cwd: REPO_ROOT, encoding: 'utf-8' });
  expect(analyze.status, analyze.stderr).toBe(0);

  server = spawn('python3', [
    '-m', 'guiflow.cli', 'serve', '--db', dbDir, '--bind', `127.0.0.1:${PORT}`,
  ], { cwd: REPO_ROOT, stdio: 'ignore' });
  teeFetch();
  await waitForServer();
}, 60_000);

afterAll(() => {
  globalThis.fetch = realFetch;
  server?.kill();
  rmSync(resolve(dbDir, '..'), { recursive: true, force: true });
});

describe('wizard end-to-end', () => {
  it('reports the crash path with verified screenshots', async () => {
    const api = new ReportingApi(BASE);
    const store = new WizardStore(api);

    const app = await api.appInfo();
    expect(app).toMatchObject({ app_id: 'demo-app', states: 4, edges: 7 });

    await store.open(true);
    expect(store.error).toBeNull();
    expect(store.estimateSize).toBe(servedEstimates.at(-1));
    expect(store.estimateSize).toBe(1);
    expect(store.suggestions.map((s) => s.component)).toEqual(['btnGo', 'chkOpt']);

    // Step 1: the reporter picks chkOpt and verifies it by its screenshot.
    const chkOpt = store.suggestions.find((s) => s.component === 'chkOpt')!;
    expect(chkOpt.variants).toHaveLength(1);
    const variant = chkOpt.variants[0];

    const shot = decodePpm(await api.fetchScreenshot(variant.screenshot_url));
    expect(shot).not.toBeNull();
    expect(shot!.width).toBe(270);
    expect(shot!.height).toBe(480);
    expect(pixelAt(shot!, 0, 0)).toEqual([245, 245, 245]);      // background
    expect(pixelAt(shot!, 30, 140)).toEqual([0, 0, 0]);         // chkOpt border
    expect(pixelAt(shot!, 29, 139)).toEqual([234, 67, 53]);     // highlight ring

    await store.confirm('chkOpt', 'tap', variant.source_state);
    expect(store.error).toBeNull();
    expect(store.estimateSize).toBe(servedEstimates.at(-1));
    expect(store.steps).toHaveLength(1);

    // A detour: undoing returns the UI to the identical suggestion list.
    const suggestionsBefore = JSON.stringify(store.suggestions);
    await store.undo();
    expect(store.estimateSize).toBe(servedEstimates.at(-1));
    expect(store.suggestions.map((s) => s.component)).toEqual(['btnGo', 'chkOpt']);
    await store.confirm('chkOpt', 'tap', variant.source_state);
    expect(JSON.stringify(store.suggestions)).toBe(suggestionsBefore);

    // Step 2: the freshly revealed crash button.
    const btnCrash = store.suggestions.find((s) => s.component === 'btnCrash')!;
    expect(btnCrash.variants).toHaveLength(1);
    await store.confirm('btnCrash', 'tap', btnCrash.variants[0].source_state);
    expect(store.error).toBeNull();
    expect(store.estimateSize).toBe(servedEstimates.at(-1));
    expect(store.steps).toHaveLength(2);
    expect(store.suggestions).toEqual([]);
    expect(renderSuggestionList(store.suggestions, null)).toContain('Bug path complete');

    // Finalize with a title and read back the served markdown.
    store.title = 'Crash after enabling extras';
    store.description = 'Enable extras, then tap the new button.';
    await store.finalize();
    expect(store.error).toBeNull();
    expect(store.reportId).not.toBeNull();

    const markdown = await api.reportMarkdown(store.reportId!);
    expect(markdown).toContain('1. Tap `chkOpt` on `Main`');
    expect(markdown).toContain('2. Tap `btnCrash` on `Main`');
    expect(markdown).toContain('crashes with message `NullPointerException`');
    expect(markdown.match(/^\d+\. Tap /gm)).toHaveLength(2);
  }, 30_000);

  it('surfaces server rejections as user-visible errors', async () => {
    const api = new ReportingApi(BASE);
    const store = new WizardStore(api);
    await store.open(true);
    await store.confirm('btnBack', 'tap', 'ffffffff');  // never suggested here
    expect(store.error).toMatch(/^404/);
    expect(store.steps).toHaveLength(0);
    expect(store.estimateSize).toBe(1);  // unchanged, still the server's last word
  });

  it('keeps malformed screenshots from breaking the grid', async () => {
    expect(decodePpm(new TextEncoder().encode('P3\n270 480\n255\n1 2'))).toBeNull();
  });
});
