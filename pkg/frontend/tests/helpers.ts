/** Shared test scaffolding: the app shell DOM and a routed fetch stub. */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

const HERE = dirname(fileURLToPath(import.meta.url));

export function fixturePath(name: string): string {
  return join(HERE, "fixtures", name);
}

export function loadJson<T>(name: string): T {
  return JSON.parse(readFileSync(fixturePath(name), "utf-8")) as T;
}

export function loadPng(name: string): File {
  const bytes = readFileSync(fixturePath(name));
  return new File([new Uint8Array(bytes)], name, { type: "image/png" });
}

/** Mirrors the structure of index.html that initApp expects. */
export function appShell(): HTMLElement {
  const root = document.createElement("div");
  root.id = "viralens-app";
  root.innerHTML = `
    <nav>
      <button type="button" data-tab="score" class="active">score</button>
      <button type="button" data-tab="compare">compare</button>
      <button type="button" data-tab="clusters">clusters</button>
    </nav>
    <main>
      <section data-panel="score">
        <input id="score-file" type="file" />
        <div id="score-view"></div>
      </section>
      <section data-panel="compare" hidden>
        <input id="compare-file-a" type="file" />
        <div id="compare-error-a" class="slot-error"></div>
        <input id="compare-file-b" type="file" />
        <div id="compare-error-b" class="slot-error"></div>
        <button id="compare-run" type="button">compare</button>
        <div id="compare-view"></div>
      </section>
      <section data-panel="clusters" hidden>
        <div id="clusters-view"></div>
      </section>
    </main>`;
  document.body.appendChild(root);
  return root;
}

export interface RecordedCall {
  url: string;
  method: string;
  fields: string[];
}

export type Route = {
  status?: number;
  body?: unknown;
  fail?: boolean;
  delay?: Promise<void>;
};

/** Install a fetch stub routing "METHOD path" to canned responses.
 * Returns the call log; restore by reassigning globalThis.fetch. */
export function stubFetch(routes: Record<string, Route | Route[]>): RecordedCall[] {
  const calls: RecordedCall[] = [];
  const served: Record<string, number> = {};

  globalThis.fetch = (async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    const method = init?.method ?? "GET";
    const fields: string[] = [];
    if (init?.body instanceof FormData) {
      for (const key of (init.body as FormData).keys()) fields.push(key);
    }
    calls.push({ url, method, fields });

    const key = `${method} ${url}`;
    const entry = routes[key];
    if (entry === undefined) throw new Error(`unrouted request: ${key}`);
    const queue = Array.isArray(entry) ? entry : [entry];
    const route = queue[Math.min(served[key] ?? 0, queue.length - 1)]!;
    served[key] = (served[key] ?? 0) + 1;

    if (route.delay) await route.delay;
    if (route.fail) throw new TypeError("fetch failed");
    const status = route.status ?? 200;
    return {
      ok: status >= 200 && status < 300,
      status,
      statusText: `status ${status}`,
      json: async () => route.body,
    } as Response;
  }) as typeof fetch;

  return calls;
}

/** Let the app's promise chains settle. */
export async function flush(): Promise<void> {
  for (let i = 0; i < 4; i += 1) {
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}

/** jsdom file inputs are read-only; override the files list directly. */
export function setFiles(input: HTMLInputElement, files: File[]): void {
  Object.defineProperty(input, "files", { value: files, configurable: true });
}
