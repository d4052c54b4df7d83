import { afterEach, describe, expect, it } from "vitest";

import {
  ApiError,
  NetworkError,
  ViralensClient,
  type ScoreResponse,
} from "../src/api.js";
import { stubFetch } from "./helpers.js";

const realFetch = globalThis.fetch;

afterEach(() => {
  globalThis.fetch = realFetch;
});

function png(name: string): File {
  return new File([new Uint8Array([137, 80, 78, 71])], name, { type: "image/png" });
}

describe("client routing", () => {
  it("hits the documented endpoints relative to the base", async () => {
    const calls = stubFetch({
      "GET http://api.test/healthz": { body: { status: "ok", archive_loaded: true } },
      "GET http://api.test/api/clusters": { body: [] },
    });
    const client = new ViralensClient("http://api.test");
    const health = await client.health();
    await client.clusters();
    expect(health.archive_loaded).toBe(true);
    expect(calls.map((c) => c.url)).toEqual([
      "http://api.test/healthz",
      "http://api.test/api/clusters",
    ]);
  });

  it("defaults to same-origin paths", async () => {
    const calls = stubFetch({ "GET /api/clusters": { body: [] } });
    await new ViralensClient().clusters();
    expect(calls[0]?.url).toBe("/api/clusters");
  });

  it("posts score uploads under the field name `image`", async () => {
    const body: ScoreResponse = {
      theta: [],
      expected_activity: 0,
      viral_probability: 0,
      model_version: "v",
    };
    const calls = stubFetch({ "POST /api/score": { body } });
    await new ViralensClient().score(png("a.png"));
    expect(calls[0]?.fields).toEqual(["image"]);
  });

  it("posts compare uploads as image_a then image_b", async () => {
    const calls = stubFetch({ "POST /api/compare": { body: {} } });
    await new ViralensClient().compare(png("a.png"), png("b.png"));
    expect(calls[0]?.fields).toEqual(["image_a", "image_b"]);
  });
});

describe("client errors", () => {
  it("surfaces the service detail string on non-2xx", async () => {
    stubFetch({
      "POST /api/score": {
        status: 422,
        body: { detail: "[decode] could not decode image" },
      },
    });
    const err = await new ViralensClient()
      .score(png("junk.png"))
      .catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).status).toBe(422);
    expect((err as ApiError).detail).toContain("[decode]");
  });

  it("keeps the status text when the error body is not JSON", async () => {
    globalThis.fetch = (async () =>
      ({
        ok: false,
        status: 502,
        statusText: "Bad Gateway",
        json: async () => {
          throw new SyntaxError("not json");
        },
      }) as unknown as Response) as typeof fetch;
    const err = await new ViralensClient().clusters().catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).detail).toBe("Bad Gateway");
  });

  it("wraps transport failures in NetworkError", async () => {
    stubFetch({ "GET /api/clusters": { fail: true } });
    const err = await new ViralensClient().clusters().catch((e: unknown) => e);
    expect(err).toBeInstanceOf(NetworkError);
  });
});
