import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, ResponseBody } from "../src/api.js";

type Call = { url: string; init?: RequestInit };

function fakeFetch(
  handler: (url: string, init?: RequestInit) => Response | Error,
  calls: Call[] = [],
): typeof fetch {
  return (async (input: any, init?: RequestInit) => {
    const url = String(input);
    calls.push({ url, init });
    const out = handler(url, init);
    if (out instanceof Error) throw out;
    return out;
  }) as typeof fetch;
}

const json = (status: number, body: unknown) =>
  new Response(JSON.stringify(body), { status });

const RESP: ResponseBody = { trial_index: 3, detected: true, response_ms: 640 };

describe("ApiClient", () => {
  it("fetches and parses session metadata", async () => {
    const api = new ApiClient(
      "http://x",
      fakeFetch(() => json(200, { n_trials: 92, answered: [] })),
    );
    const meta = await api.session();
    expect(meta.n_trials).toBe(92);
  });

  it("raises ApiError with status on failures", async () => {
    const api = new ApiClient("http://x", fakeFetch(() => json(404, {})));
    await expect(api.trial(99)).rejects.toBeInstanceOf(ApiError);
    await expect(api.trial(99)).rejects.toMatchObject({ status: 404 });
  });

  it("delivers a response once on 204", async () => {
    const calls: Call[] = [];
    const api = new ApiClient(
      "",
      fakeFetch(() => new Response(null, { status: 204 }), calls),
    );
    await expect(api.postResponse(RESP)).resolves.toBe("delivered");
    expect(calls.length).toBe(1);
    expect(JSON.parse(String(calls[0].init?.body))).toEqual(RESP);
  });

  it("retries network failures, then succeeds", async () => {
    let attempt = 0;
    const api = new ApiClient(
      "",
      fakeFetch(() =>
        ++attempt < 3 ? new Error("connection reset")
                      : new Response(null, { status: 204 }),
      ),
    );
    await expect(api.postResponse(RESP, 3, 0)).resolves.toBe("delivered");
    expect(attempt).toBe(3);
  });

  it("gives up after the retry budget", async () => {
    const api = new ApiClient("", fakeFetch(() => new Error("down")));
    await expect(api.postResponse(RESP, 2, 0)).rejects.toThrow("down");
  });

  it("treats 409 as already-delivered, not an error", async () => {
    const api = new ApiClient(
      "",
      fakeFetch(() => json(409, { error: "duplicate_response" })),
    );
    await expect(api.postResponse(RESP)).resolves.toBe("duplicate");
  });

  it("does not retry caller bugs like 400", async () => {
    const calls: Call[] = [];
    const api = new ApiClient("", fakeFetch(() => json(400, {}), calls));
    await expect(api.postResponse(RESP, 5, 0)).rejects.toBeInstanceOf(ApiError);
    expect(calls.length).toBe(1);
  });
});
