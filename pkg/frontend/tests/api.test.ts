import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import type { DatabaseDoc, QueryResponse } from "../src/types.js";
import motorcycleJson from "./fixtures/motorcycle.tracklets.json";
import queryFixture from "./fixtures/query_response.json";

type RecordedCall = {
  url: string;
  method: string;
  body: unknown;
  contentType: string | undefined;
};

function jsonResponse(payload: unknown, status = 200): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { "content-type": "application/json" },
  });
}

// Fetch stand-in that records every call and answers with a fixed payload.
function recordingFetch(payload: unknown, status = 200) {
  const calls: RecordedCall[] = [];
  const fetchImpl = async (url: string, init?: RequestInit): Promise<Response> => {
    const headers = (init?.headers ?? {}) as Record<string, string>;
    calls.push({
      url,
      method: init?.method ?? "GET",
      body: init?.body === undefined ? undefined : JSON.parse(String(init.body)),
      contentType: headers["content-type"],
    });
    return jsonResponse(payload, status);
  };
  return { calls, fetchImpl };
}

describe("ApiClient request construction", () => {
  it("gets tracklets from /v1/videos/{id}/tracklets", async () => {
    const { calls, fetchImpl } = recordingFetch(motorcycleJson);
    const api = new ApiClient("", fetchImpl);
    const doc: DatabaseDoc = await api.getTracklets("motorcycle");
    expect(calls).toEqual([
      {
        url: "/v1/videos/motorcycle/tracklets",
        method: "GET",
        body: undefined,
        contentType: undefined,
      },
    ]);
    expect(doc.video.fps).toBe(5);
    expect(doc.tracklets).toHaveLength(3);
  });

  it("percent-encodes path parameters", async () => {
    const { calls, fetchImpl } = recordingFetch(motorcycleJson);
    const api = new ApiClient("", fetchImpl);
    await api.getTracklets("my video/x");
    expect(calls[0].url).toBe("/v1/videos/my%20video%2Fx/tracklets");
  });

  it("posts queries as JSON and parses the result table", async () => {
    const { calls, fetchImpl } = recordingFetch(queryFixture.response);
    const api = new ApiClient("", fetchImpl);
    const result: QueryResponse = await api.runQuery(
      "motorcycle", queryFixture.request.query);
    expect(calls[0].url).toBe("/v1/videos/motorcycle/query");
    expect(calls[0].method).toBe("POST");
    expect(calls[0].contentType).toBe("application/json");
    expect(calls[0].body).toEqual({ query: queryFixture.request.query });
    expect(result).toEqual(queryFixture.response);
    expect(result.rows).toEqual([[1, "motorcycle"], [2, "person"]]);
  });

  it("creates sessions with the video id", async () => {
    const payload = { session_id: "s1", video_id: "motorcycle" };
    const { calls, fetchImpl } = recordingFetch(payload, 201);
    const api = new ApiClient("", fetchImpl);
    const session = await api.createSession("motorcycle");
    expect(calls[0]).toEqual({
      url: "/v1/sessions",
      method: "POST",
      body: { video_id: "motorcycle" },
      contentType: "application/json",
    });
    expect(session).toEqual(payload);
  });

  it("posts chat messages to the session", async () => {
    const { calls, fetchImpl } = recordingFetch({});
    const api = new ApiClient("", fetchImpl);
    await api.sendMessage("s1", "How many persons are there?");
    expect(calls[0].url).toBe("/v1/sessions/s1/messages");
    expect(calls[0].body).toEqual({ question: "How many persons are there?" });
  });

  it("fetches session history", async () => {
    const payload = { session_id: "s1", video_id: "motorcycle", turns: [] };
    const { calls, fetchImpl } = recordingFetch(payload);
    const api = new ApiClient("", fetchImpl);
    const history = await api.getHistory("s1");
    expect(calls[0].url).toBe("/v1/sessions/s1/history");
    expect(calls[0].method).toBe("GET");
    expect(history.turns).toEqual([]);
  });

  it("prefixes every path with the configured base URL", async () => {
    const { calls, fetchImpl } = recordingFetch({ session_id: "s1", video_id: "v" });
    const api = new ApiClient("http://svc:8000", fetchImpl);
    await api.createSession("v");
    expect(calls[0].url).toBe("http://svc:8000/v1/sessions");
  });
});

describe("ApiClient error handling", () => {
  it("raises ApiError with the service's error kind", async () => {
    const envelope = { error: { kind: "video-not-found", message: "no such video" } };
    const { fetchImpl } = recordingFetch(envelope, 404);
    const api = new ApiClient("", fetchImpl);
    const err = await api.getTracklets("nope").catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    const apiErr = err as ApiError;
    expect(apiErr.kind).toBe("video-not-found");
    expect(apiErr.status).toBe(404);
    expect(apiErr.message).toBe("no such video");
  });

  it("falls back to http-error for non-JSON failures", async () => {
    const fetchImpl = async (): Promise<Response> =>
      new Response("bad gateway", { status: 502 });
    const api = new ApiClient("", fetchImpl);
    const err = await api.getHistory("s1").catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    const apiErr = err as ApiError;
    expect(apiErr.kind).toBe("http-error");
    expect(apiErr.status).toBe(502);
    expect(apiErr.message).toBe("request failed with status 502");
  });

  it("treats JSON errors without the envelope as http-error", async () => {
    const fetchImpl = async (): Promise<Response> =>
      jsonResponse({ detail: "not our shape" }, 500);
    const api = new ApiClient("", fetchImpl);
    const err = await api.getHistory("s1").catch((e: unknown) => e);
    expect((err as ApiError).kind).toBe("http-error");
  });
});
