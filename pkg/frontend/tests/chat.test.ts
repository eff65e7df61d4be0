import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { ChatController, renderChatHTML, renderTurnHTML } from "../src/chat.js";
import type { TurnDoc } from "../src/types.js";
import chatFixture from "./fixtures/chat_turns.json";

type Exchange = { request: { question: string }; response: TurnDoc };

const SESSION = chatFixture.session;
const EXCHANGES = chatFixture.exchanges as Exchange[];
const HISTORY = chatFixture.history as { turns: TurnDoc[] };

function jsonResponse(payload: unknown, status = 200): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { "content-type": "application/json" },
  });
}

// Replays the recorded message exchanges; anything unknown gets a 400.
function replayFetch() {
  const urls: string[] = [];
  const fetchImpl = async (url: string, init?: RequestInit): Promise<Response> => {
    urls.push(url);
    const { question } = JSON.parse(String(init?.body)) as { question: string };
    const exchange = EXCHANGES.find((e) => e.request.question === question);
    if (!exchange) {
      return jsonResponse(
        { error: { kind: "invalid-request", message: "unknown question" } }, 400);
    }
    return jsonResponse(exchange.response);
  };
  return { urls, fetchImpl };
}

function makeController() {
  const { urls, fetchImpl } = replayFetch();
  const api = new ApiClient("", fetchImpl);
  return { chat: new ChatController(api, SESSION.session_id), urls };
}

describe("ChatController", () => {
  it("replays the recorded conversation turn for turn", async () => {
    const { chat, urls } = makeController();
    for (const exchange of EXCHANGES) {
      const turn = await chat.send(exchange.request.question);
      expect(turn).toEqual(exchange.response);
    }
    expect(chat.state.turns).toEqual(HISTORY.turns);
    expect(urls).toEqual(EXCHANGES.map(() => `/v1/sessions/${SESSION.session_id}/messages`));
  });

  it("records apology turns like any other turn", async () => {
    const { chat } = makeController();
    const turn = await chat.send("Why is the sky blue?");
    expect(turn?.error).toEqual({ kind: "untranslatable-question" });
    expect(turn?.query).toBeNull();
    expect(turn?.answer).toContain("I am sorry");
    expect(chat.state.turns).toHaveLength(1);
    expect(chat.state.error).toBeNull();
  });

  it("highlights the record ids from the latest turn", async () => {
    const { chat } = makeController();
    expect(chat.highlightedIds()).toEqual([]);
    await chat.send("What does the motorcycle look like?");
    expect(chat.highlightedIds()).toEqual([1]);
    // COUNT rows carry no record id, so nothing is highlighted.
    await chat.send("How many persons are there in this video?");
    expect(chat.highlightedIds()).toEqual([]);
  });

  it("disables input while a message is in flight", async () => {
    let release!: (response: Response) => void;
    const gate = new Promise<Response>((resolve) => {
      release = resolve;
    });
    const api = new ApiClient("", () => gate);
    const chat = new ChatController(api, "s1");

    const sendPromise = chat.send("What does the motorcycle look like?");
    expect(chat.inputDisabled).toBe(true);
    expect(await chat.send("another question")).toBeNull();

    release(jsonResponse(EXCHANGES[1].response));
    const turn = await sendPromise;
    expect(turn?.answer).toBe("orange in color.");
    expect(chat.inputDisabled).toBe(false);
    expect(chat.state.turns).toHaveLength(1);
  });

  it("emits state changes around each send", async () => {
    const { chat } = makeController();
    const seen: { pending: boolean; turns: number }[] = [];
    chat.onChange((state) => {
      seen.push({ pending: state.pending, turns: state.turns.length });
    });
    await chat.send("How many persons are there in this video?");
    expect(seen).toEqual([
      { pending: true, turns: 0 },
      { pending: false, turns: 1 },
    ]);
  });

  it("surfaces request failures without recording a turn", async () => {
    const { chat } = makeController();
    const turn = await chat.send("not in the fixture");
    expect(turn).toBeNull();
    expect(chat.state.turns).toEqual([]);
    expect(chat.state.error).toBe("invalid-request: unknown question");
    expect(chat.inputDisabled).toBe(false);

    // The next successful send clears the error.
    await chat.send("Why is the sky blue?");
    expect(chat.state.error).toBeNull();
    expect(chat.state.turns).toHaveLength(1);
  });

  it("ignores blank questions without calling the service", async () => {
    const { chat, urls } = makeController();
    expect(await chat.send("   ")).toBeNull();
    expect(urls).toEqual([]);
    expect(chat.state.turns).toEqual([]);
  });
});

describe("chat rendering", () => {
  it("renders a question, answer, and collapsible query", () => {
    const html = renderTurnHTML(EXCHANGES[1].response);
    expect(html).toContain('<div class="bubble user">What does the motorcycle look like?</div>');
    expect(html).toContain("orange in color.");
    expect(html).toContain(
      "<code>SELECT Appearance FROM tracklets WHERE Category = 'motorcycle'</code>");
  });

  it("marks apology turns and omits the query details", () => {
    const html = renderTurnHTML(EXCHANGES[2].response);
    expect(html).toContain('class="bubble bot error-kind"');
    expect(html).not.toContain("<details");
  });

  it("renders the transcript plus any transport error", () => {
    const state = {
      turns: [EXCHANGES[0].response],
      pending: false,
      error: "http-error: request failed with status 502",
    };
    const html = renderChatHTML(state);
    expect(html).toContain("There is 1 person in this video.");
    expect(html).toContain(
      '<div class="bubble error">http-error: request failed with status 502</div>');
  });
});
