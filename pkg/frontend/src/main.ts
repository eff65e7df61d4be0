// Page wiring: inspector table, overlay canvas driven by a time scrubber or
// the video element, and the chat panel.

import { ApiClient } from "./api.js";
import { ChatController, renderChatHTML } from "./chat.js";
import { renderEmptyStateHTML, renderInspectorHTML } from "./inspector.js";
import { computeOverlayBoxes, drawOverlay } from "./overlay.js";
import type { DatabaseDoc } from "./types.js";

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
}

async function boot(): Promise<void> {
  const api = new ApiClient("");
  const params = new URLSearchParams(location.search);
  const videoId = params.get("video") ?? "motorcycle";

  const inspector = byId<HTMLDivElement>("inspector");
  const canvas = byId<HTMLCanvasElement>("overlay");
  const videoEl = byId<HTMLVideoElement>("player");
  const scrubber = byId<HTMLInputElement>("scrubber");
  const chatLog = byId<HTMLDivElement>("chat-log");
  const form = byId<HTMLFormElement>("chat-form");
  const input = byId<HTMLInputElement>("chat-input");

  let doc: DatabaseDoc;
  try {
    doc = await api.getTracklets(videoId);
  } catch (err) {
    inspector.innerHTML = renderEmptyStateHTML(
      `No database for video "${videoId}" (${String(err)})`);
    return;
  }
  inspector.innerHTML = renderInspectorHTML(doc);

  if (doc.video.path) {
    videoEl.src = doc.video.path;
  }
  scrubber.max = String(doc.video.duration_s);
  scrubber.step = String(1 / doc.video.fps);

  const session = await api.createSession(videoId);
  const chat = new ChatController(api, session.session_id);

  const ctx = canvas.getContext("2d");
  const paint = (timeS: number) => {
    if (!ctx) return;
    const highlighted = chat.highlightedIds();
    const boxes = computeOverlayBoxes(
      doc, timeS, canvas.width, canvas.height,
      highlighted.length > 0 ? highlighted : null);
    drawOverlay(ctx, boxes, canvas.width, canvas.height);
  };

  scrubber.addEventListener("input", () => paint(Number(scrubber.value)));
  videoEl.addEventListener("timeupdate", () => {
    scrubber.value = String(videoEl.currentTime);
    paint(videoEl.currentTime);
  });

  chat.onChange((state) => {
    chatLog.innerHTML = renderChatHTML(state);
    input.disabled = chat.inputDisabled;
    chatLog.scrollTop = chatLog.scrollHeight;
  });
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const question = input.value;
    input.value = "";
    void chat.send(question).then(() => paint(Number(scrubber.value)));
  });

  paint(0);
}

void boot();
