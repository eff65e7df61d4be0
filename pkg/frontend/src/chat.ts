// Chat panel state machine. DOM-free so it can be tested against recorded
// service responses; main.ts binds it to the page.

import { ApiClient, ApiError } from "./api.js";
import { escapeHtml } from "./inspector.js";
import type { TurnDoc } from "./types.js";

export type ChatState = {
  turns: TurnDoc[];
  pending: boolean;
  error: string | null;
};

export type ChatListener = (state: ChatState) => void;

export class ChatController {
  readonly state: ChatState = { turns: [], pending: false, error: null };
  private listeners: ChatListener[] = [];

  constructor(private api: ApiClient, private sessionId: string) {}

  onChange(listener: ChatListener): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  // While a post is in flight the input stays disabled so turns cannot
  // interleave within the session.
  get inputDisabled(): boolean {
    return this.state.pending;
  }

  // Record ids retrieved by the latest turn; the overlay highlights these.
  highlightedIds(): number[] {
    const last = this.state.turns[this.state.turns.length - 1];
    if (!last) return [];
    return last.record_ids.filter((id): id is number => id !== null);
  }

  async send(question: string): Promise<TurnDoc | null> {
    if (!question.trim() || this.state.pending) return null;
    this.state.pending = true;
    this.state.error = null;
    this.emit();
    try {
      const turn = await this.api.sendMessage(this.sessionId, question);
      this.state.turns.push(turn);
      return turn;
    } catch (err) {
      this.state.error =
        err instanceof ApiError ? `${err.kind}: ${err.message}` : String(err);
      return null;
    } finally {
      this.state.pending = false;
      this.emit();
    }
  }
}

export function renderTurnHTML(turn: TurnDoc): string {
  const classes = turn.error ? "bubble bot error-kind" : "bubble bot";
  let html = `<div class="bubble user">${escapeHtml(turn.question)}</div>`;
  html += `<div class="${classes}">${escapeHtml(turn.answer)}`;
  if (turn.query !== null) {
    html += `<details class="query"><summary>query</summary><code>${escapeHtml(turn.query)}</code></details>`;
  }
  html += "</div>";
  return html;
}

export function renderChatHTML(state: ChatState): string {
  let html = state.turns.map(renderTurnHTML).join("");
  if (state.error !== null) {
    html += `<div class="bubble error">${escapeHtml(state.error)}</div>`;
  }
  return html;
}
