// Compose/send and settings controllers. State is derived exclusively from
// the last gateway response: the client never counts attempts, never infers
// a lock, and keeps at most one request in flight.

import { GatewayClient } from "./gateway.js";
import {
  CodeResponse,
  Draft,
  GatewayError,
  SettingsPayload,
  SettingsUiState,
  UiSessionState,
} from "./types.js";

const EMPTY_DRAFT: Draft = { to: "", subject: "", body: "" };

export class ComposeController {
  state: UiSessionState = { kind: "composing", draft: { ...EMPTY_DRAFT } };
  pending = false;
  private sessionId: string | null = null;
  private listeners: Array<(state: UiSessionState) => void> = [];

  constructor(
    private readonly gateway: GatewayClient,
    private readonly userId: string,
  ) {}

  onChange(listener: (state: UiSessionState) => void): void {
    this.listeners.push(listener);
  }

  private setState(state: UiSessionState): void {
    this.state = state;
    for (const listener of this.listeners) listener(state);
  }

  get draft(): Draft {
    return this.state.draft;
  }

  editDraft(draft: Partial<Draft>): void {
    if (this.state.kind !== "composing" && this.state.kind !== "error") return;
    this.setState({ kind: "composing", draft: { ...this.state.draft, ...draft } });
  }

  /** Click on Send: upload the draft, then ask for the code challenge. */
  async send(): Promise<void> {
    if (this.pending || (this.state.kind !== "composing" && this.state.kind !== "error")) return;
    const draft = this.state.draft;
    this.pending = true;
    try {
      if (this.sessionId === null) {
        this.sessionId = (await this.gateway.createSession(this.userId)).session_id;
      }
      const to = draft.to.split(",").map((part) => part.trim()).filter(Boolean);
      await this.gateway.putDraft(this.sessionId, to, draft.subject, draft.body);
      const challenge = await this.gateway.requestSend(this.sessionId);
      this.setState({ kind: "awaiting_code", draft, remaining: challenge.remaining });
    } catch (error) {
      this.handleError(error, draft);
    } finally {
      this.pending = false;
    }
  }

  /** Submit the four digits gathered by the modal. */
  async submitCode(code: string): Promise<void> {
    if (this.pending || this.state.kind !== "awaiting_code" || this.sessionId === null) return;
    const draft = this.state.draft;
    this.pending = true;
    try {
      const outcome: CodeResponse = await this.gateway.submitCode(this.sessionId, code);
      switch (outcome.status) {
        case "sent":
          this.setState({ kind: "sent", draft });
          break;
        case "retry":
          this.setState({
            kind: "awaiting_code",
            draft,
            remaining: outcome.remaining ?? 0,
            notice: `Wrong code — ${outcome.remaining} attempt(s) remaining`,
          });
          break;
        case "locked":
          this.setState({ kind: "locked", draft });
          break;
        case "dangerous":
          this.setState({ kind: "dangerous", draft, reasons: outcome.reasons ?? [] });
          break;
      }
    } catch (error) {
      this.handleError(error, draft);
    } finally {
      this.pending = false;
    }
  }

  /** Start over with the draft preserved (after error or dangerous verdict). */
  backToCompose(): void {
    if (this.state.kind === "sent" || this.state.kind === "locked") return;
    this.sessionId = null;
    this.setState({ kind: "composing", draft: this.state.draft });
  }

  startNewMessage(): void {
    this.sessionId = null;
    this.setState({ kind: "composing", draft: { ...EMPTY_DRAFT } });
  }

  private handleError(error: unknown, draft: Draft): void {
    if (error instanceof GatewayError && error.body.code === "user_locked") {
      this.setState({ kind: "locked", draft });
      return;
    }
    const message = error instanceof Error ? error.message : String(error);
    // network failures land here too: the draft must survive
    this.setState({ kind: "error", draft, message });
  }
}

export class SettingsController {
  state: SettingsUiState = {
    kind: "settings_form",
    settings: { forwarding_address: null, signature: "" },
  };
  unlockedWithCode: string | null = null;
  pending = false;

  constructor(
    private readonly gateway: GatewayClient,
    private readonly userId: string,
  ) {}

  async load(): Promise<void> {
    try {
      const settings = await this.gateway.getSettings(this.userId);
      this.state = { kind: "settings_form", settings };
    } catch (error) {
      if (error instanceof GatewayError && error.body.code === "user_locked") {
        this.state = { kind: "settings_locked_out" };
        return;
      }
      throw error;
    }
  }

  /** The form stays read-only until a code is entered. */
  unlock(code: string): void {
    this.unlockedWithCode = code;
  }

  get editable(): boolean {
    return this.state.kind === "settings_form" && this.unlockedWithCode !== null;
  }

  async save(changes: Partial<SettingsPayload>): Promise<void> {
    if (this.pending || this.state.kind !== "settings_form" || this.unlockedWithCode === null) {
      return;
    }
    this.pending = true;
    const code = this.unlockedWithCode;
    this.unlockedWithCode = null; // the code is single-use in the UI
    try {
      const settings = await this.gateway.putSettings(this.userId, changes, code);
      this.state = { kind: "settings_form", settings, notice: "Saved" };
    } catch (error) {
      if (error instanceof GatewayError) {
        if (error.body.code === "user_locked") {
          this.state = { kind: "settings_locked_out" };
          return;
        }
        if (error.body.code === "code_mismatch") {
          const settings = this.state.settings;
          this.state = {
            kind: "settings_form",
            settings,
            notice: "Wrong code — settings unchanged",
            remaining: error.body.remaining_attempts,
          };
          return;
        }
      }
      throw error;
    } finally {
      this.pending = false;
    }
  }
}
