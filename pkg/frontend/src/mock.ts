// In-memory gateway implementing the endpoint semantics, for tests and the
// standalone demo mode. Behaves like the real service: three cumulative
// failures lock, lookalike recipients yield a dangerous verdict, settings
// drive the same attempt budget.

import { GatewayClient } from "./gateway.js";
import {
  ChallengeResponse,
  CodeResponse,
  GatewayError,
  SessionResponse,
  SettingsPayload,
} from "./types.js";

const MAX_ATTEMPTS = 3;

function apiError(status: number, code: string, message: string, remaining?: number): GatewayError {
  return new GatewayError({ status, code, message, remaining_attempts: remaining });
}

interface MockSession {
  state: "composing" | "awaiting_code" | "sent" | "failed_locked";
  to: string[];
}

export class MockGateway implements GatewayClient {
  correctCode = "0990";
  lookalikeRecipients = new Set<string>(["aga.ga@gmail.com"]);
  suspectBodies = new Set<string>();
  failedAttempts = 0;
  locked = false;
  settings: SettingsPayload = { forwarding_address: null, signature: "" };

  private sessions = new Map<string, MockSession>();
  private counter = 0;
  private lastBody = "";

  async createSession(_userId: string): Promise<SessionResponse> {
    const id = `mock-${++this.counter}`;
    this.sessions.set(id, { state: "composing", to: [] });
    return { session_id: id };
  }

  private session(id: string): MockSession {
    const session = this.sessions.get(id);
    if (!session) throw apiError(404, "not_found", `session ${id} not found`);
    return session;
  }

  async putDraft(sessionId: string, to: string[], _subject: string, body: string): Promise<void> {
    const session = this.session(sessionId);
    if (session.state !== "composing") {
      throw apiError(409, "invalid_state", "cannot edit draft now");
    }
    if (to.some((addr) => !addr.includes("@"))) {
      throw apiError(400, "malformed_address", "recipient is not an address");
    }
    session.to = to;
    this.lastBody = body;
  }

  async requestSend(sessionId: string): Promise<ChallengeResponse> {
    const session = this.session(sessionId);
    if (this.locked) throw apiError(423, "user_locked", "profile is locked");
    if (session.state !== "composing") {
      throw apiError(409, "invalid_state", "send already requested");
    }
    session.state = "awaiting_code";
    return { status: "code_required", remaining: MAX_ATTEMPTS - this.failedAttempts };
  }

  async submitCode(sessionId: string, code: string): Promise<CodeResponse> {
    const session = this.session(sessionId);
    if (this.locked) throw apiError(423, "user_locked", "profile is locked");
    if (session.state !== "awaiting_code") {
      throw apiError(409, "invalid_state", "no code challenge outstanding");
    }
    if (code !== this.correctCode) {
      this.failedAttempts += 1;
      if (this.failedAttempts >= MAX_ATTEMPTS) {
        this.locked = true;
        session.state = "failed_locked";
        return { status: "locked", remaining: 0 };
      }
      return { status: "retry", remaining: MAX_ATTEMPTS - this.failedAttempts };
    }
    const reasons: string[] = [];
    if (session.to.some((addr) => this.lookalikeRecipients.has(addr))) {
      reasons.push("email_id");
    }
    if (this.suspectBodies.has(this.lastBody)) {
      reasons.push("stylometry");
    }
    if (reasons.length > 0) {
      session.state = "failed_locked";
      return { status: "dangerous", reasons };
    }
    session.state = "sent";
    return { status: "sent" };
  }

  async getSettings(_userId: string): Promise<SettingsPayload> {
    if (this.locked) throw apiError(423, "user_locked", "profile is locked");
    return { ...this.settings };
  }

  async putSettings(
    _userId: string,
    changes: Partial<SettingsPayload>,
    code: string,
  ): Promise<SettingsPayload> {
    if (this.locked) throw apiError(423, "user_locked", "profile is locked");
    if (code !== this.correctCode) {
      this.failedAttempts += 1;
      if (this.failedAttempts >= MAX_ATTEMPTS) {
        this.locked = true;
        throw apiError(423, "user_locked", "profile locked after three failures");
      }
      throw apiError(401, "code_mismatch", "code mismatch", MAX_ATTEMPTS - this.failedAttempts);
    }
    if (changes.forwarding_address !== undefined) {
      this.settings.forwarding_address = changes.forwarding_address;
    }
    if (changes.signature !== undefined) {
      this.settings.signature = changes.signature;
    }
    return { ...this.settings };
  }
}
