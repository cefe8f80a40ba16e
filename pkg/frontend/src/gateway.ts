// Gateway access behind an interface so tests and the standalone demo can
// substitute a mock that emits any response status.

import {
  ApiErrorBody,
  ChallengeResponse,
  CodeResponse,
  GatewayError,
  SessionResponse,
  SettingsPayload,
} from "./types.js";

export interface GatewayClient {
  createSession(userId: string): Promise<SessionResponse>;
  putDraft(sessionId: string, to: string[], subject: string, body: string): Promise<void>;
  requestSend(sessionId: string): Promise<ChallengeResponse>;
  submitCode(sessionId: string, code: string): Promise<CodeResponse>;
  getSettings(userId: string): Promise<SettingsPayload>;
  putSettings(userId: string, changes: Partial<SettingsPayload>, code: string): Promise<SettingsPayload>;
}

export interface HttpConfig {
  baseUrl: string;
  bearerToken?: string;
}

export class HttpGatewayClient implements GatewayClient {
  constructor(private readonly config: HttpConfig) {}

  private headers(extra: Record<string, string> = {}): Record<string, string> {
    const base: Record<string, string> = { "Content-Type": "application/json", ...extra };
    if (this.config.bearerToken) {
      base["Authorization"] = `Bearer ${this.config.bearerToken}`;
    }
    return base;
  }

  private async request<T>(method: string, path: string, body?: unknown, extra?: Record<string, string>): Promise<T> {
    const response = await fetch(`${this.config.baseUrl}${path}`, {
      method,
      headers: this.headers(extra),
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json();
    if (!response.ok) {
      // the code endpoint reports retry/locked through 401/423 with a
      // string status; anything else non-ok is an ApiError body
      if (typeof payload.status === "string") {
        return payload as T;
      }
      throw new GatewayError(payload as ApiErrorBody);
    }
    return payload as T;
  }

  createSession(userId: string): Promise<SessionResponse> {
    return this.request("POST", "/v1/session", { user_id: userId });
  }

  async putDraft(sessionId: string, to: string[], subject: string, body: string): Promise<void> {
    await this.request("PUT", `/v1/session/${sessionId}/draft`, { to, subject, body });
  }

  requestSend(sessionId: string): Promise<ChallengeResponse> {
    return this.request("POST", `/v1/session/${sessionId}/send`);
  }

  submitCode(sessionId: string, code: string): Promise<CodeResponse> {
    return this.request("POST", `/v1/session/${sessionId}/code`, { code });
  }

  getSettings(userId: string): Promise<SettingsPayload> {
    return this.request("GET", `/v1/users/${userId}/settings`);
  }

  putSettings(userId: string, changes: Partial<SettingsPayload>, code: string): Promise<SettingsPayload> {
    return this.request("PUT", `/v1/users/${userId}/settings`, changes, { "X-Send-Code": code });
  }
}
