// Wire types for the gateway endpoint table, plus the client-side states
// derived from them. Every rendered state corresponds to exactly one
// gateway response status; the client never counts attempts itself.

export interface SessionResponse {
  session_id: string;
}

export interface ChallengeResponse {
  status: "code_required";
  remaining: number;
}

export type CodeOutcomeStatus = "sent" | "retry" | "locked" | "dangerous";

export interface CodeResponse {
  status: CodeOutcomeStatus;
  remaining?: number;
  reasons?: string[];
}

export interface SettingsPayload {
  forwarding_address: string | null;
  signature: string;
}

export interface ApiErrorBody {
  status: number;
  code: string;
  message: string;
  remaining_attempts?: number;
}

export class GatewayError extends Error {
  constructor(public readonly body: ApiErrorBody) {
    super(body.message);
  }
}

export interface Draft {
  to: string;
  subject: string;
  body: string;
}

export type UiSessionState =
  | { kind: "composing"; draft: Draft }
  | { kind: "awaiting_code"; draft: Draft; remaining: number; notice?: string }
  | { kind: "sent"; draft: Draft }
  | { kind: "locked"; draft: Draft }
  | { kind: "dangerous"; draft: Draft; reasons: string[] }
  | { kind: "error"; draft: Draft; message: string };

export type SettingsUiState =
  | { kind: "settings_locked_out" }
  | { kind: "settings_form"; settings: SettingsPayload; notice?: string; remaining?: number };
