// Pure view functions: UI state in, HTML string out. The browser bootstrap
// injects the result and wires events; tests snapshot these strings without
// a DOM.

import { SettingsUiState, UiSessionState } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const REASON_LABELS: Record<string, string> = {
  code: "the verification code did not match",
  email_id: "an address looks like a disguised version of a known contact",
  stylometry: "the writing style does not match this account's author",
};

function composeForm(state: UiSessionState, disabled: boolean, sendClass: string): string {
  const d = state.draft;
  const attr = disabled ? " disabled" : "";
  return `
  <form id="compose" class="compose">
    <input id="to" placeholder="To" value="${escapeHtml(d.to)}"${attr}>
    <input id="subject" placeholder="Subject" value="${escapeHtml(d.subject)}"${attr}>
    <textarea id="body"${attr}>${escapeHtml(d.body)}</textarea>
    <button id="send" type="button" class="${sendClass}"${attr}>Send</button>
  </form>`;
}

function codeModal(remaining: number, notice?: string): string {
  const boxes = [0, 1, 2, 3]
    .map((i) => `<input class="code-digit" id="digit-${i}" type="password" inputmode="numeric" maxlength="1" autocomplete="off">`)
    .join("");
  const banner = notice
    ? `<p class="banner banner-warning" id="code-notice">${escapeHtml(notice)}</p>`
    : "";
  return `
  <div id="code-modal" class="modal" data-remaining="${remaining}">
    <p>This message will not go through without your four-digit send code.</p>
    ${banner}
    <div class="code-boxes">${boxes}</div>
    <p class="remaining">Attempts remaining: ${remaining}</p>
    <button id="confirm-code" type="button">Confirm</button>
    <button id="cancel-code" type="button">Cancel</button>
  </div>`;
}

export function renderCompose(state: UiSessionState): string {
  switch (state.kind) {
    case "composing":
      return composeForm(state, false, "send-ready");
    case "awaiting_code":
      // the send button turns red and the code modal takes over
      return (
        composeForm(state, true, "send-blocked") +
        codeModal(state.remaining, state.notice)
      );
    case "sent":
      return `
  <div id="sent-view" class="confirmation">
    <h2>Message sent</h2>
    <p>Delivery confirmed to ${escapeHtml(state.draft.to)}.</p>
    <button id="new-message" type="button">New message</button>
  </div>`;
    case "locked":
      return `
  <div id="locked-view" class="lockout">
    <h2>Account locked</h2>
    <p>Three incorrect codes were entered. Sending is disabled.</p>
    <p>Recovery: re-register your send code with strong authentication
       (ask your administrator or use the recovery console).</p>
  </div>`;
    case "dangerous":
      return `
  <div id="dangerous-view" class="warning">
    <h2>Message flagged as dangerous</h2>
    <p>The message was not sent. Failed checks:</p>
    <ul>${state.reasons
      .map((reason) => `<li data-reason="${escapeHtml(reason)}">${escapeHtml(REASON_LABELS[reason] ?? reason)}</li>`)
      .join("")}</ul>
    <button id="back-to-compose" type="button">Back to draft</button>
  </div>`;
    case "error":
      return (
        composeForm(state, false, "send-ready") +
        `<p class="banner banner-error" id="network-error">${escapeHtml(state.message)} — your draft is preserved.
     <button id="retry-send" type="button">Retry</button></p>`
      );
  }
}

export function renderSettings(state: SettingsUiState, editable: boolean): string {
  if (state.kind === "settings_locked_out") {
    return `
  <div id="settings-locked" class="lockout">
    <h2>Settings unavailable</h2>
    <p>This account is locked; every control is disabled until the send code
       is re-registered.</p>
  </div>`;
  }
  const attr = editable ? "" : " disabled";
  const banner = state.notice
    ? `<p class="banner" id="settings-notice">${escapeHtml(state.notice)}${
        state.remaining !== undefined ? ` (attempts remaining: ${state.remaining})` : ""
      }</p>`
    : "";
  const gate = editable
    ? ""
    : `
    <div id="settings-gate">
      <p>Enter your send code to edit settings.</p>
      <input id="settings-code" type="password" inputmode="numeric" maxlength="4" autocomplete="off">
      <button id="unlock-settings" type="button">Unlock</button>
    </div>`;
  return `
  <div id="settings-view">
    ${banner}${gate}
    <form id="settings-form">
      <label>Forward mail to
        <input id="forwarding" value="${escapeHtml(state.settings.forwarding_address ?? "")}"${attr}>
      </label>
      <label>Signature
        <textarea id="signature"${attr}>${escapeHtml(state.settings.signature)}</textarea>
      </label>
      <button id="save-settings" type="button"${attr}>Save</button>
    </form>
  </div>`;
}
