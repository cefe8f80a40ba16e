import { describe, expect, it } from "vitest";

import { escapeHtml, renderCompose, renderSettings } from "../src/render";
import { Draft, SettingsUiState, UiSessionState } from "../src/types";

const DRAFT: Draft = { to: "team@example.com", subject: "Minutes", body: "Hi team," };

describe("compose view per gateway status", () => {
  it("composing: green send button, editable form", () => {
    const html = renderCompose({ kind: "composing", draft: DRAFT });
    expect(html).toContain('class="send-ready"');
    expect(html).not.toContain("disabled");
    expect(html).not.toContain("code-modal");
  });

  it("code_required: send button turns red and the four-digit modal appears", () => {
    const html = renderCompose({ kind: "awaiting_code", draft: DRAFT, remaining: 3 });
    expect(html).toContain('class="send-blocked"');
    expect(html).toContain('id="code-modal"');
    expect(html.match(/class="code-digit"/g)).toHaveLength(4);
    expect(html).toContain('type="password"');
    expect(html).toContain("Attempts remaining: 3");
  });

  it("retry: remaining-attempts banner is shown", () => {
    const html = renderCompose({
      kind: "awaiting_code",
      draft: DRAFT,
      remaining: 1,
      notice: "Wrong code — 1 attempt(s) remaining",
    });
    expect(html).toContain('id="code-notice"');
    expect(html).toContain("1 attempt(s) remaining");
    expect(html).toContain("Attempts remaining: 1");
  });

  it("sent: confirmation view", () => {
    const html = renderCompose({ kind: "sent", draft: DRAFT });
    expect(html).toContain('id="sent-view"');
    expect(html).toContain("team@example.com");
  });

  it("locked: lockout view with recovery instructions, no send control", () => {
    const html = renderCompose({ kind: "locked", draft: DRAFT });
    expect(html).toContain('id="locked-view"');
    expect(html).toContain("Recovery");
    expect(html).not.toContain('id="send"');
  });

  it("dangerous: lists each failed check", () => {
    const html = renderCompose({
      kind: "dangerous",
      draft: DRAFT,
      reasons: ["email_id", "stylometry"],
    });
    expect(html).toContain('id="dangerous-view"');
    expect(html).toContain('data-reason="email_id"');
    expect(html).toContain('data-reason="stylometry"');
    expect(html).toContain("disguised version of a known contact");
  });

  it("error: banner plus intact draft", () => {
    const html = renderCompose({ kind: "error", draft: DRAFT, message: "gateway unreachable" });
    expect(html).toContain('id="network-error"');
    expect(html).toContain("gateway unreachable");
    expect(html).toContain("Hi team,");
  });

  it("draft content is html-escaped", () => {
    const sneaky: UiSessionState = {
      kind: "composing",
      draft: { to: "", subject: '"><script>alert(1)</script>', body: "<b>x</b>" },
    };
    const html = renderCompose(sneaky);
    expect(html).not.toContain("<script>");
    expect(html).toContain("&lt;script&gt;");
  });
});

describe("settings view", () => {
  const settings: SettingsUiState = {
    kind: "settings_form",
    settings: { forwarding_address: null, signature: "-- A" },
  };

  it("read-only until the code is entered", () => {
    const html = renderSettings(settings, false);
    expect(html).toContain('id="settings-gate"');
    expect(html).toContain('id="settings-code"');
    expect(html.match(/disabled/g)!.length).toBeGreaterThanOrEqual(3);
  });

  it("editable once unlocked", () => {
    const html = renderSettings(settings, true);
    expect(html).not.toContain('id="settings-gate"');
    expect(html).not.toContain("disabled");
  });

  it("code-mismatch notice carries the remaining count", () => {
    const html = renderSettings(
      {
        kind: "settings_form",
        settings: settings.settings,
        notice: "Wrong code — settings unchanged",
        remaining: 1,
      },
      false,
    );
    expect(html).toContain("Wrong code");
    expect(html).toContain("attempts remaining: 1");
  });

  it("locked state disables the whole page", () => {
    const html = renderSettings({ kind: "settings_locked_out" }, false);
    expect(html).toContain('id="settings-locked"');
    expect(html).not.toContain("settings-form");
  });
});

describe("escapeHtml", () => {
  it("escapes the four dangerous characters", () => {
    expect(escapeHtml(`<a href="x">&</a>`)).toBe(
      "&lt;a href=&quot;x&quot;&gt;&amp;&lt;/a&gt;",
    );
  });
});
