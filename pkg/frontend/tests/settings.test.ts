import { beforeEach, describe, expect, it } from "vitest";

import { SettingsController } from "../src/controller";
import { MockGateway } from "../src/mock";

let gateway: MockGateway;
let controller: SettingsController;

beforeEach(async () => {
  gateway = new MockGateway();
  controller = new SettingsController(gateway, "alice");
  await controller.load();
});

describe("settings gate", () => {
  it("starts read-only", () => {
    expect(controller.editable).toBe(false);
  });

  it("saves with the correct code", async () => {
    controller.unlock("0990");
    await controller.save({ signature: "-- Alice" });
    expect(controller.state).toMatchObject({
      kind: "settings_form",
      settings: { signature: "-- Alice" },
      notice: "Saved",
    });
    expect(gateway.settings.signature).toBe("-- Alice");
  });

  it("wrong code leaves settings unchanged and reports remaining", async () => {
    controller.unlock("0000");
    await controller.save({ forwarding_address: "attacker@evil.example" });
    expect(gateway.settings.forwarding_address).toBeNull();
    expect(controller.state).toMatchObject({
      kind: "settings_form",
      remaining: 2,
    });
  });

  it("third wrong code locks the account view entirely", async () => {
    for (const code of ["0001", "0002", "0003"]) {
      controller.unlock(code);
      await controller.save({ forwarding_address: "attacker@evil.example" });
    }
    expect(controller.state.kind).toBe("settings_locked_out");
    expect(gateway.settings.forwarding_address).toBeNull();
  });

  it("the unlock code is single-use in the client", async () => {
    controller.unlock("0990");
    await controller.save({ signature: "first" });
    expect(controller.unlockedWithCode).toBeNull();
    expect(controller.editable).toBe(false);
    // a second save without re-entering the code is a no-op
    await controller.save({ signature: "second" });
    expect(gateway.settings.signature).toBe("first");
  });

  it("loading a locked profile shows the locked view", async () => {
    gateway.locked = true;
    const fresh = new SettingsController(gateway, "alice");
    await fresh.load();
    expect(fresh.state.kind).toBe("settings_locked_out");
  });

  it("the entered code never persists on the controller after save", async () => {
    controller.unlock("0990");
    await controller.save({ signature: "x" });
    // own state only: the injected mock gateway legitimately knows the code
    const { gateway: _gateway, ...own } = controller as unknown as Record<string, unknown>;
    expect(JSON.stringify(own)).not.toContain("0990");
  });
});
