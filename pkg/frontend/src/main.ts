// Browser bootstrap: mounts the compose and settings views and wires DOM
// events to the controllers. Configuration comes from query parameters:
//   ?gateway=<base url>&user=<id>&token=<bearer>   or   ?mock=1

import { ComposeController, SettingsController } from "./controller.js";
import { GatewayClient, HttpGatewayClient } from "./gateway.js";
import { MockGateway } from "./mock.js";
import { renderCompose, renderSettings } from "./render.js";

function pickGateway(params: URLSearchParams): GatewayClient {
  if (params.get("mock") === "1") {
    return new MockGateway();
  }
  return new HttpGatewayClient({
    baseUrl: params.get("gateway") ?? "http://localhost:8425",
    bearerToken: params.get("token") ?? undefined,
  });
}

function readCode(root: HTMLElement): string {
  const digits = Array.from(root.querySelectorAll<HTMLInputElement>(".code-digit"));
  const code = digits.map((input) => input.value).join("");
  // mask state never outlives the submit
  digits.forEach((input) => (input.value = ""));
  return code;
}

export function mount(root: HTMLElement, gateway: GatewayClient, userId: string): void {
  const compose = new ComposeController(gateway, userId);
  const settings = new SettingsController(gateway, userId);

  const composeRoot = document.createElement("section");
  const settingsRoot = document.createElement("section");
  root.append(composeRoot, settingsRoot);

  function paintCompose(): void {
    composeRoot.innerHTML = renderCompose(compose.state);
    composeRoot.querySelector("#send")?.addEventListener("click", () => {
      syncDraft();
      void compose.send();
    });
    composeRoot.querySelector("#confirm-code")?.addEventListener("click", () => {
      void compose.submitCode(readCode(composeRoot));
    });
    composeRoot.querySelector("#cancel-code")?.addEventListener("click", () => compose.backToCompose());
    composeRoot.querySelector("#back-to-compose")?.addEventListener("click", () => compose.backToCompose());
    composeRoot.querySelector("#retry-send")?.addEventListener("click", () => void compose.send());
    composeRoot.querySelector("#new-message")?.addEventListener("click", () => compose.startNewMessage());
    wireDigitHops();
  }

  function syncDraft(): void {
    const value = (id: string) =>
      composeRoot.querySelector<HTMLInputElement | HTMLTextAreaElement>(`#${id}`)?.value ?? "";
    compose.editDraft({ to: value("to"), subject: value("subject"), body: value("body") });
  }

  function wireDigitHops(): void {
    const digits = Array.from(composeRoot.querySelectorAll<HTMLInputElement>(".code-digit"));
    digits.forEach((input, index) => {
      input.addEventListener("input", () => {
        if (input.value && index + 1 < digits.length) digits[index + 1].focus();
      });
    });
    digits[0]?.focus();
  }

  function paintSettings(): void {
    settingsRoot.innerHTML = renderSettings(settings.state, settings.editable);
    settingsRoot.querySelector("#unlock-settings")?.addEventListener("click", () => {
      const input = settingsRoot.querySelector<HTMLInputElement>("#settings-code");
      settings.unlock(input?.value ?? "");
      if (input) input.value = "";
      paintSettings();
    });
    settingsRoot.querySelector("#save-settings")?.addEventListener("click", () => {
      const forwarding = settingsRoot.querySelector<HTMLInputElement>("#forwarding")?.value ?? "";
      const signature = settingsRoot.querySelector<HTMLTextAreaElement>("#signature")?.value ?? "";
      void settings
        .save({ forwarding_address: forwarding || null, signature })
        .then(paintSettings);
    });
  }

  compose.onChange(paintCompose);
  paintCompose();
  void settings.load().then(paintSettings);
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  const params = new URLSearchParams(window.location.search);
  mount(
    document.getElementById("app") as HTMLElement,
    pickGateway(params),
    params.get("user") ?? "alice",
  );
}
