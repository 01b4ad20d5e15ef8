import { ApiClient } from "./api";
import { App } from "./app";

const app = new App(document, new ApiClient());
app.init().catch((err) => {
  const panel = document.querySelector("#control-panel");
  if (panel) {
    const msg = document.createElement("div");
    msg.className = "empty-hint";
    msg.textContent = `failed to load the dataset summary: ${err}`;
    panel.appendChild(msg);
  }
});
