import { App } from "./app.js";

document.addEventListener("DOMContentLoaded", () => {
  void new App().start();
});
