import { TeamRecApi } from "./api";
import { initApp } from "./app";

declare global {
  interface Window {
    __TEAMREC_BASE__?: string;
    teamrecReady?: Promise<void>;
  }
}

function start(): void {
  const api = new TeamRecApi(window.__TEAMREC_BASE__ ?? "");
  window.teamrecReady = initApp(document, api).ready;
}

if (document.readyState === "loading") {
  document.addEventListener("DOMContentLoaded", start);
} else {
  start();
}
