// Bootstrap: hash routing over the five views, periodic refresh, render loop.

import { ApiClient } from "./api.js";
import { render } from "./render.js";
import { Dashboard, type Tab } from "./state.js";

const VALID_TABS: Tab[] = ["needs", "availabilities", "matches", "completed", "new"];

function apiBase(): string {
  const params = new URLSearchParams(window.location.search);
  return (
    params.get("api") ??
    (window as { RELIEFMATCH_API?: string }).RELIEFMATCH_API ??
    "http://127.0.0.1:8000/api/v1"
  );
}

function tabFromHash(): Tab {
  const raw = window.location.hash.replace(/^#\//, "");
  return (VALID_TABS as string[]).includes(raw) ? (raw as Tab) : "needs";
}

function start(): void {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app element");
  const dash = new Dashboard(new ApiClient(apiBase()));
  dash.subscribe(() => render(root, dash));
  window.addEventListener("hashchange", () => dash.setTab(tabFromHash()));
  dash.setTab(tabFromHash());
  void dash.refresh();
  window.setInterval(() => {
    if (dash.state.activeTab !== "new") void dash.refresh();
  }, 15_000);
}

start();
