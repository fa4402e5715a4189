import { ApiClient } from "./api.js";
import { WhatIfSandbox } from "./sandbox.js";
import { ApiRequestError, RecommendationPayload, SchemaMismatchError } from "./types.js";
import { renderDashboard, renderErrorBanner, renderWhatIf } from "./views.js";

// Browser bootstrap. All state flows through one ApiClient against the
// same origin that served these assets.

const client = new ApiClient("");

let currentPayload: RecommendationPayload | null = null;
let sandbox: WhatIfSandbox | null = null;
let inflight = false;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function showError(target: HTMLElement, message: string): void {
  target.innerHTML = renderErrorBanner(message);
}

async function loadUser(): Promise<void> {
  const seqn = parseInt(el<HTMLInputElement>("seqn-input").value, 10);
  const dashboard = el<HTMLElement>("dashboard");
  const whatifPanel = el<HTMLElement>("whatif-result");
  whatifPanel.innerHTML = "";
  if (!Number.isFinite(seqn)) {
    showError(dashboard, "Enter a numeric person id.");
    return;
  }
  dashboard.innerHTML = `<p class="loading">loading…</p>`;
  try {
    const payload = await client.getRecommendations(seqn, 8);
    dashboard.innerHTML = renderDashboard(payload);
    currentPayload = payload;
    sandbox = new WhatIfSandbox(client, seqn, payload.baseline_hei.total);
    updateSandboxStatus();
  } catch (err) {
    currentPayload = null;
    sandbox = null;
    if (err instanceof SchemaMismatchError) {
      showError(dashboard, `Unexpected response shape: ${err.message}`);
    } else if (err instanceof ApiRequestError) {
      showError(dashboard, `${err.code}: ${err.message}`);
    } else {
      showError(dashboard, String(err));
    }
  }
}

function updateSandboxStatus(): void {
  const status = el<HTMLElement>("sandbox-status");
  if (!sandbox) {
    status.textContent = "";
    return;
  }
  const n = sandbox.appliedModifications.length;
  status.textContent =
    `sandbox: ${n} applied modification(s), current total ` +
    sandbox.displayedTotal.toFixed(2);
}

async function runWhatIf(apply: boolean): Promise<void> {
  const panel = el<HTMLElement>("whatif-result");
  if (!sandbox) {
    showError(panel, "Load a person first.");
    return;
  }
  if (inflight) {
    return; // one in-flight what-if at a time; later clicks wait their turn
  }
  const foodCode = parseInt(el<HTMLInputElement>("food-input").value, 10);
  const portion = parseFloat(el<HTMLSelectElement>("portion-select").value);
  if (!Number.isFinite(foodCode)) {
    showError(panel, "Pick a food code from the search results.");
    return;
  }
  inflight = true;
  try {
    const mod = { food_code: foodCode, portion, mode: "ADD" as const };
    const resp = apply ? await sandbox.apply(mod) : await sandbox.preview(mod);
    const verb = apply ? "applied" : "preview";
    panel.innerHTML = renderWhatIf(resp, `${verb}: food ${foodCode} × ${portion}`);
    updateSandboxStatus();
  } catch (err) {
    if (err instanceof ApiRequestError) {
      showError(panel, `${err.code}: ${err.message}`);
    } else {
      showError(panel, String(err));
    }
  } finally {
    inflight = false;
  }
}

async function undoLast(): Promise<void> {
  const panel = el<HTMLElement>("whatif-result");
  if (!sandbox || inflight) return;
  inflight = true;
  try {
    const total = await sandbox.undo();
    panel.innerHTML = `<p class="whatif-banner">undone; current total ${total.toFixed(2)}</p>`;
    updateSandboxStatus();
  } catch (err) {
    showError(panel, String(err));
  } finally {
    inflight = false;
  }
}

async function searchFoods(): Promise<void> {
  const box = el<HTMLElement>("food-results");
  const q = el<HTMLInputElement>("food-query").value.trim();
  if (!q) return;
  try {
    const { results } = await client.searchFoods(q, 8);
    box.innerHTML = results
      .map((r) =>
        `<button class="food-hit" data-code="${r.food_code}">` +
        `${r.description} <small>#${r.food_code}</small></button>`)
      .join("");
    box.querySelectorAll<HTMLButtonElement>(".food-hit").forEach((btn) => {
      btn.addEventListener("click", () => {
        el<HTMLInputElement>("food-input").value = btn.dataset.code ?? "";
      });
    });
  } catch (err) {
    showError(box, String(err));
  }
}

export function wireUp(): void {
  el<HTMLButtonElement>("load-btn").addEventListener("click", () => void loadUser());
  el<HTMLButtonElement>("search-btn").addEventListener("click", () => void searchFoods());
  el<HTMLButtonElement>("preview-btn").addEventListener("click", () => void runWhatIf(false));
  el<HTMLButtonElement>("apply-btn").addEventListener("click", () => void runWhatIf(true));
  el<HTMLButtonElement>("undo-btn").addEventListener("click", () => void undoLast());
}

if (typeof document !== "undefined" && document.getElementById("load-btn")) {
  wireUp();
}
