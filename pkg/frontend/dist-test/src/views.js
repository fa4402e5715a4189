import { SchemaMismatchError, } from "./types.js";
export function escapeHtml(text) {
    return text
        .replace(/&/g, "&amp;")
        .replace(/</g, "&lt;")
        .replace(/>/g, "&gt;")
        .replace(/"/g, "&quot;")
        .replace(/'/g, "&#39;");
}
/** Signed score delta with two decimals: +4.76 / -0.50 / +0.00. */
export function formatDelta(value) {
    const fixed = Math.abs(value).toFixed(2);
    return (value < -0.005 ? "-" : "+") + fixed;
}
function componentLabel(id) {
    return id
        .split("_")
        .map((w) => w.charAt(0).toUpperCase() + w.slice(1))
        .join(" ");
}
export function validatePayload(payload) {
    const p = payload;
    if (typeof p !== "object" || p === null) {
        throw new SchemaMismatchError("payload is not an object");
    }
    if (typeof p.seqn !== "number" ||
        typeof p.baseline_hei?.total !== "number" ||
        typeof p.baseline_hei?.components !== "object" ||
        !p.plan || !Array.isArray(p.plan.steps) ||
        !Array.isArray(p.recommendations) ||
        !Array.isArray(p.alternatives) ||
        (p.explainer !== "llm" && p.explainer !== "fallback")) {
        throw new SchemaMismatchError("recommendation payload missing required fields");
    }
    const componentCount = Object.keys(p.baseline_hei.components).length;
    if (componentCount !== 13) {
        throw new SchemaMismatchError(`expected 13 components, got ${componentCount}`);
    }
    return p;
}
function renderComponentBars(payload) {
    const rows = Object.entries(payload.baseline_hei.components).map(([cid, comp]) => {
        const pct = comp.max_points > 0 ? (100 * comp.points) / comp.max_points : 0;
        const width = Math.max(0, Math.min(100, pct)).toFixed(0);
        return `
      <div class="component-row" data-component="${cid}">
        <span class="component-name">${escapeHtml(componentLabel(cid))}</span>
        <span class="component-bar"><span class="component-fill" style="width:${width}%"></span></span>
        <span class="component-points">${comp.points.toFixed(1)}/${comp.max_points.toFixed(0)}</span>
      </div>`;
    });
    return rows.join("");
}
function renderPortionDeltas(deltas) {
    return Object.entries(deltas)
        .sort(([a], [b]) => parseFloat(a) - parseFloat(b))
        .map(([portion, dh]) => `<span class="portion-delta">${parseFloat(portion).toFixed(1)}x: ${formatDelta(dh)}</span>`)
        .join(" ");
}
function renderStepCard(step, rec, alternativesByCode) {
    const alt = alternativesByCode.get(step.food_code);
    const perPortion = alt ? renderPortionDeltas(alt.portion_deltas) : "";
    const rationale = rec ? `<p class="rationale">${escapeHtml(rec.rationale)}</p>` : "";
    return `
    <article class="step-card" data-food-code="${step.food_code}">
      <h3>${escapeHtml(step.description)}</h3>
      <p class="portion">portion ${step.portion.toFixed(1)} serving(s)</p>
      <p class="delta">ΔHEI <strong>${formatDelta(step.delta_h)}</strong></p>
      ${perPortion ? `<p class="per-portion">${perPortion}</p>` : ""}
      ${rationale}
    </article>`;
}
function renderAlternatives(alternatives) {
    if (alternatives.length === 0) {
        return `<p class="empty">No further suggestions.</p>`;
    }
    const items = alternatives.map((alt) => `
    <li class="alternative" data-food-code="${alt.food_code}">
      <span class="alt-desc">${escapeHtml(alt.description)}</span>
      <span class="alt-delta">best ${alt.best_portion.toFixed(1)}x: ${formatDelta(alt.delta_h)}</span>
      <span class="per-portion">${renderPortionDeltas(alt.portion_deltas)}</span>
    </li>`);
    return `<ul class="alternatives-list">${items.join("")}</ul>`;
}
/** Full dashboard HTML from one recommendations payload. Throws
 *  SchemaMismatchError (so the caller can show a banner) rather than
 *  rendering partially. */
export function renderDashboard(payload) {
    const p = validatePayload(payload);
    const recsByCode = new Map(p.recommendations.map((r) => [r.food_code, r]));
    const altsByCode = new Map(p.alternatives.map((a) => [a.food_code, a]));
    const badge = p.explainer === "fallback"
        ? `<span class="badge badge-fallback" title="deterministic template explanation">template</span>`
        : `<span class="badge badge-llm">model</span>`;
    const cards = p.plan.steps
        .map((s) => renderStepCard(s, recsByCode.get(s.food_code), altsByCode))
        .join("");
    return `
<div class="dashboard" data-seqn="${p.seqn}">
  <section class="summary">
    <h2>HEI-2020 total <strong class="total">${p.baseline_hei.total.toFixed(2)}</strong></h2>
    <p class="projection">projected after plan: <strong class="projected">${p.plan.final_total.toFixed(2)}</strong>
      (${formatDelta(p.plan.total_improvement)}) ${badge}</p>
  </section>
  <section class="components">
    <h2>Components</h2>
    ${renderComponentBars(p)}
  </section>
  <section class="plan">
    <h2>Suggested changes</h2>
    ${cards || `<p class="empty">No changes suggested.</p>`}
  </section>
  <details class="alternatives">
    <summary>View alternative suggestions (${p.alternatives.length})</summary>
    ${renderAlternatives(p.alternatives)}
  </details>
</div>`;
}
/** What-if result panel: before/after totals and per-component arrows. */
export function renderWhatIf(resp, label) {
    if (typeof resp?.before_total !== "number" || typeof resp?.after_total !== "number") {
        throw new SchemaMismatchError("what-if response missing totals");
    }
    const rows = Object.entries(resp.component_deltas)
        .filter(([, v]) => v !== 0)
        .map(([cid, v]) => {
        const arrow = v > 0 ? "↑" : "↓";
        const cls = v > 0 ? "up" : "down";
        return `<li class="delta-row ${cls}">${escapeHtml(componentLabel(cid))} ${arrow} ${formatDelta(v)}</li>`;
    });
    return `
<div class="whatif-result">
  <p class="whatif-label">${escapeHtml(label)}</p>
  <p class="whatif-banner">ΔHEI <strong>${formatDelta(resp.delta_h)}</strong>
    (${resp.before_total.toFixed(2)} → <span class="whatif-total">${resp.after_total.toFixed(2)}</span>)</p>
  <ul class="component-deltas">${rows.join("") || "<li>no component changes</li>"}</ul>
</div>`;
}
export function renderErrorBanner(message) {
    return `<div class="error-banner">${escapeHtml(message)}</div>`;
}
