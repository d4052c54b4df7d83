/** DOM renderers: template strings in, innerHTML out. No state, no fetch. */

import type { ClusterSummary } from "./api.js";
import type {
  Bar,
  ClusterSortKey,
  CompareViewModel,
  ScoreViewModel,
} from "./viewmodel.js";

function esc(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const ARROWS = { up: "▲", down: "▼", flat: "–" } as const;

export function renderBars(root: HTMLElement, bars: Bar[]): void {
  root.innerHTML = bars
    .map(
      (b) => `
    <div class="bar${b.viral ? " viral" : ""}" data-cluster="${b.cluster}">
      <div class="bar-label">${esc(b.label)}${b.viral ? '<span class="viral-badge">viral</span>' : ""}</div>
      <div class="bar-track"><div class="bar-fill" style="width:${b.pct}%"></div></div>
      <div class="bar-pct">${b.pct}%</div>
    </div>`,
    )
    .join("");
}

export function renderScore(root: HTMLElement, vm: ScoreViewModel): void {
  root.innerHTML = `
    <div class="headline">
      <div class="metric"><span class="expected-activity">${vm.expectedActivity}</span> expected shares</div>
      <div class="metric"><span class="viral-probability">${vm.viralProbability}%</span> on viral clusters</div>
    </div>
    <div class="bars"></div>
    <div class="model-version">model ${esc(vm.modelVersion)}</div>`;
  renderBars(root.querySelector<HTMLElement>(".bars")!, vm.bars);
}

/** 422 and friends: message in place, no bars. */
export function renderInlineError(root: HTMLElement, message: string): void {
  root.innerHTML = `<div class="inline-error">${esc(message)}</div>`;
}

/** Unreachable service: banner the caller can wire a retry to. */
export function renderRetryBanner(root: HTMLElement, message: string): void {
  root.innerHTML = `
    <div class="retry-banner">
      <span>${esc(message)}</span>
      <button class="retry-button" type="button">retry</button>
    </div>`;
}

export function renderEmptyState(root: HTMLElement, message: string): void {
  root.innerHTML = `<div class="empty-state">${esc(message)}</div>`;
}

export function renderCompare(root: HTMLElement, vm: CompareViewModel): void {
  const rows = vm.rows
    .map(
      (r) => `
      <tr class="delta-row ${r.direction}" data-cluster="${r.cluster}">
        <td>${esc(r.label)}</td>
        <td class="num">${r.pctA}%</td>
        <td class="num">${r.pctB}%</td>
        <td class="num delta">${ARROWS[r.direction]} ${r.delta}</td>
      </tr>`,
    )
    .join("");
  root.innerHTML = `
    <div class="headline">
      <div class="metric ${vm.activityDirection}">
        ${ARROWS[vm.activityDirection]} <span class="delta-activity">${vm.deltaActivity}</span> expected shares
      </div>
      <div class="metric ${vm.viralDirection}">
        ${ARROWS[vm.viralDirection]} <span class="delta-viral">${vm.deltaViral}%</span> viral probability
      </div>
    </div>
    <table class="compare-table">
      <thead><tr><th>cluster</th><th>A</th><th>B</th><th>&Delta; membership</th></tr></thead>
      <tbody>${rows}</tbody>
    </table>`;
}

export function renderClusters(
  root: HTMLElement,
  rows: ClusterSummary[],
  sortKey: ClusterSortKey,
  descending: boolean,
): void {
  const header = (key: ClusterSortKey, title: string) => {
    const mark = key === sortKey ? (descending ? " ▼" : " ▲") : "";
    return `<th><button class="sort-button" data-key="${key}">${title}${mark}</button></th>`;
  };
  const body = rows
    .map(
      (c) => `
      <tr data-cluster="${c.cluster}">
        <td class="num">${c.cluster}</td>
        <td>${esc(c.label)}${c.viral ? ' <span class="viral-badge">viral</span>' : ""}</td>
        <td class="num">${c.frequency}</td>
        <td class="num">${c.average.toFixed(1)}</td>
        <td class="num">${c.variance.toFixed(1)}</td>
      </tr>`,
    )
    .join("");
  root.innerHTML = `
    <table class="clusters-table">
      <thead><tr>
        ${header("cluster", "cluster")}
        <th>label</th>
        ${header("frequency", "frequency")}
        ${header("average", "average shares")}
        ${header("variance", "variance")}
      </tr></thead>
      <tbody>${body}</tbody>
    </table>`;
}
