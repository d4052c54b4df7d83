/** Page wiring: tabs, file inputs, one in-flight request per view.
 *
 * Stale responses are discarded by token: each submission bumps a counter
 * and only the newest submission may touch the DOM when it resolves.
 */

import { ApiError, NetworkError, ViralensClient } from "./api.js";
import type { ClusterSummary } from "./api.js";
import {
  renderClusters,
  renderCompare,
  renderEmptyState,
  renderInlineError,
  renderRetryBanner,
  renderScore,
} from "./render.js";
import {
  sortClusters,
  toCompareViewModel,
  toScoreViewModel,
  type ClusterSortKey,
} from "./viewmodel.js";

const VARIANT_TAG = /^\[[a-z-]+:([ab])\]/;

function failingVariant(detail: string): "a" | "b" | null {
  const m = VARIANT_TAG.exec(detail);
  return m ? (m[1] as "a" | "b") : null;
}

export function initApp(root: HTMLElement, client: ViralensClient): void {
  const view = (id: string) => root.querySelector<HTMLElement>(`#${id}`)!;
  const scoreView = view("score-view");
  const compareView = view("compare-view");
  const slotErrorA = view("compare-error-a");
  const slotErrorB = view("compare-error-b");
  const clustersView = view("clusters-view");

  // -- tab switching
  root.querySelectorAll<HTMLElement>("[data-tab]").forEach((button) => {
    button.addEventListener("click", () => {
      const target = button.dataset.tab!;
      root.querySelectorAll<HTMLElement>("[data-panel]").forEach((panel) => {
        panel.hidden = panel.dataset.panel !== target;
      });
      root.querySelectorAll<HTMLElement>("[data-tab]").forEach((b) => {
        b.classList.toggle("active", b === button);
      });
      if (target === "clusters") void loadClusters();
    });
  });

  // -- score view
  let scoreToken = 0;
  const scoreInput = root.querySelector<HTMLInputElement>("#score-file")!;

  async function submitScore(file: Blob): Promise<void> {
    const token = ++scoreToken;
    scoreView.innerHTML = `<div class="loading">scoring&hellip;</div>`;
    try {
      const [score, clusters] = await Promise.all([
        client.score(file),
        client.clusters(),
      ]);
      if (token !== scoreToken) return;
      renderScore(scoreView, toScoreViewModel(score, clusters));
    } catch (err) {
      if (token !== scoreToken) return;
      if (err instanceof ApiError) {
        renderInlineError(scoreView, `could not read image (${err.detail})`);
      } else if (err instanceof NetworkError) {
        renderRetryBanner(scoreView, "service unreachable");
        scoreView
          .querySelector(".retry-button")
          ?.addEventListener("click", () => void submitScore(file));
      } else {
        throw err;
      }
    }
  }

  scoreInput.addEventListener("change", () => {
    const file = scoreInput.files?.[0];
    if (file) void submitScore(file);
  });

  // -- compare view
  let compareToken = 0;
  const inputA = root.querySelector<HTMLInputElement>("#compare-file-a")!;
  const inputB = root.querySelector<HTMLInputElement>("#compare-file-b")!;
  const runCompare = root.querySelector<HTMLButtonElement>("#compare-run")!;

  async function submitCompare(fileA: Blob, fileB: Blob): Promise<void> {
    const token = ++compareToken;
    slotErrorA.textContent = "";
    slotErrorB.textContent = "";
    compareView.innerHTML = `<div class="loading">comparing&hellip;</div>`;
    try {
      const cmp = await client.compare(fileA, fileB);
      if (token !== compareToken) return;
      renderCompare(compareView, toCompareViewModel(cmp));
    } catch (err) {
      if (token !== compareToken) return;
      if (err instanceof ApiError) {
        compareView.innerHTML = "";
        const variant = failingVariant(err.detail);
        const message = `could not read image (${err.detail})`;
        if (variant === "a") slotErrorA.textContent = message;
        else if (variant === "b") slotErrorB.textContent = message;
        else renderInlineError(compareView, message);
      } else if (err instanceof NetworkError) {
        renderRetryBanner(compareView, "service unreachable");
        compareView
          .querySelector(".retry-button")
          ?.addEventListener("click", () => void submitCompare(fileA, fileB));
      } else {
        throw err;
      }
    }
  }

  runCompare.addEventListener("click", () => {
    const fileA = inputA.files?.[0];
    const fileB = inputB.files?.[0];
    if (fileA && fileB) void submitCompare(fileA, fileB);
  });

  // -- clusters gallery
  let clusterRows: ClusterSummary[] | null = null;
  let sortKey: ClusterSortKey = "cluster";
  let descending = false;

  function drawClusters(): void {
    if (clusterRows === null) return;
    renderClusters(
      clustersView,
      sortClusters(clusterRows, sortKey, descending),
      sortKey,
      descending,
    );
    clustersView.querySelectorAll<HTMLElement>(".sort-button").forEach((b) => {
      b.addEventListener("click", () => {
        const key = b.dataset.key as ClusterSortKey;
        descending = key === sortKey ? !descending : true;
        sortKey = key;
        drawClusters();
      });
    });
  }

  async function loadClusters(): Promise<void> {
    try {
      clusterRows = await client.clusters();
      drawClusters();
    } catch (err) {
      if (err instanceof ApiError && err.status === 503) {
        renderEmptyState(clustersView, "no model loaded");
      } else if (err instanceof NetworkError) {
        renderRetryBanner(clustersView, "service unreachable");
        clustersView
          .querySelector(".retry-button")
          ?.addEventListener("click", () => void loadClusters());
      } else {
        throw err;
      }
    }
  }
}

// Browser bootstrap; tests call initApp themselves.
if (typeof document !== "undefined") {
  const root = document.getElementById("viralens-app");
  if (root !== null) {
    const base = root.dataset.apiBase ?? "";
    initApp(root, new ViralensClient(base));
  }
}
