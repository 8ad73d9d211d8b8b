/** Bootstrap: wire the API client, the block view and the DOM together.
 * Server truth is re-fetched after every mutation.
 */

import { ApiClient, ApiError } from "./api.js";
import { BlockView } from "./model.js";
import { renderBlockTable, renderMetricsPanel, renderSummary } from "./render.js";

function params(): URLSearchParams {
  return new URLSearchParams(window.location.search);
}

async function refreshMetrics(api: ApiClient, metricsPanel: HTMLElement): Promise<number | null> {
  const metrics = await api.getMetrics();
  renderMetricsPanel(metricsPanel, metrics);
  const blockId = Number(params().get("block") ?? "0");
  const entry = metrics.blocks.find((b) => b.id === blockId);
  return entry ? entry.accuracy : null;
}

function toast(node: HTMLElement, message: string, isError = false): void {
  node.textContent = message;
  node.className = isError ? "toast error" : "toast";
}

export async function start(root: HTMLElement, api: ApiClient): Promise<void> {
  const summaryBar = root.querySelector<HTMLElement>("#summary")!;
  const tableHost = root.querySelector<HTMLElement>("#table")!;
  const metricsPanel = root.querySelector<HTMLElement>("#metrics")!;
  const status = root.querySelector<HTMLElement>("#status")!;
  const submitButton = root.querySelector<HTMLButtonElement>("#submit")!;
  const retrainButton = root.querySelector<HTMLButtonElement>("#retrain")!;
  const reloadButton = root.querySelector<HTMLButtonElement>("#reload")!;

  const blockId = Number(params().get("block") ?? "0");
  let view: BlockView | null = null;
  let displayedAccuracy: number | null = null;

  const redraw = () => {
    if (!view) return;
    renderBlockTable(tableHost, view, {
      onEdit: (key, text) => {
        view!.edit(key, text);
        const row = tableHost.querySelector(`tr[data-key="${key}"]`);
        if (row) row.className = view!.rows.find((r) => r.key === key)!.dirty ? "dirty" : "";
        renderSummary(summaryBar, view!, displayedAccuracy);
      },
    });
    renderSummary(summaryBar, view, displayedAccuracy);
  };

  const load = async () => {
    try {
      view = new BlockView(await api.getBlock(blockId));
      displayedAccuracy = view.summary.accuracy;
      redraw();
      await refreshMetrics(api, metricsPanel);
      toast(status, `loaded block ${blockId} (${view.summary.status})`);
    } catch (error) {
      toast(status, error instanceof Error ? error.message : String(error), true);
    }
  };

  submitButton.addEventListener("click", async () => {
    if (!view) return;
    try {
      const summary = await api.postCorrections(blockId, view.corrections());
      view.applySubmitted(summary);
      // show server truth: re-fetch the block and the metrics it changed
      view = new BlockView(await api.getBlock(blockId));
      displayedAccuracy = summary.accuracy;
      const metricsAccuracy = await refreshMetrics(api, metricsPanel);
      redraw();
      toast(
        status,
        `submitted: accuracy ${summary.accuracy} (metrics agree: ${metricsAccuracy === summary.accuracy})`,
      );
    } catch (error) {
      toast(status, error instanceof ApiError ? error.message : String(error), true);
    }
  });

  retrainButton.addEventListener("click", async () => {
    try {
      const result = await api.retrain();
      await refreshMetrics(api, metricsPanel);
      toast(status, `retrained: model v${result.version} on ${result.training_pairs} pairs`);
    } catch (error) {
      toast(status, error instanceof ApiError ? error.message : String(error), true);
    }
  });

  reloadButton.addEventListener("click", load);
  await load();
}

declare global {
  interface Window {
    arabishReviewStart?: typeof start;
  }
}

if (typeof window !== "undefined" && typeof document !== "undefined") {
  window.arabishReviewStart = start;
  const root = document.getElementById("app");
  if (root) {
    const base = params().get("api") ?? "http://127.0.0.1:8000";
    void start(root, new ApiClient(base));
  }
}
