/** DOM rendering. Arabic-script cells render right-to-left, Arabish cells
 * left-to-right, mixed within each table row. Editing is keyboard-first:
 * Enter (or Ctrl+ArrowDown) jumps to the next token's field.
 */

import type { Metrics } from "./api.js";
import { BlockView, accuracyCurve, formatAccuracy } from "./model.js";

export interface RenderHandlers {
  onEdit(key: string, text: string): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [name, value] of Object.entries(attrs)) {
    node.setAttribute(name, value);
  }
  if (text !== undefined) node.textContent = text;
  return node;
}

function focusRowInput(table: HTMLElement, index: number): void {
  const inputs = table.querySelectorAll<HTMLInputElement>("input[data-row-index]");
  const target = inputs[index];
  if (target) {
    target.focus();
    target.select();
  }
}

export function renderBlockTable(
  container: HTMLElement,
  view: BlockView,
  handlers: RenderHandlers,
): void {
  container.replaceChildren();
  const table = el("table", { class: "block-table" });
  const head = el("tr");
  for (const title of ["#", "Arabish", "Auto", "Transcription", "POS", "Gloss"]) {
    head.appendChild(el("th", {}, title));
  }
  table.appendChild(head);

  view.rows.forEach((row, index) => {
    const tr = el("tr", { "data-key": row.key, class: row.dirty ? "dirty" : "" });
    tr.appendChild(el("td", {}, String(index + 1)));
    tr.appendChild(el("td", { dir: "ltr", class: "arabish" }, row.arabish));

    const autoCell = el("td", { dir: "rtl", class: "auto" });
    const diff = view.diffAgainstAuto(row);
    if (diff !== null) {
      autoCell.appendChild(el("s", {}, diff)); // struck-through superseded prediction
    } else if (row.auto) {
      autoCell.textContent = row.auto.join(" + ");
    } else {
      autoCell.textContent = "—";
    }
    tr.appendChild(autoCell);

    const editCell = el("td", { dir: "rtl", class: "edit" });
    const input = el("input", {
      type: "text",
      dir: "rtl",
      value: row.value,
      "data-key": row.key,
      "data-row-index": String(index),
    });
    input.value = row.value;
    input.addEventListener("input", () => handlers.onEdit(row.key, input.value));
    input.addEventListener("keydown", (event: KeyboardEvent) => {
      if (event.key === "Enter" || (event.ctrlKey && event.key === "ArrowDown")) {
        event.preventDefault();
        focusRowInput(table, index + 1);
      } else if (event.ctrlKey && event.key === "ArrowUp") {
        event.preventDefault();
        focusRowInput(table, index - 1);
      }
    });
    editCell.appendChild(input);
    tr.appendChild(editCell);

    tr.appendChild(el("td", { dir: "ltr", class: "pos" }, row.row.pos));
    tr.appendChild(el("td", { dir: "ltr", class: "gloss" }, row.row.ita));
    table.appendChild(tr);
  });
  container.appendChild(table);
}

export function renderSummary(
  container: HTMLElement,
  view: BlockView,
  displayedAccuracy: number | null,
): void {
  const { id, status, size } = view.summary;
  const edits = view.dirtyRows().length;
  container.replaceChildren(
    el("span", { class: "block-id" }, `Block ${id}`),
    el("span", { class: `status status-${status}` }, status),
    el("span", { class: "size" }, `${size} tokens`),
    el("span", { class: "edits" }, edits ? `${edits} unsaved edit(s)` : "no edits"),
    el("span", { class: "accuracy" }, `accuracy ${formatAccuracy(displayedAccuracy)}`),
  );
}

/** Accuracy-per-block curve as an inline SVG polyline. */
export function renderMetricsPanel(container: HTMLElement, metrics: Metrics): void {
  container.replaceChildren();
  const points = accuracyCurve(metrics);
  const list = el("ul", { class: "block-accuracies" });
  for (const point of points) {
    list.appendChild(el("li", {}, `block ${point.id}: ${formatAccuracy(point.accuracy)}`));
  }
  container.appendChild(list);

  if (points.length > 0) {
    const width = 260;
    const height = 120;
    const pad = 12;
    const step = points.length > 1 ? (width - 2 * pad) / (points.length - 1) : 0;
    const coords = points
      .map((p, i) => {
        const x = pad + i * step;
        const y = height - pad - p.accuracy * (height - 2 * pad);
        return `${x.toFixed(1)},${y.toFixed(1)}`;
      })
      .join(" ");
    const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
    svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
    svg.setAttribute("class", "accuracy-curve");
    const line = document.createElementNS("http://www.w3.org/2000/svg", "polyline");
    line.setAttribute("points", coords);
    line.setAttribute("fill", "none");
    line.setAttribute("stroke", "currentColor");
    svg.appendChild(line);
    container.appendChild(svg);
  }

  const growth = metrics.training_growth
    .map((g) => `v${g.version}: ${g.pairs}`)
    .join("  ·  ");
  container.appendChild(el("p", { class: "growth" }, growth ? `training pairs ${growth}` : ""));
}
