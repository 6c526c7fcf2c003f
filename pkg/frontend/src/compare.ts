/** Method comparison table: rows side by side with cost deltas vs fpselect. */

import { CompareRow } from "./api.js";

export interface ComparisonCell extends CompareRow {
  costRatio: number | null; // cost / fpselect cost, null when not comparable
}

export function buildComparison(rows: CompareRow[]): ComparisonCell[] {
  const reference = rows.find((r) => r.method === "fpselect" && r.status === "ok");
  const referenceCost = reference?.cost ?? null;
  return rows.map((row) => ({
    ...row,
    costRatio:
      row.status === "ok" && referenceCost !== null && referenceCost > 0
        ? row.cost! / referenceCost
        : null,
  }));
}

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const fmt = (value: number | undefined, digits = 4): string =>
  value === undefined ? "" : value.toFixed(digits);

export function renderComparisonHtml(cells: ComparisonCell[]): string {
  const header =
    "<tr><th>method</th><th>selected set</th><th>cost</th><th>cost vs fpselect</th>" +
    "<th>sensitivity</th><th>entropy</th><th>unicity</th><th>stability</th><th>explored</th></tr>";
  const body = cells
    .map((cell) => {
      if (cell.status === "unreachable") {
        return (
          `<tr class="unreachable"><td>${escapeHtml(cell.method)}</td>` +
          `<td colspan="8"><span class="badge">threshold unreachable</span> ` +
          `full-set sensitivity ${fmt(cell.full_set_sensitivity)}</td></tr>`
        );
      }
      if (cell.status === "error") {
        return (
          `<tr class="error"><td>${escapeHtml(cell.method)}</td>` +
          `<td colspan="8"><span class="badge">error</span> ${escapeHtml(cell.error ?? "")}</td></tr>`
        );
      }
      const ratio = cell.costRatio;
      const ratioText = ratio === null ? "" : `${ratio.toFixed(2)}x`;
      const ratioClass = ratio !== null && ratio > 1.0001 ? "worse" : "even";
      return (
        `<tr><td>${escapeHtml(cell.method)}</td>` +
        `<td>{${escapeHtml((cell.set ?? []).join(", "))}}</td>` +
        `<td>${fmt(cell.cost)}</td>` +
        `<td class="${ratioClass}">${ratioText}</td>` +
        `<td>${fmt(cell.sensitivity)}</td>` +
        `<td>${fmt(cell.entropy_bits, 3)}</td>` +
        `<td>${fmt(cell.unicity, 3)}</td>` +
        `<td>${fmt(cell.stability, 3)}</td>` +
        `<td>${cell.explored_count ?? ""}</td></tr>`
      );
    })
    .join("");
  return `<table class="comparison">${header}${body}</table>`;
}
