/** Attribute-set detail card: measures plus the fingerprint sample table. */

import { PropertiesView } from "./api.js";

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderPropertiesHtml(props: PropertiesView): string {
  const ev = props.evaluation;
  const setText = ev.set.length > 0 ? ev.set.join(", ") : "(empty set)";
  const efficiency = ev.efficiency === "inf" ? "inf" : String(ev.efficiency);
  const sampleRows = props.sample
    .map(
      (entry) =>
        `<tr><td>${entry.count}</td><td>${entry.values
          .map((v) => (v === "" ? "<i>(empty)</i>" : escapeHtml(v)))
          .join(" | ")}</td></tr>`
    )
    .join("");
  return (
    `<div class="properties-card">` +
    `<h3>{${escapeHtml(setText)}}</h3>` +
    `<dl>` +
    `<dt>usability cost</dt><dd>${ev.cost}</dd>` +
    `<dt>sensitivity</dt><dd>${ev.sensitivity}` +
    ` <span class="badge ${ev.satisfying ? "ok" : "no"}">${
      ev.satisfying ? "satisfies threshold" : "above threshold"
    }</span></dd>` +
    `<dt>efficiency</dt><dd>${efficiency}</dd>` +
    `<dt>entropy</dt><dd>${props.entropy_bits} bits</dd>` +
    `<dt>unicity</dt><dd>${props.unicity}</dd>` +
    `<dt>stability</dt><dd>${props.stability}</dd>` +
    `</dl>` +
    `<h4>most common fingerprints</h4>` +
    `<table class="sample"><tr><th>browsers</th><th>projected values</th></tr>${sampleRows}</table>` +
    `</div>`
  );
}
