// HTML renderers for the main panels.  Pure string-in/string-out so
// every view is testable without a browser; app.ts owns the DOM.

import { allocationSpans, escapeHtml, experimentColor, renderAllocationBar } from "./allocation.js";
import type { AssignmentResponse, NamespaceSummary } from "./types.js";

export function renderNamespaceView(summary: NamespaceSummary): string {
  const spans = allocationSpans(summary);
  const legend = spans
    .filter((span) => span.segments > 0)
    .map(
      (span) =>
        `<span class="legend-item"><span class="swatch" style="background: ${span.color}">` +
        `</span>${escapeHtml(span.label)} (${span.segments})</span>`,
    )
    .join(" ");

  const defaults = Object.entries(summary.launch_defaults);
  const defaultsTable =
    defaults.length === 0
      ? `<p class="empty">no launch defaults</p>`
      : `<table class="defaults"><tbody>` +
        defaults
          .map(
            ([key, value]) =>
              `<tr><td>${escapeHtml(key)}</td><td>${escapeHtml(JSON.stringify(value))}</td></tr>`,
          )
          .join("") +
        `</tbody></table>`;

  const experiments =
    summary.experiments.length === 0
      ? `<p class="empty">no experiments yet</p>`
      : `<ul class="experiments">` +
        summary.experiments
          .map((experiment) => {
            const swatch =
              experiment.status === "active"
                ? `<span class="swatch" style="background: ${experimentColor(experiment.name)}"></span>`
                : `<span class="swatch retired"></span>`;
            return (
              `<li class="experiment ${experiment.status}" data-name="${escapeHtml(experiment.name)}">` +
              `${swatch}<strong>${escapeHtml(experiment.name)}</strong> ` +
              `<span class="status">${experiment.status}</span> ` +
              `${experiment.num_segments} segments — ` +
              `${experiment.parameters.map(escapeHtml).join(", ") || "no parameters"} ` +
              (experiment.status === "active"
                ? `<button class="deallocate" data-experiment="${escapeHtml(experiment.name)}">deallocate</button>`
                : "") +
              `</li>`
            );
          })
          .join("") +
        `</ul>`;

  return (
    `<section class="namespace" data-name="${escapeHtml(summary.name)}">` +
    `<h2>${escapeHtml(summary.name)} <small>unit: ${escapeHtml(summary.primary_unit)}, ` +
    `${summary.allocated_segments}/${summary.num_segments} segments allocated</small></h2>` +
    renderAllocationBar(spans) +
    `<div class="legend">${legend}</div>` +
    `<h3>Launch defaults</h3>${defaultsTable}` +
    `<h3>Experiments</h3>${experiments}</section>`
  );
}

export function renderAssignmentPanel(result: AssignmentResponse): string {
  const frozen = new Set(result.frozen);
  const rows = Object.entries(result.params)
    .map(([name, value]) => {
      const kind = frozen.has(name) ? "frozen" : "derived";
      return (
        `<tr class="${kind}"><td>${escapeHtml(name)}</td>` +
        `<td>${escapeHtml(JSON.stringify(value))}</td>` +
        `<td><span class="badge ${kind}">${kind}</span></td></tr>`
      );
    })
    .join("");
  const experiment = result.experiment
    ? `experiment <strong>${escapeHtml(result.experiment)}</strong>`
    : "default path (no experiment)";
  return (
    `<div class="assignment-panel"><p>${experiment}</p>` +
    `<table class="params"><thead><tr><th>parameter</th><th>value</th><th></th></tr></thead>` +
    `<tbody>${rows}</tbody></table></div>`
  );
}

export function renderErrorBanner(message: string): string {
  return `<div class="banner error">${escapeHtml(message)}</div>`;
}
