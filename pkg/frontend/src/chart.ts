// Distribution charts built straight from simulation reports.  Bars are
// the report's exact cells — one per parameter value, or one per joint
// cell when a parameter pair was tabulated — with no client-side
// re-binning.

import { escapeHtml } from "./allocation.js";
import type { SimulationReport } from "./types.js";

export interface Bar {
  label: string;
  value: number;
}

export function frequencyBars(report: SimulationReport, parameter: string): Bar[] {
  const cells = report.frequencies[parameter] ?? {};
  return Object.keys(cells)
    .sort()
    .map((label) => ({ label, value: cells[label] ?? 0 }));
}

export function jointBars(report: SimulationReport, a: string, b: string): Bar[] {
  const cells = report.joint[`${a},${b}`] ?? {};
  return Object.keys(cells)
    .sort()
    .map((key) => ({ label: key.replace("|", " / "), value: cells[key] ?? 0 }));
}

export function renderBarChart(bars: Bar[], caption = ""): string {
  if (bars.length === 0) return `<p class="empty">no data</p>`;
  const max = Math.max(...bars.map((bar) => bar.value), 1e-12);
  const pieces = bars.map((bar) => {
    const height = Math.max(2, (bar.value / max) * 100);
    return (
      `<div class="bar-wrap" title="${escapeHtml(bar.label)}: ${(bar.value * 100).toFixed(1)}%">` +
      `<div class="bar" style="height: ${height.toFixed(1)}%"></div>` +
      `<span class="bar-value">${(bar.value * 100).toFixed(1)}%</span>` +
      `<span class="bar-label">${escapeHtml(bar.label)}</span></div>`
    );
  });
  const captionHtml = caption ? `<figcaption>${escapeHtml(caption)}</figcaption>` : "";
  return `<figure class="bar-chart" data-bars="${bars.length}">${pieces.join("")}${captionHtml}</figure>`;
}
