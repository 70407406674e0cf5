// The allocation bar: one proportional span per experiment plus one for
// unallocated traffic.  Span widths always sum to the namespace's total
// segment count, and an experiment keeps its color for life (the hue is
// a pure function of its name).

import type { NamespaceSummary } from "./types.js";

export interface AllocationSpan {
  label: string;
  segments: number;
  fraction: number;
  color: string;
}

export const UNALLOCATED_COLOR = "#d0d4da";

export function experimentColor(name: string): string {
  let hash = 0;
  for (let i = 0; i < name.length; i++) {
    hash = (hash * 31 + name.charCodeAt(i)) >>> 0;
  }
  const hue = hash % 360;
  return `hsl(${hue}, 65%, 55%)`;
}

export function allocationSpans(summary: NamespaceSummary): AllocationSpan[] {
  const spans: AllocationSpan[] = [];
  let allocated = 0;
  for (const experiment of summary.experiments) {
    if (experiment.status !== "active") continue;
    allocated += experiment.num_segments;
    spans.push({
      label: experiment.name,
      segments: experiment.num_segments,
      fraction: experiment.num_segments / summary.num_segments,
      color: experimentColor(experiment.name),
    });
  }
  spans.push({
    label: "unallocated",
    segments: summary.num_segments - allocated,
    fraction: (summary.num_segments - allocated) / summary.num_segments,
    color: UNALLOCATED_COLOR,
  });
  return spans;
}

export function renderAllocationBar(spans: AllocationSpan[]): string {
  const total = spans.reduce((sum, span) => sum + span.segments, 0);
  const pieces = spans
    .filter((span) => span.segments > 0)
    .map(
      (span) =>
        `<span class="alloc-span" style="width: ${(span.fraction * 100).toFixed(3)}%; ` +
        `background: ${span.color}" title="${escapeHtml(span.label)}: ` +
        `${span.segments}/${total} segments"></span>`,
    );
  return `<div class="alloc-bar" data-total="${total}">${pieces.join("")}</div>`;
}

export function escapeHtml(text: unknown): string {
  return String(text)
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}
