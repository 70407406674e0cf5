// Inline rendering of compile diagnostics.  The service reports a flat
// character offset; the editor wants line/column.

import { escapeHtml } from "./allocation.js";
import type { Diagnostic } from "./types.js";

export interface LineCol {
  line: number; // 1-based
  column: number; // 1-based
}

export function offsetToLineCol(source: string, offset: number): LineCol {
  const clamped = Math.max(0, Math.min(offset, source.length));
  let line = 1;
  let lineStart = 0;
  for (let i = 0; i < clamped; i++) {
    if (source[i] === "\n") {
      line += 1;
      lineStart = i + 1;
    }
  }
  return { line, column: clamped - lineStart + 1 };
}

export function hasErrors(diagnostics: Diagnostic[]): boolean {
  return diagnostics.some((d) => d.severity === "error");
}

export function renderDiagnostics(source: string, diagnostics: Diagnostic[]): string {
  if (diagnostics.length === 0) {
    return `<div class="diagnostics ok">no problems</div>`;
  }
  const items = diagnostics.map((d) => {
    const where =
      d.offset === null ? "" : (() => {
        const { line, column } = offsetToLineCol(source, d.offset);
        return `<span class="where">${line}:${column}</span> `;
      })();
    return (
      `<li class="diag ${d.severity}">${where}` +
      `<span class="severity">${d.severity}</span> ${escapeHtml(d.message)}</li>`
    );
  });
  return `<ul class="diagnostics">${items.join("")}</ul>`;
}
