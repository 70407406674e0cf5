import { describe, expect, it } from "vitest";

import { hasErrors, offsetToLineCol, renderDiagnostics } from "../src/diagnostics.js";
import type { Diagnostic } from "../src/types.js";

describe("offsetToLineCol", () => {
  const source = "a = 1;\nb = 2;\nc = 3;";

  it("maps offsets on the first line", () => {
    expect(offsetToLineCol(source, 0)).toEqual({ line: 1, column: 1 });
    expect(offsetToLineCol(source, 4)).toEqual({ line: 1, column: 5 });
  });

  it("maps offsets after newlines", () => {
    expect(offsetToLineCol(source, 7)).toEqual({ line: 2, column: 1 });
    expect(offsetToLineCol(source, 18)).toEqual({ line: 3, column: 5 });
  });

  it("clamps out-of-range offsets", () => {
    expect(offsetToLineCol(source, 9999).line).toBe(3);
    expect(offsetToLineCol(source, -5)).toEqual({ line: 1, column: 1 });
  });
});

describe("renderDiagnostics", () => {
  const error: Diagnostic = { severity: "error", message: "expected ';'", offset: 7 };
  const warning: Diagnostic = {
    severity: "warning",
    message: "possibly-unbound variable 'x'",
    offset: null,
  };

  it("renders an all-clear marker when empty", () => {
    expect(renderDiagnostics("a = 1;", [])).toContain("no problems");
  });

  it("shows line:column for offsets and omits it when absent", () => {
    const html = renderDiagnostics("a = 1;\nb = 2;", [error, warning]);
    expect(html).toContain("2:1");
    expect(html).toContain("expected");
    expect(html).toContain("possibly-unbound");
    expect(html.match(/<li/g)).toHaveLength(2);
  });

  it("distinguishes severities for styling", () => {
    const html = renderDiagnostics("x", [error, warning]);
    expect(html).toContain('class="diag error"');
    expect(html).toContain('class="diag warning"');
  });
});

describe("hasErrors", () => {
  it("is false for warnings only", () => {
    expect(hasErrors([{ severity: "warning", message: "m", offset: null }])).toBe(false);
  });

  it("is true when any error is present", () => {
    expect(
      hasErrors([
        { severity: "warning", message: "m", offset: null },
        { severity: "error", message: "e", offset: 0 },
      ]),
    ).toBe(true);
  });
});
