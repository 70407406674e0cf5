import { describe, expect, it } from "vitest";

import { renderAssignmentPanel, renderNamespaceView } from "../src/views.js";
import type { AssignmentResponse, NamespaceSummary } from "../src/types.js";

const summary: NamespaceSummary = {
  name: "news_feed",
  primary_unit: "userid",
  num_segments: 1000,
  allocated_segments: 300,
  launch_defaults: { banner: true },
  experiments: [
    { name: "button", status: "active", num_segments: 300, parameters: ["button_color"] },
    { name: "old", status: "deallocated", num_segments: 100, parameters: ["x"] },
  ],
};

describe("renderNamespaceView", () => {
  it("shows the allocation bar with the full segment total", () => {
    const html = renderNamespaceView(summary);
    expect(html).toContain('data-total="1000"');
    expect(html).toContain("300/1000 segments allocated");
  });

  it("lists launch defaults and experiments with status", () => {
    const html = renderNamespaceView(summary);
    expect(html).toContain("banner");
    expect(html).toContain("true");
    expect(html).toContain("button_color");
    expect(html).toContain('class="experiment active"');
    expect(html).toContain('class="experiment deallocated"');
  });

  it("offers deallocation only for active experiments", () => {
    const html = renderNamespaceView(summary);
    expect(html).toContain('data-experiment="button"');
    expect(html).not.toContain('data-experiment="old"');
  });
});

describe("renderAssignmentPanel", () => {
  const result: AssignmentResponse = {
    experiment: "banner_test",
    params: { has_banner: 0, has_feed_stories: 1 },
    frozen: ["has_banner"],
    exposure_logged: true,
  };

  it("labels frozen vs derived parameters", () => {
    const html = renderAssignmentPanel(result);
    expect(html).toContain('class="badge frozen"');
    expect(html).toContain('class="badge derived"');
    expect(html).toContain("has_banner");
    expect(html).toContain("has_feed_stories");
  });

  it("names the experiment or the default path", () => {
    expect(renderAssignmentPanel(result)).toContain("banner_test");
    expect(
      renderAssignmentPanel({ ...result, experiment: null }),
    ).toContain("default path");
  });
});
