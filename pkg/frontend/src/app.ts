// DOM wiring for the dashboard.  All rendering goes through the pure
// view modules; this file only reads inputs, calls the API, and swaps
// innerHTML.  State is (store version, selected namespace, draft text);
// every 409 triggers a refresh so the UI reconverges on server state.

import { ApiClient, ApiError } from "./api.js";
import { frequencyBars, jointBars, renderBarChart } from "./chart.js";
import { hasErrors, renderDiagnostics } from "./diagnostics.js";
import { parseOverrideString } from "./overrides.js";
import type { CompileResponse, NamespaceSummary } from "./types.js";
import { renderAssignmentPanel, renderErrorBanner, renderNamespaceView } from "./views.js";

const COMPILE_DEBOUNCE_MS = 300;

interface AppState {
  version: number;
  namespaces: NamespaceSummary[];
  selected: string | null;
  lastCompile: CompileResponse | null;
  mutationInFlight: boolean;
}

export function startApp(root: Document, apiBase: string): void {
  const api = new ApiClient(apiBase);
  const state: AppState = {
    version: 0,
    namespaces: [],
    selected: null,
    lastCompile: null,
    mutationInFlight: false,
  };

  const el = (id: string) => root.getElementById(id) as HTMLElement;
  const input = (id: string) => root.getElementById(id) as HTMLInputElement;
  const editor = () => root.getElementById("script-editor") as HTMLTextAreaElement;

  function banner(message: string): void {
    el("banner-slot").innerHTML = message ? renderErrorBanner(message) : "";
  }

  async function refresh(): Promise<void> {
    try {
      const listing = await api.listNamespaces();
      state.version = listing.version;
      state.namespaces = listing.namespaces;
      if (state.selected && !listing.namespaces.some((ns) => ns.name === state.selected)) {
        state.selected = null;
      }
      if (!state.selected && listing.namespaces.length > 0) {
        state.selected = listing.namespaces[0]!.name;
      }
      renderAll();
      banner("");
    } catch (error) {
      banner(`cannot reach service: ${String(error)}`);
    }
  }

  function selectedSummary(): NamespaceSummary | null {
    return state.namespaces.find((ns) => ns.name === state.selected) ?? null;
  }

  function renderAll(): void {
    el("namespace-list").innerHTML = state.namespaces
      .map(
        (ns) =>
          `<button class="ns-tab${ns.name === state.selected ? " active" : ""}" ` +
          `data-ns="${ns.name}">${ns.name}</button>`,
      )
      .join("");
    const summary = selectedSummary();
    el("namespace-view").innerHTML = summary
      ? renderNamespaceView(summary)
      : `<p class="empty">create a namespace to begin</p>`;
    el("store-version").textContent = `store v${state.version}`;
    updateLaunchButton();
  }

  function updateLaunchButton(): void {
    const launch = root.getElementById("launch") as HTMLButtonElement;
    const compiled = state.lastCompile;
    launch.disabled =
      state.mutationInFlight ||
      !state.selected ||
      compiled === null ||
      hasErrors(compiled.diagnostics);
  }

  // --- script editor with debounced compile ---

  let compileTimer: ReturnType<typeof setTimeout> | undefined;

  function scheduleCompile(): void {
    clearTimeout(compileTimer);
    compileTimer = setTimeout(() => void compileNow(), COMPILE_DEBOUNCE_MS);
  }

  async function compileNow(): Promise<void> {
    const source = editor().value;
    try {
      const result = await api.compile(source);
      state.lastCompile = result;
      el("diagnostics-slot").innerHTML = renderDiagnostics(source, result.diagnostics);
      banner("");
    } catch (error) {
      // keep the last diagnostics; a network blip should not clear them
      banner(`compile request failed: ${String(error)}`);
    }
    updateLaunchButton();
  }

  async function simulateNow(): Promise<void> {
    const source = editor().value;
    const compiled = state.lastCompile;
    if (!compiled || hasErrors(compiled.diagnostics)) return;
    const parameters = compiled.parameters ?? [];
    try {
      const pair: [string, string][] =
        parameters.length >= 2 ? [[parameters[0]!, parameters[1]!]] : [];
      const report = await api.simulate({ source, n: 10000, pairs: pair });
      const chart =
        pair.length === 1
          ? renderBarChart(
              jointBars(report, pair[0]![0], pair[0]![1]),
              `${pair[0]![0]} x ${pair[0]![1]} over ${report.n} units`,
            )
          : parameters.length === 1
            ? renderBarChart(
                frequencyBars(report, parameters[0]!),
                `${parameters[0]} over ${report.n} units`,
              )
            : `<p class="empty">nothing to chart</p>`;
      el("chart-slot").innerHTML = chart;
    } catch (error) {
      banner(`simulate failed: ${String(error)}`);
    }
  }

  // --- mutations with optimistic concurrency ---

  async function mutate(action: () => Promise<unknown>): Promise<void> {
    if (state.mutationInFlight) return;
    state.mutationInFlight = true;
    updateLaunchButton();
    try {
      await action();
      banner("");
    } catch (error) {
      if (error instanceof ApiError && error.isConflict) {
        banner("someone else changed the store; view refreshed — retry if still wanted");
      } else {
        banner(String(error));
      }
    } finally {
      state.mutationInFlight = false;
      await refresh();
    }
  }

  // --- event wiring ---

  el("namespace-list").addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const name = target.dataset["ns"];
    if (name) {
      state.selected = name;
      renderAll();
    }
  });

  el("namespace-view").addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const experiment = target.dataset["experiment"];
    if (experiment && state.selected) {
      void mutate(() => api.deallocate(state.selected!, experiment, state.version));
    }
  });

  el("create-namespace").addEventListener("click", () => {
    void mutate(() =>
      api.createNamespace({
        name: input("new-ns-name").value.trim(),
        primary_unit: input("new-ns-unit").value.trim() || "userid",
        num_segments: parseInt(input("new-ns-segments").value, 10) || 10000,
        version: state.version,
      }),
    );
  });

  editor().addEventListener("input", scheduleCompile);
  el("simulate").addEventListener("click", () => void simulateNow());
  el("launch").addEventListener("click", () => {
    const name = input("experiment-name").value.trim();
    const segments = parseInt(input("experiment-segments").value, 10);
    if (!name || !segments || !state.selected) return;
    void mutate(() =>
      api.allocate(state.selected!, {
        name,
        source: editor().value,
        num_segments: segments,
        version: state.version,
      }),
    );
  });

  el("preview").addEventListener("click", () => void previewNow());

  async function previewNow(): Promise<void> {
    const summary = selectedSummary();
    if (!summary) return;
    const rawOverrides = input("preview-overrides").value;
    const parsed = parseOverrideString(rawOverrides);
    if (!parsed.ok) {
      el("assignment-slot").innerHTML = renderErrorBanner(`bad freeze string: ${parsed.error}`);
      return;
    }
    try {
      const result = await api.assignment(
        summary.name,
        summary.primary_unit,
        input("preview-unit").value.trim() || "0",
        { overrides: rawOverrides.trim() },
      );
      el("assignment-slot").innerHTML = renderAssignmentPanel(result);
    } catch (error) {
      el("assignment-slot").innerHTML = renderErrorBanner(String(error));
    }
  }

  void refresh();
  scheduleCompile();
}
