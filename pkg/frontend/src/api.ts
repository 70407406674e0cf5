import type {
  ApiErrorBody,
  AssignmentResponse,
  CompileResponse,
  NamespaceDetailResponse,
  NamespaceListResponse,
  MutationResponse,
  SegmentMapResponse,
  SimulationReport,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly body: ApiErrorBody,
  ) {
    super(`${body.error}: ${body.detail}`);
  }

  /** A stale version token; the caller should refresh and retry. */
  get isConflict(): boolean {
    return this.status === 409;
  }
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json();
    if (!response.ok) {
      throw new ApiError(response.status, payload as ApiErrorBody);
    }
    return payload as T;
  }

  version(): Promise<{ version: number }> {
    return this.request("GET", "/version");
  }

  listNamespaces(): Promise<NamespaceListResponse> {
    return this.request("GET", "/namespaces");
  }

  namespace(name: string): Promise<NamespaceDetailResponse> {
    return this.request("GET", `/namespaces/${encodeURIComponent(name)}`);
  }

  segmentMap(name: string): Promise<SegmentMapResponse> {
    return this.request("GET", `/namespaces/${encodeURIComponent(name)}/segment-map`);
  }

  createNamespace(options: {
    name: string;
    primary_unit: string;
    num_segments?: number;
    launch_defaults?: Record<string, unknown>;
    version?: number;
  }): Promise<MutationResponse> {
    return this.request("POST", "/namespaces", options);
  }

  compile(source: string): Promise<CompileResponse> {
    return this.request("POST", "/compile", { source });
  }

  simulate(options: {
    source?: string;
    ir?: string;
    n?: number;
    unit?: string;
    pairs?: [string, string][];
  }): Promise<SimulationReport> {
    return this.request("POST", "/simulate", options);
  }

  allocate(
    namespace: string,
    options: { name: string; source: string; num_segments: number; version?: number },
  ): Promise<MutationResponse> {
    return this.request(
      "POST",
      `/namespaces/${encodeURIComponent(namespace)}/experiments`,
      options,
    );
  }

  deallocate(
    namespace: string,
    experiment: string,
    version?: number,
  ): Promise<MutationResponse & { prior_status: string }> {
    return this.request(
      "POST",
      `/namespaces/${encodeURIComponent(namespace)}/experiments/` +
        `${encodeURIComponent(experiment)}/deallocate`,
      version === undefined ? {} : { version },
    );
  }

  setDefaults(
    namespace: string,
    values: Record<string, unknown>,
    version?: number,
  ): Promise<MutationResponse> {
    return this.request("PUT", `/namespaces/${encodeURIComponent(namespace)}/defaults`, {
      values,
      ...(version === undefined ? {} : { version }),
    });
  }

  assignment(
    namespace: string,
    primaryUnit: string,
    unitValue: string,
    options: { overrides?: string; extraInputs?: Record<string, string> } = {},
  ): Promise<AssignmentResponse> {
    const query = new URLSearchParams({ [primaryUnit]: unitValue });
    for (const [key, value] of Object.entries(options.extraInputs ?? {})) {
      query.set(key, value);
    }
    if (options.overrides) {
      query.set(`ns_${namespace}`, options.overrides);
    }
    return this.request(
      "GET",
      `/namespaces/${encodeURIComponent(namespace)}/assignment?${query}`,
    );
  }
}
