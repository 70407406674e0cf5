// Shapes returned by the assignment service REST API (docs/http_api.md
// in the backend repository).

export interface ExperimentSummary {
  name: string;
  status: "active" | "deallocated";
  num_segments: number;
  parameters: string[];
}

export interface NamespaceSummary {
  name: string;
  primary_unit: string;
  num_segments: number;
  allocated_segments: number;
  launch_defaults: Record<string, unknown>;
  experiments: ExperimentSummary[];
}

export interface NamespaceListResponse {
  version: number;
  namespaces: NamespaceSummary[];
}

export interface NamespaceDetailResponse {
  version: number;
  namespace: NamespaceSummary;
}

export interface SegmentMapResponse {
  version: number;
  num_segments: number;
  segments: (string | null)[];
}

export interface Diagnostic {
  severity: "error" | "warning";
  message: string;
  offset: number | null;
}

export interface CompileResponse {
  ir?: string;
  parameters?: string[];
  units?: Record<string, string[] | string>;
  diagnostics: Diagnostic[];
}

export interface SimulationReport {
  n: number;
  frequencies: Record<string, Record<string, number>>;
  joint: Record<string, Record<string, number>>;
}

export interface AssignmentResponse {
  experiment: string | null;
  params: Record<string, unknown>;
  frozen: string[];
  exposure_logged: boolean;
}

export interface MutationResponse {
  version: number;
}

export interface ApiErrorBody {
  error: string;
  detail: string;
  version?: number;
  diagnostics?: Diagnostic[];
}
