// Wire types mirroring the service API exactly. The UI never computes
// statistics; every displayed number originates from one of these payloads.

export const TEST_KINDS = [
  "upload_small",
  "upload_large",
  "retrieve_small",
  "retrieve_large",
  "update_small",
  "update_large",
] as const;

export type TestKind = (typeof TEST_KINDS)[number];

export const TEST_KIND_LABELS: Record<TestKind, string> = {
  upload_small: "Upload Small",
  upload_large: "Upload Large",
  retrieve_small: "Retrieve Small",
  retrieve_large: "Retrieve Large",
  update_small: "Update Small",
  update_large: "Update Large",
};

export interface DatabaseInfo {
  id: string;
  persistent_connection: boolean;
  dedupes_identical_content: boolean;
}

export interface AggregateCell {
  database_id: string;
  test_kind: TestKind;
  count: number;
  mean_ms: number;
  min_ms: number;
  max_ms: number;
}

export interface ExtremesEntry {
  best_ms: number;
  worst_ms: number;
}

export interface ExtremesResponse {
  database_id: string;
  extremes: Partial<Record<TestKind, ExtremesEntry>>;
}

export interface HeatPoint {
  lat: number;
  lon: number;
  avg_ms: number;
  count: number;
}

export interface TrialRecord {
  trial_id: string;
  run_id: string;
  database_id: string;
  test_kind: TestKind;
  elapsed_ms: number;
  started_at: string;
  lat: number | null;
  lon: number | null;
  outcome: "success" | "error";
  cache_hit: boolean;
  error?: string;
}

export interface RunStatusResponse {
  run_id: string;
  state: "pending" | "running" | "completed" | "failed";
  trials_done: number;
  trials_total: number;
  started_at: string;
  trials: TrialRecord[];
}

export interface RunCompletedEvent {
  run_id: string;
  state: string;
  trials_done: number;
  trials_total: number;
}
