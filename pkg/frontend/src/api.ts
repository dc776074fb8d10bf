// Thin fetch client over the service API.

import type {
  AggregateCell,
  DatabaseInfo,
  ExtremesResponse,
  HeatPoint,
  RunStatusResponse,
  TestKind,
} from "./types";

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;

  constructor(status: number, code: string, message: string) {
    super(message);
    this.status = status;
    this.code = code;
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(path, init);
  if (!response.ok) {
    let code = "http_error";
    let message = `HTTP ${response.status}`;
    try {
      const body = await response.json();
      if (body && typeof body.code === "string") code = body.code;
      if (body && typeof body.message === "string") message = body.message;
    } catch {
      // non-JSON error body; keep the defaults
    }
    throw new ApiError(response.status, code, message);
  }
  return (await response.json()) as T;
}

export async function listDatabases(): Promise<DatabaseInfo[]> {
  const body = await request<{ databases: DatabaseInfo[] }>("/api/databases");
  return body.databases;
}

export async function getAggregates(): Promise<AggregateCell[]> {
  const body = await request<{ cells: AggregateCell[] }>("/api/aggregates");
  return body.cells;
}

export function getExtremes(databaseId: string): Promise<ExtremesResponse> {
  return request<ExtremesResponse>(
    `/api/databases/${encodeURIComponent(databaseId)}/extremes`,
  );
}

export async function getHeatmap(): Promise<HeatPoint[]> {
  const body = await request<{ points: HeatPoint[] }>("/api/heatmap");
  return body.points;
}

export function getRun(runId: string): Promise<RunStatusResponse> {
  return request<RunStatusResponse>(`/api/runs/${encodeURIComponent(runId)}`);
}

export async function startRun(
  testKind: TestKind,
  databaseIds: string[],
  repetitions: number,
): Promise<string> {
  const body = await request<{ run_id: string }>("/api/runs", {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({
      test_kind: testKind,
      database_ids: databaseIds,
      repetitions,
    }),
  });
  return body.run_id;
}
