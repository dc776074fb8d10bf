// Shared test doubles: a controllable EventSource and service fixtures.

import type { EventSourceLike } from "../src/stream";
import type { AggregateCell, HeatPoint, TestKind, TrialRecord } from "../src/types";
import { TEST_KINDS } from "../src/types";

export class FakeEventSource implements EventSourceLike {
  static instances: FakeEventSource[] = [];
  readonly url: string;
  closed = false;
  onerror: ((event: unknown) => void) | null = null;
  private listeners = new Map<string, ((event: MessageEvent) => void)[]>();

  constructor(url: string) {
    this.url = url;
    FakeEventSource.instances.push(this);
  }

  addEventListener(type: string, listener: (event: MessageEvent) => void): void {
    const existing = this.listeners.get(type) ?? [];
    this.listeners.set(type, [...existing, listener]);
  }

  close(): void {
    this.closed = true;
  }

  emit(type: string, data: unknown): void {
    for (const listener of this.listeners.get(type) ?? []) {
      listener({ data: JSON.stringify(data) } as MessageEvent);
    }
  }

  fail(): void {
    this.onerror?.(new Event("error"));
  }

  static reset(): void {
    FakeEventSource.instances = [];
  }

  static latest(): FakeEventSource {
    const last = FakeEventSource.instances[FakeEventSource.instances.length - 1];
    if (last === undefined) throw new Error("no FakeEventSource created yet");
    return last;
  }
}

// Reference mean table used as a chart fixture (databases x six tests).
export const FIXTURE_MEANS: Record<string, Record<TestKind, number>> = {
  mongodb: {
    upload_small: 250, upload_large: 1200, retrieve_small: 160,
    retrieve_large: 740, update_small: 250, update_large: 1280,
  },
  dynamodb: {
    upload_small: 210, upload_large: 680, retrieve_small: 150,
    retrieve_large: 300, update_small: 210, update_large: 680,
  },
  firebase: {
    upload_small: 70, upload_large: 500, retrieve_small: 55,
    retrieve_large: 540, update_small: 40, update_large: 380,
  },
  couchdb: {
    upload_small: 470, upload_large: 2800, retrieve_small: 366,
    retrieve_large: 700, update_small: 520, update_large: 2800,
  },
};

export function fixtureCells(): AggregateCell[] {
  const cells: AggregateCell[] = [];
  for (const [database, kinds] of Object.entries(FIXTURE_MEANS)) {
    for (const kind of TEST_KINDS) {
      const mean = kinds[kind];
      cells.push({
        database_id: database,
        test_kind: kind,
        count: 1,
        mean_ms: mean,
        min_ms: mean,
        max_ms: mean,
      });
    }
  }
  return cells;
}

export function fixtureHeatPoints(): HeatPoint[] {
  return [
    { lat: 43.9, lon: -78.9, avg_ms: 120, count: 4 },
    { lat: 51.5, lon: -0.1, avg_ms: 480, count: 2 },
    { lat: -33.9, lon: 151.2, avg_ms: 900, count: 1 },
  ];
}

export function trialRecord(overrides: Partial<TrialRecord> = {}): TrialRecord {
  return {
    trial_id: "run1:memory:0",
    run_id: "run1",
    database_id: "memory",
    test_kind: "retrieve_small",
    elapsed_ms: 87,
    started_at: "2026-01-01T00:00:00+00:00",
    lat: null,
    lon: null,
    outcome: "success",
    cache_hit: false,
    ...overrides,
  };
}

type RouteHandler = (url: string, init?: RequestInit) => { status?: number; body: unknown } | undefined;

// Minimal fetch stub: first matching route wins.
export function stubFetch(routes: Record<string, RouteHandler | { body: unknown; status?: number }>) {
  const calls: { url: string; init?: RequestInit }[] = [];
  const impl = async (input: RequestInfo | URL, init?: RequestInit): Promise<Response> => {
    const url = String(input);
    calls.push({ url, init });
    for (const [prefix, handler] of Object.entries(routes)) {
      if (!url.startsWith(prefix)) continue;
      const result = typeof handler === "function" ? handler(url, init) : handler;
      if (result === undefined) continue;
      const status = result.status ?? 200;
      return new Response(JSON.stringify(result.body), {
        status,
        headers: { "Content-Type": "application/json" },
      });
    }
    return new Response(JSON.stringify({ code: "not_found", message: url }), { status: 404 });
  };
  globalThis.fetch = impl as typeof fetch;
  return calls;
}
