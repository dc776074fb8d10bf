// Live event stream client with a polling fallback. The EventSource
// constructor is injected so tests can drive the stream with a fake.

import type { RunCompletedEvent, TrialRecord } from "./types";

export interface StreamHandlers {
  onTrial(trial: TrialRecord): void;
  onRunCompleted(event: RunCompletedEvent): void;
  onDrop?(): void;
}

export interface EventSourceLike {
  addEventListener(type: string, listener: (event: MessageEvent) => void): void;
  close(): void;
  onerror: ((event: unknown) => void) | null;
}

export type EventSourceFactory = (url: string) => EventSourceLike;

export class LiveStream {
  private source: EventSourceLike | null = null;
  private readonly factory: EventSourceFactory;
  private readonly handlers: StreamHandlers;
  dropped = false;

  constructor(handlers: StreamHandlers, factory: EventSourceFactory) {
    this.handlers = handlers;
    this.factory = factory;
  }

  connect(url = "/api/stream"): void {
    this.source = this.factory(url);
    this.source.addEventListener("trial", (event) => {
      this.handlers.onTrial(JSON.parse(event.data) as TrialRecord);
    });
    this.source.addEventListener("run_completed", (event) => {
      this.handlers.onRunCompleted(JSON.parse(event.data) as RunCompletedEvent);
    });
    this.source.onerror = () => {
      this.dropped = true;
      this.handlers.onDrop?.();
    };
  }

  close(): void {
    this.source?.close();
    this.source = null;
  }
}

export interface PollerDeps {
  fetchStatus(runId: string): Promise<unknown>;
  onStatus(status: unknown): boolean; // returns true when polling should stop
  intervalMs?: number;
}

// Poll GET /api/runs/{id} every second until the callback reports a
// terminal state; used when the stream drops mid-run.
export function startPolling(runId: string, deps: PollerDeps): () => void {
  const intervalMs = deps.intervalMs ?? 1000;
  let stopped = false;
  const timer = setInterval(async () => {
    if (stopped) return;
    try {
      const status = await deps.fetchStatus(runId);
      if (deps.onStatus(status)) {
        stopped = true;
        clearInterval(timer);
      }
    } catch {
      // transient polling failure; keep trying until stopped
    }
  }, intervalMs);
  return () => {
    stopped = true;
    clearInterval(timer);
  };
}
