// Dashboard state machine. Pure functions over a ViewModel object so the
// selection invariants and run lifecycle are testable without a DOM:
//  - launching requires exactly one test and at least one database;
//  - the test selector is locked while a run is active (one test at a time);
//  - per-database timers tick until their trial event freezes them.

import type { RunCompletedEvent, RunStatusResponse, TestKind, TrialRecord } from "./types";

export type TimerPhase = "ticking" | "frozen" | "error";

export interface TimerState {
  phase: TimerPhase;
  lastElapsedMs: number | null;
  trialsSeen: number;
  cacheHit: boolean;
  error: string | null;
}

export interface ActiveRun {
  runId: string;
  testKind: TestKind;
  startedAtMs: number;
  repetitions: number;
  timers: Record<string, TimerState>;
  trialsDone: number;
  trialsTotal: number;
  completed: boolean;
}

export interface ViewModel {
  step: 1 | 2 | 3;
  selectedTest: TestKind | null;
  selectedDbs: string[];
  repetitions: number;
  activeRun: ActiveRun | null;
  notice: string | null;
}

export function initialViewModel(): ViewModel {
  return {
    step: 1,
    selectedTest: null,
    selectedDbs: [],
    repetitions: 1,
    activeRun: null,
    notice: null,
  };
}

export function runActive(vm: ViewModel): boolean {
  return vm.activeRun !== null && !vm.activeRun.completed;
}

// The test selector stays locked while a run is in flight.
export function testSelectionLocked(vm: ViewModel): boolean {
  return runActive(vm);
}

export function selectTest(vm: ViewModel, kind: TestKind): ViewModel {
  if (testSelectionLocked(vm)) return vm;
  return { ...vm, selectedTest: kind, notice: null };
}

export function toggleDatabase(vm: ViewModel, databaseId: string): ViewModel {
  const selected = vm.selectedDbs.includes(databaseId)
    ? vm.selectedDbs.filter((db) => db !== databaseId)
    : [...vm.selectedDbs, databaseId];
  return { ...vm, selectedDbs: selected, notice: null };
}

export function setRepetitions(vm: ViewModel, repetitions: number): ViewModel {
  if (!Number.isInteger(repetitions) || repetitions < 1) return vm;
  return { ...vm, repetitions };
}

export function goToStep(vm: ViewModel, step: 1 | 2 | 3): ViewModel {
  if (step >= 2 && vm.selectedTest === null) return vm;
  if (step === 3 && vm.selectedDbs.length === 0) return vm;
  return { ...vm, step };
}

// Launch invariant: exactly one test, one or more databases, nothing running.
export function canLaunch(vm: ViewModel): boolean {
  return vm.selectedTest !== null && vm.selectedDbs.length > 0 && !runActive(vm);
}

export function runRequestBody(vm: ViewModel): {
  test_kind: TestKind;
  database_ids: string[];
  repetitions: number;
} {
  if (!canLaunch(vm) || vm.selectedTest === null) {
    throw new Error("selection does not satisfy the launch invariant");
  }
  return {
    test_kind: vm.selectedTest,
    database_ids: [...vm.selectedDbs],
    repetitions: vm.repetitions,
  };
}

export function beginRun(vm: ViewModel, runId: string, nowMs: number): ViewModel {
  if (!canLaunch(vm) || vm.selectedTest === null) return vm;
  const timers: Record<string, TimerState> = {};
  for (const db of vm.selectedDbs) {
    timers[db] = { phase: "ticking", lastElapsedMs: null, trialsSeen: 0, cacheHit: false, error: null };
  }
  return {
    ...vm,
    notice: null,
    activeRun: {
      runId,
      testKind: vm.selectedTest,
      startedAtMs: nowMs,
      repetitions: vm.repetitions,
      timers,
      trialsDone: 0,
      trialsTotal: vm.selectedDbs.length * vm.repetitions,
      completed: false,
    },
  };
}

export function showNotice(vm: ViewModel, notice: string): ViewModel {
  // Selection is preserved; only the notice appears.
  return { ...vm, notice };
}

export function applyTrialEvent(vm: ViewModel, trial: TrialRecord): ViewModel {
  const run = vm.activeRun;
  if (run === null || trial.run_id !== run.runId) return vm;
  const timer = run.timers[trial.database_id];
  if (timer === undefined) return vm;
  const updated: TimerState =
    trial.outcome === "error"
      ? { ...timer, phase: "error", trialsSeen: timer.trialsSeen + 1, error: trial.error ?? "error" }
      : {
          phase: "frozen",
          lastElapsedMs: trial.elapsed_ms,
          trialsSeen: timer.trialsSeen + 1,
          cacheHit: trial.cache_hit,
          error: null,
        };
  return {
    ...vm,
    activeRun: {
      ...run,
      trialsDone: run.trialsDone + 1,
      timers: { ...run.timers, [trial.database_id]: updated },
    },
  };
}

export function applyRunCompleted(vm: ViewModel, event: RunCompletedEvent): ViewModel {
  const run = vm.activeRun;
  if (run === null || event.run_id !== run.runId) return vm;
  return { ...vm, activeRun: { ...run, completed: true, trialsDone: event.trials_done } };
}

// Polling fallback: reconcile the run panel from GET /api/runs/{id}. Polled
// responses repeat trials the stream may already have delivered, so each
// timer is set from its database's newest polled trial, never replayed.
export function applyPolledStatus(vm: ViewModel, status: RunStatusResponse): ViewModel {
  const run = vm.activeRun;
  if (run === null || status.run_id !== run.runId) return vm;
  const timers = { ...run.timers };
  for (const db of Object.keys(timers)) {
    const dbTrials = status.trials.filter((t) => t.database_id === db);
    if (dbTrials.length === 0 || dbTrials.length <= timers[db].trialsSeen) continue;
    const last = dbTrials[dbTrials.length - 1];
    timers[db] =
      last.outcome === "error"
        ? {
            ...timers[db],
            phase: "error",
            trialsSeen: dbTrials.length,
            error: last.error ?? "error",
          }
        : {
            phase: "frozen",
            lastElapsedMs: last.elapsed_ms,
            trialsSeen: dbTrials.length,
            cacheHit: last.cache_hit,
            error: null,
          };
  }
  let next: ViewModel = {
    ...vm,
    activeRun: { ...run, timers, trialsDone: status.trials_done },
  };
  if (status.state === "completed" || status.state === "failed") {
    next = applyRunCompleted(next, {
      run_id: status.run_id,
      state: status.state,
      trials_done: status.trials_done,
      trials_total: status.trials_total,
    });
  }
  return next;
}

export function closeRunPanel(vm: ViewModel): ViewModel {
  if (vm.activeRun === null || !vm.activeRun.completed) return vm;
  return { ...vm, activeRun: null, step: 1 };
}

export function formatElapsed(ms: number): string {
  if (ms < 1000) return `${ms} ms`;
  return `${(ms / 1000).toFixed(2)} s`;
}
