import { describe, expect, it } from "vitest";

import {
  applyPolledStatus,
  applyRunCompleted,
  applyTrialEvent,
  beginRun,
  canLaunch,
  closeRunPanel,
  formatElapsed,
  goToStep,
  initialViewModel,
  runRequestBody,
  selectTest,
  setRepetitions,
  showNotice,
  testSelectionLocked,
  toggleDatabase,
  type ViewModel,
} from "../src/viewmodel";
import type { RunStatusResponse } from "../src/types";
import { trialRecord } from "./fakes";

function readyToLaunch(): ViewModel {
  let vm = initialViewModel();
  vm = selectTest(vm, "retrieve_small");
  vm = toggleDatabase(vm, "sim_firebase");
  vm = toggleDatabase(vm, "sim_dynamodb");
  return vm;
}

describe("selection invariants", () => {
  it("cannot launch without a test", () => {
    let vm = initialViewModel();
    vm = toggleDatabase(vm, "memory");
    expect(canLaunch(vm)).toBe(false);
  });

  it("cannot launch without databases", () => {
    let vm = initialViewModel();
    vm = selectTest(vm, "upload_small");
    expect(canLaunch(vm)).toBe(false);
  });

  it("launches with exactly one test and one or more databases", () => {
    expect(canLaunch(readyToLaunch())).toBe(true);
  });

  it("request body matches the API shape", () => {
    expect(runRequestBody(readyToLaunch())).toEqual({
      test_kind: "retrieve_small",
      database_ids: ["sim_firebase", "sim_dynamodb"],
      repetitions: 1,
    });
  });

  it("test selector locks while a run is active", () => {
    let vm = beginRun(readyToLaunch(), "run1", 1000);
    expect(testSelectionLocked(vm)).toBe(true);
    const before = vm.selectedTest;
    vm = selectTest(vm, "upload_large");
    expect(vm.selectedTest).toBe(before);
    vm = applyRunCompleted(vm, { run_id: "run1", state: "completed", trials_done: 2, trials_total: 2 });
    expect(testSelectionLocked(vm)).toBe(false);
  });

  it("cannot launch while a run is active", () => {
    const vm = beginRun(readyToLaunch(), "run1", 0);
    expect(canLaunch(vm)).toBe(false);
  });

  it("toggle removes an already selected database", () => {
    let vm = readyToLaunch();
    vm = toggleDatabase(vm, "sim_firebase");
    expect(vm.selectedDbs).toEqual(["sim_dynamodb"]);
  });

  it("rejects non-positive repetitions", () => {
    let vm = readyToLaunch();
    vm = setRepetitions(vm, 0);
    expect(vm.repetitions).toBe(1);
    vm = setRepetitions(vm, 30);
    expect(vm.repetitions).toBe(30);
  });

  it("stepper refuses to advance past an empty selection", () => {
    let vm = initialViewModel();
    expect(goToStep(vm, 2).step).toBe(1);
    vm = selectTest(vm, "upload_small");
    expect(goToStep(vm, 2).step).toBe(2);
    expect(goToStep(vm, 3).step).toBe(1); // still no databases
  });
});

describe("409 notice", () => {
  it("shows the notice and preserves the selection", () => {
    const vm = showNotice(readyToLaunch(), "a run is already active");
    expect(vm.notice).toBe("a run is already active");
    expect(vm.selectedTest).toBe("retrieve_small");
    expect(vm.selectedDbs).toEqual(["sim_firebase", "sim_dynamodb"]);
  });
});

describe("live timers", () => {
  it("start ticking for every selected database", () => {
    const vm = beginRun(readyToLaunch(), "run1", 0);
    expect(Object.keys(vm.activeRun!.timers)).toEqual(["sim_firebase", "sim_dynamodb"]);
    expect(vm.activeRun!.timers.sim_firebase.phase).toBe("ticking");
    expect(vm.activeRun!.trialsTotal).toBe(2);
  });

  it("freeze at the event's elapsed_ms while others keep ticking", () => {
    let vm = beginRun(readyToLaunch(), "run1", 0);
    vm = applyTrialEvent(vm, trialRecord({ database_id: "sim_firebase", elapsed_ms: 87 }));
    expect(vm.activeRun!.timers.sim_firebase).toMatchObject({ phase: "frozen", lastElapsedMs: 87 });
    expect(vm.activeRun!.timers.sim_dynamodb.phase).toBe("ticking");
    expect(vm.activeRun!.trialsDone).toBe(1);
  });

  it("ignores events for other runs", () => {
    let vm = beginRun(readyToLaunch(), "run1", 0);
    vm = applyTrialEvent(vm, trialRecord({ run_id: "other", database_id: "sim_firebase" }));
    expect(vm.activeRun!.timers.sim_firebase.phase).toBe("ticking");
  });

  it("marks error trials", () => {
    let vm = beginRun(readyToLaunch(), "run1", 0);
    vm = applyTrialEvent(
      vm,
      trialRecord({ database_id: "sim_firebase", outcome: "error", error: "StoreUnavailable" }),
    );
    expect(vm.activeRun!.timers.sim_firebase.phase).toBe("error");
    expect(vm.activeRun!.timers.sim_firebase.error).toBe("StoreUnavailable");
  });

  it("run_completed closes the run and close resets the stepper", () => {
    let vm = beginRun(readyToLaunch(), "run1", 0);
    vm = applyRunCompleted(vm, { run_id: "run1", state: "completed", trials_done: 2, trials_total: 2 });
    expect(vm.activeRun!.completed).toBe(true);
    vm = closeRunPanel(vm);
    expect(vm.activeRun).toBeNull();
    expect(vm.step).toBe(1);
  });
});

describe("polling fallback", () => {
  function polledStatus(overrides: Partial<RunStatusResponse> = {}): RunStatusResponse {
    return {
      run_id: "run1",
      state: "running",
      trials_done: 1,
      trials_total: 2,
      started_at: "2026-01-01T00:00:00+00:00",
      trials: [trialRecord({ database_id: "sim_firebase", elapsed_ms: 91 })],
      ...overrides,
    };
  }

  it("freezes timers from polled trials", () => {
    let vm = beginRun(readyToLaunch(), "run1", 0);
    vm = applyPolledStatus(vm, polledStatus());
    expect(vm.activeRun!.timers.sim_firebase).toMatchObject({ phase: "frozen", lastElapsedMs: 91 });
    expect(vm.activeRun!.timers.sim_dynamodb.phase).toBe("ticking");
  });

  it("does not replay trials the stream already delivered", () => {
    let vm = beginRun(readyToLaunch(), "run1", 0);
    vm = applyTrialEvent(vm, trialRecord({ database_id: "sim_firebase", elapsed_ms: 87 }));
    vm = applyPolledStatus(vm, polledStatus());
    expect(vm.activeRun!.timers.sim_firebase.trialsSeen).toBe(1);
  });

  it("reaches completed state via polling alone", () => {
    let vm = beginRun(readyToLaunch(), "run1", 0);
    vm = applyPolledStatus(
      vm,
      polledStatus({
        state: "completed",
        trials_done: 2,
        trials: [
          trialRecord({ database_id: "sim_firebase", elapsed_ms: 91 }),
          trialRecord({ trial_id: "run1:sim_dynamodb:0", database_id: "sim_dynamodb", elapsed_ms: 140 }),
        ],
      }),
    );
    expect(vm.activeRun!.completed).toBe(true);
    expect(vm.activeRun!.timers.sim_dynamodb).toMatchObject({ phase: "frozen", lastElapsedMs: 140 });
  });
});

describe("formatting", () => {
  it("renders milliseconds under a second", () => {
    expect(formatElapsed(87)).toBe("87 ms");
  });

  it("renders seconds above a second", () => {
    expect(formatElapsed(2800)).toBe("2.80 s");
  });
});
