// Dashboard wiring: stepper flow, run panel with live timers, charts, and
// heatmap. All numbers displayed come from API payloads; rendering is the
// only computation here.

import { ApiError, getAggregates, getExtremes, getHeatmap, getRun, listDatabases, startRun } from "./api";
import { buildExtremesChart, buildMainChart, renderExtremesChart, renderMainChart } from "./charts";
import { renderHeatmap } from "./heatmap";
import { LiveStream, startPolling, type EventSourceFactory } from "./stream";
import type { DatabaseInfo, RunStatusResponse, TestKind } from "./types";
import { TEST_KINDS, TEST_KIND_LABELS } from "./types";
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
  runActive,
  runRequestBody,
  selectTest,
  setRepetitions,
  showNotice,
  testSelectionLocked,
  toggleDatabase,
  type ViewModel,
} from "./viewmodel";

export interface BootstrapOptions {
  eventSourceFactory?: EventSourceFactory;
  now?: () => number;
  tickMs?: number;
  pollMs?: number;
}

export interface App {
  root: HTMLElement;
  getViewModel(): ViewModel;
  refreshCharts(): Promise<void>;
  stop(): void;
}

export async function bootstrap(root: HTMLElement, options: BootstrapOptions = {}): Promise<App> {
  const now = options.now ?? (() => Date.now());
  const tickMs = options.tickMs ?? 250;
  const esFactory: EventSourceFactory =
    options.eventSourceFactory ??
    ((url) => new EventSource(url) as unknown as ReturnType<EventSourceFactory>);

  let vm = initialViewModel();
  let databases: DatabaseInfo[] = [];
  let stopPolling: (() => void) | null = null;

  root.innerHTML = `
    <header class="top"><h1>docbench</h1>
      <p class="tagline">real-time document database benchmarks</p></header>
    <section class="panel stepper" data-panel="stepper"></section>
    <section class="panel run-panel" data-panel="run" hidden></section>
    <section class="panel">
      <h2>Average time per test</h2>
      <div class="main-chart" data-panel="main-chart"></div>
    </section>
    <section class="panel">
      <h2>Best and worst case per database</h2>
      <div class="extremes-grid" data-panel="extremes"></div>
    </section>
    <section class="panel">
      <h2>Where tests run from</h2>
      <div class="heatmap" data-panel="heatmap"></div>
    </section>
  `;

  const stepperEl = root.querySelector<HTMLElement>('[data-panel="stepper"]')!;
  const runPanelEl = root.querySelector<HTMLElement>('[data-panel="run"]')!;
  const mainChartEl = root.querySelector<HTMLElement>('[data-panel="main-chart"]')!;
  const extremesEl = root.querySelector<HTMLElement>('[data-panel="extremes"]')!;
  const heatmapEl = root.querySelector<HTMLElement>('[data-panel="heatmap"]')!;

  function update(next: ViewModel): void {
    vm = next;
    renderStepper();
    renderRunPanel();
  }

  function renderStepper(): void {
    stepperEl.innerHTML = "";
    const steps = document.createElement("ol");
    steps.className = "step-heads";
    for (const [index, label] of ["Pick a test", "Pick databases", "Run"].entries()) {
      const li = document.createElement("li");
      li.textContent = label;
      li.dataset.step = String(index + 1);
      if (vm.step === index + 1) li.className = "current";
      steps.appendChild(li);
    }
    stepperEl.appendChild(steps);

    if (vm.notice !== null) {
      const notice = document.createElement("p");
      notice.className = "notice";
      notice.setAttribute("role", "alert");
      notice.textContent = vm.notice;
      stepperEl.appendChild(notice);
    }

    const body = document.createElement("div");
    body.className = "step-body";
    if (vm.step === 1) {
      const locked = testSelectionLocked(vm);
      for (const kind of TEST_KINDS) {
        const button = document.createElement("button");
        button.className = "test-option";
        button.dataset.kind = kind;
        button.textContent = TEST_KIND_LABELS[kind];
        button.disabled = locked;
        if (vm.selectedTest === kind) button.classList.add("selected");
        button.addEventListener("click", () => update(goToStep(selectTest(vm, kind), 2)));
        body.appendChild(button);
      }
    } else if (vm.step === 2) {
      for (const database of databases) {
        const label = document.createElement("label");
        label.className = "db-option";
        const box = document.createElement("input");
        box.type = "checkbox";
        box.dataset.db = database.id;
        box.checked = vm.selectedDbs.includes(database.id);
        box.addEventListener("change", () => update(toggleDatabase(vm, database.id)));
        label.appendChild(box);
        label.appendChild(document.createTextNode(database.id));
        body.appendChild(label);
      }
      body.appendChild(navButton("Back", () => update(goToStep(vm, 1))));
      const next = navButton("Next", () => update(goToStep(vm, 3)));
      next.disabled = vm.selectedDbs.length === 0;
      body.appendChild(next);
    } else {
      const summary = document.createElement("p");
      summary.className = "confirm-summary";
      summary.textContent = `${vm.selectedTest === null ? "?" : TEST_KIND_LABELS[vm.selectedTest]} on ${vm.selectedDbs.join(", ")}`;
      body.appendChild(summary);

      const repsLabel = document.createElement("label");
      repsLabel.className = "reps";
      repsLabel.textContent = "repetitions ";
      const reps = document.createElement("input");
      reps.type = "number";
      reps.min = "1";
      reps.value = String(vm.repetitions);
      reps.addEventListener("change", () => update(setRepetitions(vm, Number(reps.value))));
      repsLabel.appendChild(reps);
      body.appendChild(repsLabel);

      body.appendChild(navButton("Back", () => update(goToStep(vm, 2))));
      const run = navButton("Run", () => void launch());
      run.className = "run-button";
      run.disabled = !canLaunch(vm);
      body.appendChild(run);
    }
    stepperEl.appendChild(body);
  }

  function navButton(label: string, onClick: () => void): HTMLButtonElement {
    const button = document.createElement("button");
    button.textContent = label;
    button.addEventListener("click", onClick);
    return button;
  }

  function renderRunPanel(): void {
    const run = vm.activeRun;
    if (run === null) {
      runPanelEl.hidden = true;
      runPanelEl.innerHTML = "";
      return;
    }
    runPanelEl.hidden = false;
    runPanelEl.innerHTML = "";
    runPanelEl.dataset.runId = run.runId;

    const heading = document.createElement("h2");
    heading.textContent = run.completed
      ? `Run finished: ${TEST_KIND_LABELS[run.testKind]}`
      : `Running ${TEST_KIND_LABELS[run.testKind]}…`;
    runPanelEl.appendChild(heading);

    const timers = document.createElement("div");
    timers.className = "timers";
    for (const [database, timer] of Object.entries(run.timers)) {
      const el = document.createElement("div");
      el.className = "timer";
      el.dataset.db = database;
      el.dataset.state = timer.phase;

      const name = document.createElement("span");
      name.className = "db-name";
      name.textContent = database;
      el.appendChild(name);

      const value = document.createElement("span");
      value.className = "timer-value";
      if (timer.phase === "ticking") {
        value.textContent = formatElapsed(Math.max(0, now() - run.startedAtMs));
      } else if (timer.phase === "frozen") {
        value.textContent = formatElapsed(timer.lastElapsedMs ?? 0);
      } else {
        value.textContent = timer.error ?? "error";
      }
      el.appendChild(value);

      if (timer.cacheHit) {
        const badge = document.createElement("span");
        badge.className = "badge";
        badge.textContent = "cache hit";
        el.appendChild(badge);
      }
      const reps = document.createElement("span");
      reps.className = "rep-count";
      reps.textContent = `${timer.trialsSeen}/${run.repetitions}`;
      el.appendChild(reps);
      timers.appendChild(el);
    }
    runPanelEl.appendChild(timers);

    const progress = document.createElement("p");
    progress.className = "progress";
    progress.textContent = `${run.trialsDone} of ${run.trialsTotal} trials`;
    runPanelEl.appendChild(progress);

    if (run.completed) {
      const close = navButton("Close", () => update(closeRunPanel(vm)));
      close.className = "close-run";
      runPanelEl.appendChild(close);
    }
  }

  async function refreshCharts(): Promise<void> {
    const cells = await getAggregates();
    renderMainChart(mainChartEl, buildMainChart(cells));

    const withData = [...new Set(cells.map((c) => c.database_id))].sort();
    extremesEl.innerHTML = "";
    for (const database of withData) {
      const card = document.createElement("div");
      card.className = "extremes-card";
      card.dataset.db = database;
      extremesEl.appendChild(card);
      renderExtremesChart(card, database, buildExtremesChart(await getExtremes(database)));
    }
    if (withData.length === 0) {
      const placeholder = document.createElement("p");
      placeholder.className = "placeholder";
      placeholder.textContent = "no results yet";
      extremesEl.appendChild(placeholder);
    }

    renderHeatmap(heatmapEl, await getHeatmap());
  }

  async function launch(): Promise<void> {
    if (!canLaunch(vm)) return;
    const body = runRequestBody(vm);
    try {
      const runId = await startRun(body.test_kind, body.database_ids, body.repetitions);
      update(beginRun(vm, runId, now()));
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        update(showNotice(vm, "a run is already active"));
      } else {
        update(showNotice(vm, error instanceof Error ? error.message : "run failed to start"));
      }
    }
  }

  function beginPollingFallback(): void {
    const run = vm.activeRun;
    if (run === null || run.completed || stopPolling !== null) return;
    stopPolling = startPolling(run.runId, {
      intervalMs: options.pollMs ?? 1000,
      fetchStatus: (runId) => getRun(runId),
      onStatus: (status) => {
        update(applyPolledStatus(vm, status as RunStatusResponse));
        const current = vm.activeRun;
        const finished = current === null || current.completed;
        if (finished) {
          stopPolling = null;
          void refreshCharts();
        }
        return finished;
      },
    });
  }

  const stream = new LiveStream(
    {
      onTrial(trial) {
        update(applyTrialEvent(vm, trial));
        void refreshCharts();
      },
      onRunCompleted(event) {
        update(applyRunCompleted(vm, event));
        void refreshCharts();
      },
      onDrop() {
        beginPollingFallback();
      },
    },
    esFactory,
  );
  stream.connect();

  const ticker = setInterval(() => {
    if (runActive(vm)) renderRunPanel();
  }, tickMs);

  databases = await listDatabases();
  renderStepper();
  renderRunPanel();
  await refreshCharts();

  return {
    root,
    getViewModel: () => vm,
    refreshCharts,
    stop() {
      clearInterval(ticker);
      stream.close();
      stopPolling?.();
      stopPolling = null;
    },
  };
}

export type { ViewModel } from "./viewmodel";
export type SelectedTest = TestKind | null;
