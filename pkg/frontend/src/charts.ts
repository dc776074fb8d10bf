// Chart data building and dependency-free DOM bar rendering. Values come
// straight from API payloads; the only arithmetic here is pixel scaling.

import type { AggregateCell, ExtremesResponse, TestKind } from "./types";
import { TEST_KINDS, TEST_KIND_LABELS } from "./types";

export interface MainChartBar {
  database: string;
  kind: TestKind;
  meanMs: number;
}

export interface MainChartData {
  databases: string[];
  groups: { kind: TestKind; bars: MainChartBar[] }[];
  maxValue: number;
}

// Grouped bars: six test groups, one bar per database that has data.
export function buildMainChart(cells: AggregateCell[]): MainChartData {
  const databases = [...new Set(cells.map((c) => c.database_id))].sort();
  const byKey = new Map(cells.map((c) => [`${c.database_id}/${c.test_kind}`, c]));
  const groups = TEST_KINDS.map((kind) => ({
    kind,
    bars: databases.flatMap((database) => {
      const cell = byKey.get(`${database}/${kind}`);
      return cell === undefined
        ? []
        : [{ database, kind, meanMs: cell.mean_ms }];
    }),
  }));
  const maxValue = Math.max(0, ...cells.map((c) => c.mean_ms));
  return { databases, groups, maxValue };
}

export interface ExtremesChartRow {
  kind: TestKind;
  bestMs: number;
  worstMs: number;
}

export function buildExtremesChart(extremes: ExtremesResponse): ExtremesChartRow[] {
  return TEST_KINDS.flatMap((kind) => {
    const entry = extremes.extremes[kind];
    return entry === undefined
      ? []
      : [{ kind, bestMs: entry.best_ms, worstMs: entry.worst_ms }];
  });
}

const DB_PALETTE = ["#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1", "#76b7b2"];

export function databaseColor(databases: string[], database: string): string {
  const index = Math.max(0, databases.indexOf(database));
  return DB_PALETTE[index % DB_PALETTE.length];
}

function bumpRenderCount(element: HTMLElement): void {
  element.dataset.renders = String(Number(element.dataset.renders ?? "0") + 1);
}

export function renderMainChart(container: HTMLElement, data: MainChartData): void {
  container.innerHTML = "";
  bumpRenderCount(container);
  if (data.groups.every((g) => g.bars.length === 0)) {
    const placeholder = document.createElement("p");
    placeholder.className = "placeholder";
    placeholder.textContent = "no results yet";
    container.appendChild(placeholder);
    return;
  }
  const chart = document.createElement("div");
  chart.className = "bar-chart";
  for (const group of data.groups) {
    const groupEl = document.createElement("div");
    groupEl.className = "bar-group";
    const bars = document.createElement("div");
    bars.className = "bars";
    for (const bar of group.bars) {
      const barEl = document.createElement("div");
      barEl.className = "bar";
      barEl.dataset.db = bar.database;
      barEl.dataset.kind = bar.kind;
      barEl.dataset.value = String(bar.meanMs);
      const height = data.maxValue > 0 ? (bar.meanMs / data.maxValue) * 100 : 0;
      barEl.style.height = `${Math.max(height, 0.5)}%`;
      barEl.style.background = databaseColor(data.databases, bar.database);
      barEl.title = `${bar.database} ${TEST_KIND_LABELS[bar.kind]}: ${bar.meanMs} ms`;
      bars.appendChild(barEl);
    }
    const label = document.createElement("span");
    label.className = "group-label";
    label.textContent = TEST_KIND_LABELS[group.kind];
    groupEl.appendChild(bars);
    groupEl.appendChild(label);
    chart.appendChild(groupEl);
  }
  container.appendChild(chart);

  const legend = document.createElement("div");
  legend.className = "chart-legend";
  for (const database of data.databases) {
    const item = document.createElement("span");
    item.className = "legend-item";
    const swatch = document.createElement("i");
    swatch.style.background = databaseColor(data.databases, database);
    item.appendChild(swatch);
    item.appendChild(document.createTextNode(database));
    legend.appendChild(item);
  }
  container.appendChild(legend);
}

export function renderExtremesChart(
  container: HTMLElement,
  database: string,
  rows: ExtremesChartRow[],
): void {
  container.innerHTML = "";
  bumpRenderCount(container);
  const title = document.createElement("h3");
  title.textContent = database;
  container.appendChild(title);
  if (rows.length === 0) {
    const placeholder = document.createElement("p");
    placeholder.className = "placeholder";
    placeholder.textContent = "no results yet";
    container.appendChild(placeholder);
    return;
  }
  const maxValue = Math.max(...rows.map((r) => r.worstMs), 1);
  const table = document.createElement("div");
  table.className = "extremes-rows";
  for (const row of rows) {
    const rowEl = document.createElement("div");
    rowEl.className = "extremes-row";
    rowEl.dataset.kind = row.kind;

    const label = document.createElement("span");
    label.className = "row-label";
    label.textContent = TEST_KIND_LABELS[row.kind];
    rowEl.appendChild(label);

    const track = document.createElement("div");
    track.className = "row-track";
    for (const [cls, value] of [
      ["worst", row.worstMs],
      ["best", row.bestMs],
    ] as const) {
      const bar = document.createElement("div");
      bar.className = `hbar ${cls}`;
      bar.dataset.value = String(value);
      bar.style.width = `${(value / maxValue) * 100}%`;
      bar.title = `${cls}: ${value} ms`;
      track.appendChild(bar);
    }
    rowEl.appendChild(track);
    table.appendChild(rowEl);
  }
  container.appendChild(table);
}
