// Latency heatmap: one weighted marker per API heat point on an
// equirectangular world panel. Colors map bucket averages onto a relative
// cool-to-warm scale whose endpoints are the current min/max averages.

import type { HeatPoint } from "./types";

export interface ColorScale {
  minMs: number;
  maxMs: number;
  colorFor(avgMs: number): string;
}

const COOL_HUE = 210; // blue
const WARM_HUE = 0; // red

export function buildColorScale(points: HeatPoint[]): ColorScale {
  const averages = points.map((p) => p.avg_ms);
  const minMs = averages.length > 0 ? Math.min(...averages) : 0;
  const maxMs = averages.length > 0 ? Math.max(...averages) : 0;
  return {
    minMs,
    maxMs,
    colorFor(avgMs: number): string {
      const span = maxMs - minMs;
      const t = span > 0 ? (avgMs - minMs) / span : 0.5;
      const hue = COOL_HUE + (WARM_HUE - COOL_HUE) * t;
      return `hsl(${Math.round(hue)}, 85%, 50%)`;
    },
  };
}

export function project(lat: number, lon: number): { xPct: number; yPct: number } {
  return {
    xPct: ((lon + 180) / 360) * 100,
    yPct: ((90 - lat) / 180) * 100,
  };
}

export function renderHeatmap(container: HTMLElement, points: HeatPoint[]): void {
  container.innerHTML = "";
  container.dataset.pointCount = String(points.length);
  const scale = buildColorScale(points);

  const map = document.createElement("div");
  map.className = "heat-map";
  if (points.length > 0) {
    for (const point of points) {
      const marker = document.createElement("div");
      marker.className = "heat-marker";
      marker.dataset.lat = String(point.lat);
      marker.dataset.lon = String(point.lon);
      marker.dataset.avg = String(point.avg_ms);
      const { xPct, yPct } = project(point.lat, point.lon);
      marker.style.left = `${xPct}%`;
      marker.style.top = `${yPct}%`;
      marker.style.background = scale.colorFor(point.avg_ms);
      const size = 8 + Math.min(point.count, 20);
      marker.style.width = `${size}px`;
      marker.style.height = `${size}px`;
      marker.title = `(${point.lat}, ${point.lon}) avg ${point.avg_ms} ms over ${point.count}`;
      map.appendChild(marker);
    }
  }
  container.appendChild(map);

  if (points.length > 0) {
    const legend = document.createElement("div");
    legend.className = "heat-legend";
    const low = document.createElement("span");
    low.className = "legend-low";
    low.textContent = `${scale.minMs} ms`;
    low.style.color = scale.colorFor(scale.minMs);
    const high = document.createElement("span");
    high.className = "legend-high";
    high.textContent = `${scale.maxMs} ms`;
    high.style.color = scale.colorFor(scale.maxMs);
    const gradient = document.createElement("i");
    gradient.className = "legend-gradient";
    legend.appendChild(low);
    legend.appendChild(gradient);
    legend.appendChild(high);
    container.appendChild(legend);
  }
}
