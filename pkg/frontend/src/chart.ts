import type { QueryResponse } from "./types.js";

export interface ChartSeries {
  key: string; // "query" or "result-<id>"
  name: string;
  color: string;
  width: number;
  values: number[];
  hidden: boolean;
}

export interface ChartModel {
  xMax: number; // last feature index, 3R-1
  yMax: number; // largest visible count (at least 1 so a flat zero line renders)
  boundaries: number[]; // channel block edges at R and 2R
  series: ChartSeries[];
}

const RESULT_COLORS = ["#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b", "#17becf"];
export const QUERY_COLOR = "#d32f2f";

/** Chart-ready view of a query response: the query curve plus one series per
 * result, over the shared feature-index axis 0..3R-1. */
export function buildChartModel(response: QueryResponse, hidden: ReadonlySet<string>): ChartModel {
  const values = response.query_curves.values;
  const r = values.length / 3;
  const series: ChartSeries[] = [
    {
      key: "query",
      name: "query",
      color: QUERY_COLOR,
      width: 2.5,
      values,
      hidden: hidden.has("query"),
    },
  ];
  response.results.forEach((res, i) => {
    series.push({
      key: `result-${res.id}`,
      name: `#${res.id} ${res.label}`,
      color: RESULT_COLORS[i % RESULT_COLORS.length],
      width: 1.5,
      values: response.result_curves[i] ?? [],
      hidden: hidden.has(`result-${res.id}`),
    });
  });
  let yMax = 1;
  for (const s of series) {
    if (s.hidden) continue;
    for (const v of s.values) if (v > yMax) yMax = v;
  }
  return { xMax: values.length - 1, yMax, boundaries: [r, 2 * r], series };
}

export interface ChartGeometry {
  width: number;
  height: number;
  padLeft: number;
  padRight: number;
  padTop: number;
  padBottom: number;
}

export const DEFAULT_GEOMETRY: ChartGeometry = {
  width: 860,
  height: 300,
  padLeft: 46,
  padRight: 12,
  padTop: 10,
  padBottom: 26,
};

export function xToPixel(x: number, model: ChartModel, geo: ChartGeometry): number {
  const span = geo.width - geo.padLeft - geo.padRight;
  return geo.padLeft + (model.xMax === 0 ? 0 : (x / model.xMax) * span);
}

export function yToPixel(y: number, model: ChartModel, geo: ChartGeometry): number {
  const span = geo.height - geo.padTop - geo.padBottom;
  return geo.padTop + span - (y / model.yMax) * span;
}

export function polylinePoints(values: number[], model: ChartModel, geo: ChartGeometry): string {
  return values
    .map((v, i) => `${xToPixel(i, model, geo).toFixed(1)},${yToPixel(v, model, geo).toFixed(1)}`)
    .join(" ");
}

const SVG_NS = "http://www.w3.org/2000/svg";

function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string>,
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) el.setAttribute(k, v);
  return el;
}

/** Render the overlay chart: one polyline per visible series, dashed channel
 * boundaries, and min/max ticks on both axes. */
export function renderChart(
  model: ChartModel,
  geo: ChartGeometry = DEFAULT_GEOMETRY,
): SVGSVGElement {
  const svg = svgEl("svg", {
    viewBox: `0 0 ${geo.width} ${geo.height}`,
    class: "betti-chart",
    role: "img",
  });
  svg.dataset.xMax = String(model.xMax);
  svg.dataset.boundaries = model.boundaries.join(",");

  const bottom = yToPixel(0, model, geo);
  const top = yToPixel(model.yMax, model, geo);
  svg.appendChild(
    svgEl("line", {
      x1: String(geo.padLeft), y1: String(bottom),
      x2: String(xToPixel(model.xMax, model, geo)), y2: String(bottom),
      class: "axis",
    }),
  );

  for (const b of model.boundaries) {
    const x = xToPixel(b, model, geo);
    svg.appendChild(
      svgEl("line", {
        x1: String(x), y1: String(top), x2: String(x), y2: String(bottom),
        class: "channel-boundary",
        "data-boundary": String(b),
      }),
    );
  }

  for (const [value, anchor] of [
    [0, "start"],
    [model.boundaries[0], "middle"],
    [model.boundaries[1], "middle"],
    [model.xMax, "end"],
  ] as [number, string][]) {
    const label = svgEl("text", {
      x: String(xToPixel(value, model, geo)),
      y: String(geo.height - 6),
      "text-anchor": anchor,
      class: "tick",
    });
    label.textContent = String(value);
    svg.appendChild(label);
  }
  const yLabel = svgEl("text", {
    x: "4", y: String(top + 10), class: "tick",
  });
  yLabel.textContent = String(model.yMax);
  svg.appendChild(yLabel);

  for (const s of model.series) {
    if (s.hidden || s.values.length === 0) continue;
    svg.appendChild(
      svgEl("polyline", {
        points: polylinePoints(s.values, model, geo),
        fill: "none",
        stroke: s.color,
        "stroke-width": String(s.width),
        "data-series": s.key,
      }),
    );
  }
  return svg;
}
