import { numericColumn, parseCsv, Table } from "./csv.js";
import {
  DEFAULT_MARGIN,
  drawAxes,
  extent,
  linearScale,
  SvgCanvas,
} from "./svg.js";

export interface FigureResult {
  svg: string;
  /** plotted series per panel, for sanity checks in tests */
  seriesCounts: number[];
}

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];
const LEGEND_TEXT = "font:12px sans-serif;fill:#111";
const TITLE_TEXT = "font:bold 14px sans-serif;fill:#111";

const GAIN_COLUMNS = ["bin_lo", "bin_mid", "bin_hi", "density_emp", "density_analytical"];
const PD_COLUMNS = ["N", "M", "gamma", "pd_analytical", "pd_empirical", "ci_lo", "ci_hi", "status"];
const PLAN_COLUMNS = ["c", "m_inf", "g0", "m_pd"];

/** Gain histogram with its analytical density overlay (one CSV in). */
export function renderGainPdf(csvText: string, title = "Equivalent gain density"): FigureResult {
  const table = parseCsv(csvText, GAIN_COLUMNS);
  const lo = numericColumn(table, "bin_lo");
  const hi = numericColumn(table, "bin_hi");
  const mid = numericColumn(table, "bin_mid");
  const emp = numericColumn(table, "density_emp");
  const ana = numericColumn(table, "density_analytical");

  const W = 560, H = 400, m = DEFAULT_MARGIN;
  const canvas = new SvgCanvas(W, H);
  const xDom = [lo[0], hi[hi.length - 1]] as [number, number];
  const yMax = Math.max(...emp, ...ana.filter(Number.isFinite)) * 1.08;
  const x = linearScale(xDom[0], xDom[1], m.left, W - m.right);
  const y = linearScale(0, yMax, H - m.bottom, m.top);

  for (let i = 0; i < emp.length; i++) {
    canvas.rect(x(lo[i]), y(emp[i]), x(hi[i]) - x(lo[i]), y(0) - y(emp[i]),
      "fill:#9ecae1;stroke:#6baed6;stroke-width:0.5");
  }
  let series = 1;
  if (ana.some(Number.isFinite)) {
    canvas.polyline(mid.map((v, i) => [x(v), y(ana[i])]), `stroke:${COLORS[1]};stroke-width:2`);
    series += 1;
  }
  drawAxes(canvas, m, x, y, xDom, [0, yMax], "gain", "density");
  canvas.text(W / 2, 18, title, TITLE_TEXT);
  canvas.text(W - m.right - 10, m.top + 14, "empirical", LEGEND_TEXT, "end");
  if (series === 2) canvas.text(W - m.right - 10, m.top + 30, "analytical", LEGEND_TEXT, "end");
  return { svg: canvas.render(), seriesCounts: [series] };
}

export interface PdPanel {
  label: string;
  csvText: string;
}

/**
 * Detection probability vs element count: analytical line plus simulated
 * markers with confidence bars, one panel per input CSV.
 */
export function renderPdCurve(panels: PdPanel[]): FigureResult {
  if (panels.length === 0) throw new Error("renderPdCurve needs at least one panel");
  const PW = 420, PH = 360, m = DEFAULT_MARGIN;
  const canvas = new SvgCanvas(PW * panels.length, PH);
  const counts: number[] = [];
  panels.forEach((panel, pi) => {
    const table = parseCsv(panel.csvText, PD_COLUMNS);
    const ok = table.rows
      .map((_, i) => i)
      .filter((i) => table.rows[i]["status"] === "ok");
    if (ok.length === 0) throw new Error(`panel '${panel.label}': no usable rows (all failed)`);
    const M = numericColumn(table, "M");
    const ana = numericColumn(table, "pd_analytical");
    const emp = numericColumn(table, "pd_empirical");
    const ciLo = numericColumn(table, "ci_lo");
    const ciHi = numericColumn(table, "ci_hi");

    const left = pi * PW;
    const xDom = extent(ok.map((i) => M[i])) as [number, number];
    const x = linearScale(xDom[0], xDom[1], left + m.left, left + PW - m.right);
    const y = linearScale(0, 1, PH - m.bottom, m.top);

    canvas.polyline(ok.map((i) => [x(M[i]), y(ana[i])]), `stroke:${COLORS[0]};stroke-width:2`);
    for (const i of ok) {
      canvas.line(x(M[i]), y(ciLo[i]), x(M[i]), y(ciHi[i]), `stroke:${COLORS[1]};stroke-width:1.2`);
      canvas.circle(x(M[i]), y(emp[i]), 3, `fill:${COLORS[1]}`);
    }
    // shift the axes helper into this panel's frame
    drawAxesPanel(canvas, left, PW, PH, m, x, y, xDom);
    canvas.text(left + PW / 2, 18, panel.label, TITLE_TEXT);
    canvas.text(left + PW - m.right - 10, m.top + 14, "analytical", LEGEND_TEXT, "end");
    canvas.text(left + PW - m.right - 10, m.top + 30, "simulated (95% CI)", LEGEND_TEXT, "end");
    counts.push(2);
  });
  return { svg: canvas.render(), seriesCounts: counts };
}

function drawAxesPanel(
  canvas: SvgCanvas,
  left: number,
  PW: number,
  PH: number,
  m: { top: number; right: number; bottom: number; left: number },
  x: (v: number) => number,
  y: (v: number) => number,
  xDom: [number, number]
): void {
  // reuse the shared axis renderer by faking a canvas-width-local margin
  const shim = {
    top: m.top,
    right: canvas.width - (left + PW) + m.right,
    bottom: m.bottom,
    left: left + m.left,
  };
  drawAxes(canvas, shim, x, y, xDom, [0, 1], "reflecting elements M", "detection probability");
}

/** Planner outputs vs sample ratio: element-count curves from one CSV. */
export function renderPlanCurves(csvText: string, title = "Element planning"): FigureResult {
  const table = parseCsv(csvText, PLAN_COLUMNS);
  const c = numericColumn(table, "c");
  const seriesNames = ["m_inf", "m_pd", ...(table.columns.includes("m_target") ? ["m_target"] : [])];
  const seriesVals = seriesNames.map((name) => numericColumn(table, name));

  const W = 560, H = 400, m = DEFAULT_MARGIN;
  const canvas = new SvgCanvas(W, H);
  const xDom = extent(c) as [number, number];
  const yDom: [number, number] = [0, Math.max(...seriesVals.flat()) * 1.08];
  const x = linearScale(xDom[0], xDom[1], m.left, W - m.right);
  const y = linearScale(yDom[0], yDom[1], H - m.bottom, m.top);

  seriesVals.forEach((vals, si) => {
    canvas.polyline(c.map((v, i) => [x(v), y(vals[i])]), `stroke:${COLORS[si]};stroke-width:2`);
    for (let i = 0; i < c.length; i++) canvas.circle(x(c[i]), y(vals[i]), 3, `fill:${COLORS[si]}`);
    canvas.text(W - m.right - 10, m.top + 14 + 16 * si, seriesNames[si], LEGEND_TEXT, "end");
  });
  drawAxes(canvas, m, x, y, xDom, yDom, "sample ratio c", "reflecting elements");
  canvas.text(W / 2, 18, title, TITLE_TEXT);
  return { svg: canvas.render(), seriesCounts: [seriesNames.length] };
}

export { Table };
