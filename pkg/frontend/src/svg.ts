/** Small SVG plotting helpers: no DOM, output is a standalone SVG string. */

export interface Margin {
  top: number;
  right: number;
  bottom: number;
  left: number;
}

export const DEFAULT_MARGIN: Margin = { top: 30, right: 20, bottom: 45, left: 60 };

export type Scale = (v: number) => number;

export function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const span = d1 - d0;
  if (!(Math.abs(span) > 0)) {
    // degenerate domain: park everything mid-range
    return () => (r0 + r1) / 2;
  }
  return (v: number) => r0 + ((v - d0) / span) * (r1 - r0);
}

export function extent(values: number[]): [number, number] {
  const finite = values.filter((v) => Number.isFinite(v));
  if (finite.length === 0) throw new Error("no finite values to scale");
  return [Math.min(...finite), Math.max(...finite)];
}

export function ticks(lo: number, hi: number, count = 6): number[] {
  const span = hi - lo;
  if (!(span > 0)) return [lo];
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const err = (span / count) / step;
  const mult = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const s = step * mult;
  const start = Math.ceil(lo / s) * s;
  const out: number[] = [];
  for (let v = start; v <= hi + 1e-12 * span; v += s) out.push(+v.toPrecision(12));
  return out;
}

export function fmtTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(1);
  return +v.toPrecision(6) + "";
}

const esc = (s: string) =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

/** Accumulates SVG elements for one drawing surface. */
export class SvgCanvas {
  private parts: string[] = [];
  constructor(readonly width: number, readonly height: number) {}

  line(x1: number, y1: number, x2: number, y2: number, style: string): void {
    this.parts.push(
      `<line x1="${x1.toFixed(2)}" y1="${y1.toFixed(2)}" x2="${x2.toFixed(2)}" y2="${y2.toFixed(2)}" style="${style}"/>`
    );
  }

  polyline(pts: [number, number][], style: string): void {
    const path = pts
      .filter(([x, y]) => Number.isFinite(x) && Number.isFinite(y))
      .map(([x, y]) => `${x.toFixed(2)},${y.toFixed(2)}`)
      .join(" ");
    this.parts.push(`<polyline points="${path}" style="${style}" fill="none"/>`);
  }

  rect(x: number, y: number, w: number, h: number, style: string): void {
    this.parts.push(
      `<rect x="${x.toFixed(2)}" y="${y.toFixed(2)}" width="${w.toFixed(2)}" height="${h.toFixed(2)}" style="${style}"/>`
    );
  }

  circle(cx: number, cy: number, r: number, style: string): void {
    this.parts.push(
      `<circle cx="${cx.toFixed(2)}" cy="${cy.toFixed(2)}" r="${r}" style="${style}"/>`
    );
  }

  text(x: number, y: number, content: string, style: string, anchor = "middle"): void {
    this.parts.push(
      `<text x="${x.toFixed(2)}" y="${y.toFixed(2)}" text-anchor="${anchor}" style="${style}">${esc(content)}</text>`
    );
  }

  raw(fragment: string): void {
    this.parts.push(fragment);
  }

  render(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}" ` +
      `viewBox="0 0 ${this.width} ${this.height}">\n<rect width="100%" height="100%" fill="white"/>\n` +
      this.parts.join("\n") +
      "\n</svg>\n"
    );
  }
}

const AXIS_STYLE = "stroke:#333;stroke-width:1";
const TICK_TEXT = "font:11px sans-serif;fill:#333";
const LABEL_TEXT = "font:13px sans-serif;fill:#111";

/** Draw x/y axes with ticks inside the margin box. */
export function drawAxes(
  canvas: SvgCanvas,
  margin: Margin,
  xScale: Scale,
  yScale: Scale,
  xDomain: [number, number],
  yDomain: [number, number],
  xLabel: string,
  yLabel: string
): void {
  const x0 = margin.left;
  const x1 = canvas.width - margin.right;
  const y0 = canvas.height - margin.bottom;
  const y1 = margin.top;
  canvas.line(x0, y0, x1, y0, AXIS_STYLE);
  canvas.line(x0, y0, x0, y1, AXIS_STYLE);
  for (const t of ticks(xDomain[0], xDomain[1])) {
    const px = xScale(t);
    canvas.line(px, y0, px, y0 + 5, AXIS_STYLE);
    canvas.text(px, y0 + 18, fmtTick(t), TICK_TEXT);
  }
  for (const t of ticks(yDomain[0], yDomain[1])) {
    const py = yScale(t);
    canvas.line(x0 - 5, py, x0, py, AXIS_STYLE);
    canvas.text(x0 - 8, py + 4, fmtTick(t), TICK_TEXT, "end");
  }
  canvas.text((x0 + x1) / 2, canvas.height - 8, xLabel, LABEL_TEXT);
  canvas.raw(
    `<text x="14" y="${(y0 + y1) / 2}" text-anchor="middle" style="${LABEL_TEXT}" ` +
      `transform="rotate(-90 14 ${(y0 + y1) / 2})">${xmlEscape(yLabel)}</text>`
  );
}

function xmlEscape(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}
