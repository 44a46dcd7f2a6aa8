import { readFileSync, writeFileSync } from "node:fs";
import { basename } from "node:path";
import { renderGainPdf, renderPdCurve, renderPlanCurves } from "./figures.js";

const USAGE = `usage:
  cli.js fig2 --input gain_pdf.csv --out fig2.svg
  cli.js fig5 --input pd_n64.csv [--input pd_n128.csv ...] --out fig5.svg
  cli.js fig6 --input plan.csv --out fig6.svg`;

function parseArgs(argv: string[]): { figure: string; inputs: string[]; out: string } {
  const [figure, ...rest] = argv;
  const inputs: string[] = [];
  let out = "";
  for (let i = 0; i < rest.length; i++) {
    if (rest[i] === "--input") inputs.push(rest[++i]);
    else if (rest[i] === "--out") out = rest[++i];
    else throw new Error(`unknown argument '${rest[i]}'\n${USAGE}`);
  }
  if (!figure || inputs.length === 0 || !out) throw new Error(USAGE);
  return { figure, inputs, out };
}

export function main(argv: string[]): void {
  const { figure, inputs, out } = parseArgs(argv);
  const texts = inputs.map((p) => readFileSync(p, "utf8"));
  let svg: string;
  if (figure === "fig2") {
    svg = renderGainPdf(texts[0]).svg;
  } else if (figure === "fig5") {
    svg = renderPdCurve(
      texts.map((t, i) => ({ label: basename(inputs[i], ".csv"), csvText: t }))
    ).svg;
  } else if (figure === "fig6") {
    svg = renderPlanCurves(texts[0]).svg;
  } else {
    throw new Error(`unknown figure '${figure}'\n${USAGE}`);
  }
  writeFileSync(out, svg);
  console.log(`wrote ${out}`);
}

const entry = process.argv[1] ?? "";
if (entry.endsWith("cli.js") || entry.endsWith("cli.ts")) {
  try {
    main(process.argv.slice(2));
  } catch (err) {
    console.error(err instanceof Error ? err.message : err);
    process.exit(1);
  }
}
