export { parseCsv, numericColumn, SchemaError, Table } from "./csv.js";
export {
  renderGainPdf,
  renderPdCurve,
  renderPlanCurves,
  FigureResult,
  PdPanel,
} from "./figures.js";
