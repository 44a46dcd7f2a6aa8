import Papa from "papaparse";

/** A parsed CSV: column names plus one object per data row. */
export interface Table {
  columns: string[];
  rows: Record<string, number | string>[];
}

export class SchemaError extends Error {}

/**
 * Parse CSV text and check it against the columns a figure needs.
 *
 * Fails loudly: a missing column is reported by name, and a CSV with a
 * header but no data rows is rejected outright.
 */
export function parseCsv(text: string, required: string[]): Table {
  const parsed = Papa.parse<Record<string, number | string>>(text.trim(), {
    header: true,
    dynamicTyping: true,
    skipEmptyLines: true,
  });
  // a single-column file trips delimiter auto-detection; that is a warning,
  // not a malformed file
  const errors = parsed.errors.filter((e) => e.code !== "UndetectableDelimiter");
  if (errors.length > 0) {
    throw new SchemaError(`CSV parse error: ${errors[0].message} (row ${errors[0].row})`);
  }
  const columns = parsed.meta.fields ?? [];
  const missing = required.filter((c) => !columns.includes(c));
  if (missing.length > 0) {
    throw new SchemaError(
      `CSV is missing required column(s): ${missing.join(", ")} ` +
        `(found: ${columns.length ? columns.join(", ") : "none"})`
    );
  }
  if (parsed.data.length === 0) {
    throw new SchemaError("CSV contains a header but no data rows");
  }
  return { columns, rows: parsed.data };
}

/** Pull one column as numbers; non-numeric cells are a schema violation. */
export function numericColumn(table: Table, name: string): number[] {
  return table.rows.map((row, i) => {
    const v = row[name];
    if (typeof v === "number" && Number.isFinite(v)) return v;
    if (v === "nan" || (typeof v === "number" && Number.isNaN(v))) return NaN;
    throw new SchemaError(`column '${name}' row ${i}: expected a number, got '${v}'`);
  });
}
