import { describe, expect, it } from "vitest";
import { numericColumn, parseCsv, SchemaError } from "../src/csv.js";

describe("parseCsv", () => {
  it("parses numeric columns", () => {
    const t = parseCsv("a,b\n1,2.5\n3,nan\n", ["a", "b"]);
    expect(t.columns).toEqual(["a", "b"]);
    expect(numericColumn(t, "a")).toEqual([1, 3]);
    const b = numericColumn(t, "b");
    expect(b[0]).toBe(2.5);
    expect(Number.isNaN(b[1])).toBe(true);
  });

  it("names every missing column in the error", () => {
    expect(() => parseCsv("a\n1\n", ["a", "pd_empirical", "ci_lo"])).toThrowError(
      /pd_empirical, ci_lo/
    );
  });

  it("rejects a header-only CSV", () => {
    expect(() => parseCsv("a,b\n", ["a"])).toThrowError(/no data rows/);
  });

  it("rejects an empty string", () => {
    expect(() => parseCsv("", ["a"])).toThrow(SchemaError);
  });

  it("rejects non-numeric cells when numbers are required", () => {
    const t = parseCsv("a\nfoo\n", ["a"]);
    expect(() => numericColumn(t, "a")).toThrowError(/expected a number/);
  });
});
