"""Regenerate the shipped Tracy-Widom F2 table (src/risens/data/tw2_table.txt)."""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from risens import tracy_widom as tw  # noqa: E402

OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "risens" / "data" / "tw2_table.txt"


def main():
    table = tw.generate_tw2_table(2048)
    with OUT.open("w") as fh:
        tw.write_table(table, fh)
    # quick moment sanity check against the literature values
    s, F = table.grid, table.cdf
    pdf = np.gradient(F, s)
    mean = np.trapezoid(s * pdf, s)
    var = np.trapezoid(s * s * pdf, s) - mean**2
    print(f"wrote {OUT} ({len(s)} rows)")
    print(f"mean={mean:.6f} (lit -1.771087)  var={var:.6f} (lit 0.813195)")


if __name__ == "__main__":
    import numpy as np

    main()
