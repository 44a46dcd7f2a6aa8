"""Tracy-Widom F2 distribution: CDF, quantile, and the offline table generator.

The CDF is shipped as a pre-generated two-column text table (versioned in the
package data) and evaluated at runtime by shape-preserving monotone cubic
interpolation.  The generator integrates the Painleve II representation

    q'' = s q + 2 q^3,   q(s) ~ Ai(s)  as s -> +inf,
    F2(s) = exp( - int_s^inf (x - s) q(x)^2 dx ),

augmenting the ODE with I(s) = int_s^inf (x-s) q^2 dx and
J(s) = int_s^inf q^2 dx, so that I' = -J and J' = -q^2.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from importlib import resources

import numpy as np
from scipy import integrate, special
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

TABLE_S_MIN = -10.0
TABLE_S_MAX = 6.0
_DEFAULT_RESOLUTION = 2048
_GENERATOR_ID = "painleve2-dop853+lefttail-v1"

# log F2(s) = -|s|^3/12 - (1/8) log|s| + log(2)/24 + zeta'(-1) + O(|s|^-3/2)
# (deep left tail; used below the ODE switch point where backward integration
# of the Hastings-McLeod branch becomes unstable)
_ZETA_PRIME_MINUS_1 = -0.16542114370045092
_LEFT_TAIL_SWITCH = -8.0


class TableValidationError(ValueError):
    """Raised when a table file violates the Tw2Table invariants."""


@dataclass(frozen=True)
class Tw2Table:
    """Tabulated F2 CDF on a strictly increasing grid."""

    grid: np.ndarray
    cdf: np.ndarray
    provenance: str

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        cdf = np.asarray(self.cdf, dtype=float)
        if grid.ndim != 1 or grid.shape != cdf.shape or grid.size < 2:
            raise TableValidationError("grid/cdf must be 1-D arrays of equal length >= 2")
        if not np.all(np.diff(grid) > 0):
            raise TableValidationError("grid must be strictly increasing")
        if not np.all(np.diff(cdf) > 0):
            raise TableValidationError("cdf must be strictly increasing")
        if not (0.0 < cdf[0] < 1e-8):
            raise TableValidationError(f"left tail mass too large: cdf[0]={cdf[0]:.3e}")
        if not (1.0 - 1e-8 < cdf[-1] < 1.0):
            raise TableValidationError(f"right tail mass too large: 1-cdf[-1]={1-cdf[-1]:.3e}")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "cdf", cdf)
        object.__setattr__(self, "_interp", PchipInterpolator(grid, cdf, extrapolate=False))


def generate_tw2_table(resolution=_DEFAULT_RESOLUTION, s_min=TABLE_S_MIN, s_max=TABLE_S_MAX):
    """Generate a Tw2Table by integrating the Painleve II ODE system.

    Integration starts at s0 well inside the right tail, where q = Ai and the
    integrals I, J are computed by quadrature of Ai^2, and proceeds leftwards.
    Refuses to emit a table that fails the Tw2Table invariants.
    """
    if resolution < 256:
        raise ValueError("resolution must be >= 256")

    s0 = 10.0  # Ai(10) ~ 1e-10; Hastings-McLeod q == Ai to double precision here

    def ai_sq(x):
        return special.airy(x)[0] ** 2

    J0, _ = integrate.quad(ai_sq, s0, np.inf)
    I0, _ = integrate.quad(lambda x: (x - s0) * ai_sq(x), s0, np.inf)
    q0, q0p = special.airy(s0)[0], special.airy(s0)[1]

    def rhs(s, y):
        q, qp, I, J = y
        return [qp, s * q + 2.0 * q**3, -J, -q * q]

    grid = np.linspace(s_min, s_max, resolution)
    ode_lo = max(s_min, _LEFT_TAIL_SWITCH)
    ode_pts = grid[(grid <= s0) & (grid >= ode_lo)][::-1]
    sol = integrate.solve_ivp(
        rhs, (s0, ode_lo), [q0, q0p, I0, J0],
        t_eval=ode_pts, method="DOP853", rtol=3e-13, atol=1e-16,
    )
    if not sol.success:
        raise RuntimeError(f"Painleve II integration failed: {sol.message}")
    cdf = np.empty_like(grid)
    in_ode = (grid <= s0) & (grid >= ode_lo)
    cdf[in_ode] = np.exp(-sol.y[2][::-1])
    tail = grid < ode_lo
    if np.any(tail):
        a = -grid[tail]
        log_f2 = -a**3 / 12.0 - np.log(a) / 8.0 + np.log(2.0) / 24.0 + _ZETA_PRIME_MINUS_1
        cdf[tail] = np.exp(log_f2)
    above = grid > s0
    if np.any(above):
        # beyond the integration start the remaining mass is below double-eps
        cdf[above] = 1.0 - 1e-16
    return Tw2Table(grid=grid, cdf=cdf, provenance=f"{_GENERATOR_ID} rows={resolution}")


def write_table(table: Tw2Table, fh):
    fh.write(f"# {table.provenance}\n")
    for s, p in zip(table.grid, table.cdf):
        fh.write(f"{s:.12e} {p:.16e}\n")


def read_table(fh) -> Tw2Table:
    header = fh.readline()
    if not header.startswith("#"):
        raise TableValidationError("missing header line")
    provenance = header.lstrip("#").strip()
    data = np.loadtxt(fh)
    if data.ndim != 2 or data.shape[1] != 2:
        raise TableValidationError("table body must have two columns: s cdf")
    return Tw2Table(grid=data[:, 0], cdf=data[:, 1], provenance=provenance)


_loaded_table: Tw2Table | None = None


def default_table() -> Tw2Table:
    """The table shipped with the package (loaded once, then shared)."""
    global _loaded_table
    if _loaded_table is None:
        text = resources.files("risens").joinpath("data/tw2_table.txt").read_text()
        _loaded_table = read_table(io.StringIO(text))
    return _loaded_table


def tw2_cdf(s, table: Tw2Table | None = None):
    """F2(s), clamped to [0, 1]; outside the table range returns 0 or 1."""
    table = table if table is not None else default_table()
    s = np.asarray(s, dtype=float)
    out = np.empty(s.shape)
    lo = s < table.grid[0]
    hi = s > table.grid[-1]
    mid = ~(lo | hi)
    out[lo] = 0.0
    out[hi] = 1.0
    if np.any(mid):
        out[mid] = np.clip(table._interp(s[mid]), 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def tw2_quantile(p, table: Tw2Table | None = None):
    """F2^{-1}(p) for p in (0, 1), solved on the interpolated CDF."""
    table = table if table is not None else default_table()
    if not (0.0 < p < 1.0):
        raise ValueError(f"p must be in (0, 1), got {p}")
    grid, cdf = table.grid, table.cdf
    if p <= cdf[0]:
        return float(grid[0])
    if p >= cdf[-1]:
        return float(grid[-1])
    j = int(np.searchsorted(cdf, p))
    a, b = grid[j - 1], grid[j]
    if table._interp(a) == p:
        return float(a)
    return float(brentq(lambda s: table._interp(s) - p, a, b, xtol=1e-13, rtol=1e-15))
