"""Command-line front end: scenario configs in, CSV + metadata sidecars out.

Config files are TOML with [sensing], [channel] and [experiment] sections.
All physical quantities are linear; any float key also accepts a "_db"
variant (value = 10^(db/10)).  Unknown keys are rejected.  Exit codes:
0 success, 2 config error, 3 numerical failure.
"""

from __future__ import annotations

import csv
import math
import sys
import time
from dataclasses import dataclass, field

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import click
import numpy as np

from . import planner
from .channels import ChannelConfig
from .detector import SensingConfig, analytical_pd, detection_threshold
from .gains import (GainCase, cascade_dist_rayleigh, cascade_dist_rician,
                    gain_dist, gain_dist_direct)
from .linalg import PowerIterationError
from .mc import (CHANNEL_AXES as _SWEEP_CHANNEL, SENSING_AXES as _SWEEP_SENSING,
                 ExperimentSpec, PhaseMode, empirical_gain_samples,
                 estimate_probs, sweep, sweep_columns)
from .planner import InfeasiblePlanError
from .rng import RngStream
from .tracy_widom import tw2_quantile

try:
    from importlib.metadata import version as _pkg_version
    TOOL_VERSION = _pkg_version("risens")
except Exception:  # pragma: no cover - only hit outside an installed tree
    TOOL_VERSION = "unknown"

SCHEMA_VERSION = 1


class ConfigError(Exception):
    pass


_SENSING_FIELDS = {"N": int, "c": float, "alpha": float,
                   "sigma_u_sq": float, "sigma_s_sq": float}
_CHANNEL_FIELDS = {"M": int, "beta_d": float, "beta_f": float, "beta_G": float,
                   "kappa_f": float, "kappa_G": float, "los": bool,
                   "theta_f_aoa": float, "theta_G_aoa": float,
                   "theta_G_aod": float, "spacing": float}
_EXPERIMENT_FIELDS = {"trials": int, "engine": str, "phase_mode": str,
                      "case": str}


@dataclass
class Scenario:
    sensing: dict = field(default_factory=dict)
    channel: dict = field(default_factory=dict)
    experiment: dict = field(default_factory=dict)


def db_to_linear(db):
    return 10.0 ** (db / 10.0)


def linear_to_db(value):
    return 10.0 * math.log10(value)


def _parse_section(name, raw, fields):
    out = {}
    for key, value in raw.items():
        base, is_db = key, False
        if key.endswith("_db"):
            base, is_db = key[:-3], True
        if base not in fields:
            raise ConfigError(f"unknown key '{key}' in section [{name}]")
        if is_db and fields[base] is not float:
            raise ConfigError(f"'_db' form not allowed for [{name}].{base}")
        if base in out:
            raise ConfigError(f"[{name}].{base} given in both linear and dB form")
        if is_db:
            out[base] = db_to_linear(float(value))
        else:
            out[base] = fields[base](value)
    return out


def load_scenario(path) -> Scenario:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}")
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config parse error in {path}: {exc}")
    known = {"sensing": _SENSING_FIELDS, "channel": _CHANNEL_FIELDS,
             "experiment": _EXPERIMENT_FIELDS}
    for section in data:
        if section not in known:
            raise ConfigError(f"unknown section [{section}]")
    return Scenario(**{s: _parse_section(s, data.get(s, {}), f)
                       for s, f in known.items()})


def _apply_overrides(scn: Scenario, overrides):
    """overrides: iterable of 'section.key=value' strings plus named flags."""
    for item in overrides:
        if "=" not in item or "." not in item.split("=", 1)[0]:
            raise ConfigError(f"override must look like section.key=value, got '{item}'")
        target, value = item.split("=", 1)
        section, key = target.split(".", 1)
        fields = {"sensing": _SENSING_FIELDS, "channel": _CHANNEL_FIELDS,
                  "experiment": _EXPERIMENT_FIELDS}.get(section)
        if fields is None:
            raise ConfigError(f"unknown section '{section}' in override '{item}'")
        parsed = _parse_section(section, {key: _coerce(value)}, fields)
        getattr(scn, section).update(parsed)
    return scn


def _coerce(text):
    low = text.strip().lower()
    if low in ("true", "false"):
        return low == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def resolve(scn: Scenario):
    """Scenario -> (SensingConfig, ChannelConfig, experiment dict)."""
    s = dict(scn.sensing)
    for req in ("N", "c", "alpha"):
        if req not in s:
            raise ConfigError(f"missing required key [sensing].{req}")
    ch = dict(scn.channel)
    ch.setdefault("M", 0)
    if "beta_d" not in ch:
        raise ConfigError("missing required key [channel].beta_d")
    exp = {"trials": 1000, "engine": "reduced", "phase_mode": "statistical",
           "case": "rician"}
    exp.update(scn.experiment)
    try:
        sensing = SensingConfig(**s)
        channel = ChannelConfig(N=sensing.N, **ch)
        exp["phase_mode"] = PhaseMode(exp["phase_mode"])
        exp["case"] = GainCase(exp["case"])
    except ValueError as exc:
        raise ConfigError(str(exc))
    if exp["engine"] not in ("reduced", "direct"):
        raise ConfigError(f"unknown engine '{exp['engine']}'")
    return sensing, channel, exp


def _gather(config, sets, n, c, alpha, m, trials):
    scn = load_scenario(config) if config else Scenario()
    named = []
    if n is not None:
        named.append(f"sensing.N={n}")
    if c is not None:
        named.append(f"sensing.c={c}")
    if alpha is not None:
        named.append(f"sensing.alpha={alpha}")
    if m is not None:
        named.append(f"channel.M={m}")
    if trials is not None:
        named.append(f"experiment.trials={trials}")
    _apply_overrides(scn, list(sets) + named)
    return resolve(scn)


def write_metadata(path, sensing, channel, exp, seed, command, wall_time):
    lines = [f"schema_version={SCHEMA_VERSION}", f"tool=risens {TOOL_VERSION}",
             f"command={command}", f"seed={seed}",
             f"wall_time_s={wall_time:.3f}"]
    for name in _SENSING_FIELDS:
        lines.append(f"config.sensing.{name}={getattr(sensing, name)!r}")
    for name in _CHANNEL_FIELDS:
        lines.append(f"config.channel.{name}={getattr(channel, name)!r}")
    lines.append(f"config.experiment.trials={exp['trials']}")
    lines.append(f"config.experiment.engine={exp['engine']}")
    lines.append(f"config.experiment.phase_mode={exp['phase_mode'].value}")
    lines.append(f"config.experiment.case={exp['case'].value}")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_metadata_config(path):
    """Re-parse a metadata sidecar back into resolved configs (round-trip)."""
    scn = Scenario()
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line.startswith("config."):
                continue
            target, value = line.split("=", 1)
            _, section, key = target.split(".", 2)
            getattr(scn, section)[key] = _coerce(value)
    return resolve(scn)


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return "nan" if math.isnan(v) else repr(v)
    return str(v)


def _write_csv(path_or_fh, header, rows):
    own = isinstance(path_or_fh, (str, bytes))
    fh = open(path_or_fh, "w", newline="") if own else path_or_fh
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    finally:
        if own:
            fh.close()


def write_sweep_csv(path_or_fh, rows, axes):
    cols = sweep_columns(axes)
    _write_csv(path_or_fh, cols, ([row[c] for c in cols] for row in rows))


def _grid(text):
    try:
        return [float(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise ConfigError(f"cannot parse grid '{text}'")


_CONFIG_OPTS = [
    click.option("--config", type=click.Path(), default=None, help="TOML scenario file."),
    click.option("--set", "sets", multiple=True, metavar="SECTION.KEY=VALUE",
                 help="Override a config key."),
    click.option("--N", "n", type=int, default=None),
    click.option("--c", type=float, default=None),
    click.option("--alpha", type=float, default=None),
    click.option("--M", "m", type=int, default=None),
    click.option("--trials", type=int, default=None),
]


def _with_config_opts(fn):
    for opt in reversed(_CONFIG_OPTS):
        fn = opt(fn)
    return fn


def _run(body):
    try:
        body()
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(2)
    except (PowerIterationError, InfeasiblePlanError, FloatingPointError,
            RuntimeError) as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        sys.exit(3)


@click.group()
def main():
    """Spectrum-sensing analysis and simulation toolkit."""


@main.command()
@_with_config_opts
def threshold(config, sets, n, c, alpha, m, trials):
    """Print the detection threshold for the configured scenario."""
    def body():
        sensing, channel, exp = _gather(config, sets, n, c, alpha, m, trials)
        gamma = detection_threshold(sensing)
        q = tw2_quantile(1.0 - sensing.alpha)
        click.echo(f"N={sensing.N} c={sensing.c} alpha={sensing.alpha} n={sensing.n}")
        click.echo(f"quantile={q!r}")
        click.echo(f"gamma={gamma!r}")
    _run(body)


@main.command("gain-pdf")
@_with_config_opts
@click.option("--seed", type=int, required=True)
@click.option("--quantity", type=click.Choice(["direct", "reflected", "combined"]),
              default="combined")
@click.option("--draws", type=int, default=100_000)
@click.option("--bins", type=int, default=80)
@click.option("--out", type=click.Path(), required=True)
def gain_pdf(config, sets, n, c, alpha, m, trials, seed, quantity, draws, bins, out):
    """Histogram of a gain quantity with its analytical density overlay."""
    def body():
        t0 = time.monotonic()
        sensing, channel, exp = _gather(config, sets, n, c, alpha, m, trials)
        samples = empirical_gain_samples(channel, quantity, draws,
                                         RngStream(seed, (0,)),
                                         phase_mode=exp["phase_mode"])
        if quantity == "direct":
            law = gain_dist_direct(channel)
        elif quantity == "reflected":
            law = (cascade_dist_rayleigh(channel) if exp["case"] is GainCase.RAYLEIGH
                   else cascade_dist_rician(channel))
        else:
            law = gain_dist(channel, exp["case"])
        hist, edges = np.histogram(samples, bins=bins, density=True)
        mids = 0.5 * (edges[:-1] + edges[1:])
        if law.variance > 0:
            dens = np.exp(-0.5 * ((mids - law.mean) / law.std) ** 2) \
                / (law.std * math.sqrt(2.0 * math.pi))
        else:
            dens = np.full_like(mids, math.nan)
        _write_csv(out, ["bin_lo", "bin_mid", "bin_hi", "density_emp",
                         "density_analytical"],
                   zip(edges[:-1], mids, edges[1:], hist, dens))
        write_metadata(out + ".meta", sensing, channel, exp, seed,
                       f"gain-pdf --quantity {quantity} --draws {draws}",
                       time.monotonic() - t0)
        click.echo(f"wrote {out} ({bins} bins, {draws} draws)")
    _run(body)


@main.command("pd-curve")
@_with_config_opts
@click.option("--seed", type=int, required=True)
@click.option("--m-grid", required=True, metavar="M1,M2,...")
@click.option("--workers", type=int, default=1)
@click.option("--out", type=click.Path(), required=True)
def pd_curve(config, sets, n, c, alpha, m, trials, seed, m_grid, workers, out):
    """Analytical and simulated detection probability over an element grid."""
    def body():
        t0 = time.monotonic()
        sensing, channel, exp = _gather(config, sets, n, c, alpha, m, trials)
        grid = [int(v) for v in _grid(m_grid)]
        spec = ExperimentSpec(sensing, channel, phase_mode=exp["phase_mode"],
                              trials=exp["trials"], master_seed=seed,
                              engine=exp["engine"], gain_case=exp["case"])
        rows = sweep(spec, [("M", grid)], workers=workers)
        out_rows = [[sensing.N, int(r["M"]), r["gamma"], r["pd_analytical"],
                     r["pd_emp"], r["pd_lo"], r["pd_hi"], r["status"]]
                    for r in rows]
        _write_csv(out, ["N", "M", "gamma", "pd_analytical", "pd_empirical",
                         "ci_lo", "ci_hi", "status"], out_rows)
        write_metadata(out + ".meta", sensing, channel, exp, seed,
                       f"pd-curve --m-grid {m_grid}", time.monotonic() - t0)
        click.echo(f"wrote {out} ({len(out_rows)} rows)")
    _run(body)


@main.command()
@_with_config_opts
@click.option("--c-grid", default=None, metavar="C1,C2,...",
              help="Sample-ratio grid; defaults to the configured c.")
@click.option("--target-pd", type=float, default=None,
              help="Also report the count reaching this detection probability.")
@click.option("--out", type=click.Path(), required=True)
def plan(config, sets, n, c, alpha, m, trials, c_grid, target_pd, out):
    """Reflecting-element counts (lower bound and sufficient) per sample ratio."""
    def body():
        t0 = time.monotonic()
        sensing, channel, exp = _gather(config, sets, n, c, alpha, m, trials)
        cs = _grid(c_grid) if c_grid else [sensing.c]
        header = ["c", "m_inf", "g0", "m_pd"]
        if target_pd is not None:
            header.append("m_target")
        rows = []
        for cv in cs:
            s = SensingConfig(N=sensing.N, c=cv, alpha=sensing.alpha,
                              sigma_u_sq=sensing.sigma_u_sq,
                              sigma_s_sq=sensing.sigma_s_sq)
            pl = planner.plan(channel, s, exp["case"])
            row = [cv, pl.m_inf, math.nan if pl.g0 is None else pl.g0, pl.m_pd]
            if target_pd is not None:
                row.append(planner.m_for_target_pd(channel, s, exp["case"], target_pd))
            rows.append(row)
        _write_csv(out, header, rows)
        write_metadata(out + ".meta", sensing, channel, exp, seed=0,
                       command=f"plan --c-grid {c_grid}", wall_time=time.monotonic() - t0)
        click.echo(f"wrote {out} ({len(rows)} rows)")
    _run(body)


@main.command("sweep")
@_with_config_opts
@click.option("--seed", type=int, required=True)
@click.option("--axis", "axes_opt", multiple=True, required=True,
              metavar="NAME=V1,V2,...", help="Sweep axis (repeatable).")
@click.option("--workers", type=int, default=1)
@click.option("--out", type=click.Path(), required=True)
def sweep_cmd(config, sets, n, c, alpha, m, trials, seed, axes_opt, workers, out):
    """Full factorial sweep: analytical, simulated, and planner columns."""
    def body():
        t0 = time.monotonic()
        sensing, channel, exp = _gather(config, sets, n, c, alpha, m, trials)
        axes = []
        for item in axes_opt:
            if "=" not in item:
                raise ConfigError(f"axis must look like NAME=V1,V2,..., got '{item}'")
            name, values = item.split("=", 1)
            if name not in ("N",) + _SWEEP_SENSING + _SWEEP_CHANNEL:
                raise ConfigError(f"unknown sweep axis '{name}'")
            axes.append((name, _grid(values)))
        spec = ExperimentSpec(sensing, channel, phase_mode=exp["phase_mode"],
                              trials=exp["trials"], master_seed=seed,
                              engine=exp["engine"], gain_case=exp["case"])
        rows = sweep(spec, axes, workers=workers)
        write_sweep_csv(out, rows, axes)
        write_metadata(out + ".meta", sensing, channel, exp, seed,
                       "sweep " + " ".join(f"--axis {a}" for a in axes_opt),
                       time.monotonic() - t0)
        click.echo(f"wrote {out} ({len(rows)} rows)")
    _run(body)


@main.command()
@click.option("--seed", type=int, required=True)
@click.option("--only", default=None, metavar="I1,I2,...",
              help="Run only these criterion numbers.")
def validate(seed, only):
    """Run the acceptance suite; one pass/fail line per criterion."""
    def body():
        from .validate import run_all
        indices = [int(x) for x in only.split(",")] if only else None
        results = run_all(seed, indices)
        failed = False
        for r in results:
            status = "PASS" if r.passed else "FAIL"
            failed = failed or not r.passed
            click.echo(f"{status} {r.index:2d} {r.name}: {r.detail}")
        if failed:
            sys.exit(3)
    _run(body)


if __name__ == "__main__":
    main()
