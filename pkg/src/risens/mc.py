"""Monte-Carlo harness: trial engines, P_fa/P_d estimation, gain draws, sweeps.

Two trial engines compute the same statistic law:

* "direct" builds the N x n sample block X = h s^T + U explicitly and runs the
  power-iteration eigensolver.  Faithful to the signal model but O(N^2 n) per
  trial.
* "reduced" exploits unitary invariance: rotating X from both sides maps it to
  a ||h|| ||s|| e1 e1^T + U' with U' again i.i.d. noise, and Householder
  bidiagonalization of that matrix has independent chi-distributed entries.
  The largest eigenvalue of the resulting N x N tridiagonal Gram matrix has
  exactly the same distribution as the original statistic, at O(N) sampling
  plus an O(N) tridiagonal eigensolve per trial.

Reproducibility: every trial owns the RNG stream keyed by
(cell_id, hypothesis_bank, trial_index), so results do not depend on
execution order or worker count.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

from .channels import (ChannelConfig, random_phase_design, sample_channels,
                       statistical_phase_design)
from .detector import (Decision, SensingConfig, analytical_pd,
                       detection_threshold)
from .gains import GainCase, gain_dist
from .linalg import largest_eigenvalue, sample_complex_gaussian, sample_complex_gaussian_matrix
from .rng import RngStream

# hypothesis-bank slots inside the per-trial stream key
_BANK_H0 = 0
_BANK_H1 = 1
_BANK_GAIN = 2


class PhaseMode(Enum):
    STATISTICAL = "statistical"
    RANDOM = "random"
    NONE = "none"


class Hypothesis(Enum):
    H0 = "H0"
    H1 = "H1"


@dataclass(frozen=True)
class ExperimentSpec:
    sensing: SensingConfig
    channel: ChannelConfig
    phase_mode: PhaseMode = PhaseMode.STATISTICAL
    trials: int = 1000
    master_seed: int = 0
    engine: str = "reduced"
    gain_case: GainCase | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.engine not in ("reduced", "direct"):
            raise ValueError(f"unknown engine {self.engine!r}")
        if self.sensing.N != self.channel.N:
            raise ValueError("sensing.N and channel.N must agree")


@dataclass(frozen=True)
class TrialOutcome:
    statistic: float
    decision: Decision
    gain: float
    hypothesis: Hypothesis


@dataclass(frozen=True)
class ProbEstimate:
    pfa: float
    pd: float
    pfa_ci: tuple
    pd_ci: tuple
    trials: int


def wilson_interval(successes, trials, z=1.959963984540054):
    """95% Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2.0 * trials)) / denom
    half = z * math.sqrt(p * (1.0 - p) / trials + z * z / (4.0 * trials * trials)) / denom
    lo = 0.0 if successes == 0 else max(center - half, 0.0)
    hi = 1.0 if successes == trials else min(center + half, 1.0)
    return (lo, hi)


def _trial_phases(cfg: ChannelConfig, mode: PhaseMode, gen) -> np.ndarray:
    if mode is PhaseMode.RANDOM:
        return random_phase_design(cfg.M, gen)
    if mode is PhaseMode.NONE:
        return np.zeros(cfg.M)
    return statistical_phase_design(cfg)


def _draw_gain(cfg: ChannelConfig, mode: PhaseMode, gen):
    """One channel realization -> (h, ||h||^2) for h = d + G diag(e^{j phi}) f."""
    real = sample_channels(cfg, gen)
    phases = _trial_phases(cfg, mode, gen)
    if cfg.M == 0:
        h = real.d
    else:
        h = real.d + real.G @ (np.exp(1j * phases) * real.f)
    return h, float(np.sum(np.abs(h) ** 2))


def _reduced_statistic(h_norm_sq, sens: SensingConfig, gen) -> float:
    """Draw T = lambda_max((1/n) X X^H)/sigma_u^2 without forming X.

    Lower-bidiagonal model for the rotated block: d_1^2 is noncentral
    chi-square (2n dof, noncentrality 2 ||h||^2 ||s||^2 / sigma_u^2 with
    ||s||^2 ~ Gamma(n, sigma_s^2)); the remaining diagonal entries d_i and
    subdiagonal entries e_i are central chi with 2(n-i+1) and 2(N-i) dof.
    """
    N, n = sens.N, sens.n
    su2 = sens.sigma_u_sq
    if h_norm_sq > 0.0:
        s_norm_sq = gen.gamma(float(n), sens.sigma_s_sq)
        d1_sq = 0.5 * su2 * gen.noncentral_chisquare(2.0 * n, 2.0 * h_norm_sq * s_norm_sq / su2)
    else:
        d1_sq = su2 * gen.gamma(float(n))
    if N == 1:
        return d1_sq / (n * su2)
    d_sq = np.empty(N)
    d_sq[0] = d1_sq
    d_sq[1:] = su2 * gen.gamma(np.arange(n - 1, n - N, -1, dtype=float))
    e_sq = su2 * gen.gamma(np.arange(N - 1, 0, -1, dtype=float))
    diag = d_sq.copy()
    diag[1:] += e_sq
    off = np.sqrt(d_sq[:-1] * e_sq)
    top = eigvalsh_tridiagonal(diag, off, select="i", select_range=(N - 1, N - 1))[0]
    return float(top) / (n * su2)


def _direct_statistic(h, sens: SensingConfig, gen) -> float:
    n = sens.n
    s = sample_complex_gaussian(n, sens.sigma_s_sq, gen)
    block = sample_complex_gaussian_matrix((sens.N, n), sens.sigma_u_sq, gen)
    if h is not None:
        block = block + np.outer(h, s)
    return largest_eigenvalue(block) / sens.sigma_u_sq


def trial_statistic(spec: ExperimentSpec, hypothesis: Hypothesis, trial_index,
                    cell_id=0):
    """(T, ||h||^2) for one seeded trial; the gain is 0 under the idle hypothesis."""
    bank = _BANK_H1 if hypothesis is Hypothesis.H1 else _BANK_H0
    gen = RngStream(spec.master_seed, (cell_id, bank, int(trial_index))).generator()
    if hypothesis is Hypothesis.H0:
        h, g = None, 0.0
    else:
        h, g = _draw_gain(spec.channel, spec.phase_mode, gen)
    if spec.engine == "reduced":
        # the statistic's law depends on h only through ||h||^2
        t = _reduced_statistic(g, spec.sensing, gen)
    else:
        t = _direct_statistic(h, spec.sensing, gen)
    return t, g


def run_trial(spec: ExperimentSpec, hypothesis: Hypothesis, trial_index,
              cell_id=0, gamma=None) -> TrialOutcome:
    if gamma is None:
        gamma = detection_threshold(spec.sensing)
    t, g = trial_statistic(spec, hypothesis, trial_index, cell_id)
    return TrialOutcome(statistic=t,
                        decision=Decision.D1 if t > gamma else Decision.D0,
                        gain=g, hypothesis=hypothesis)


def statistic_bank(spec: ExperimentSpec, hypothesis: Hypothesis, cell_id=0):
    """All trial statistics for one hypothesis as an array (plus gains)."""
    ts = np.empty(spec.trials)
    gs = np.empty(spec.trials)
    for i in range(spec.trials):
        ts[i], gs[i] = trial_statistic(spec, hypothesis, i, cell_id)
    return ts, gs


def estimate_probs(spec: ExperimentSpec, cell_id=0, gamma=None) -> ProbEstimate:
    """Empirical P_fa and P_d with 95% Wilson intervals (disjoint trial banks)."""
    if gamma is None:
        gamma = detection_threshold(spec.sensing)
    t0, _ = statistic_bank(spec, Hypothesis.H0, cell_id)
    t1, _ = statistic_bank(spec, Hypothesis.H1, cell_id)
    k0 = int(np.sum(t0 > gamma))
    k1 = int(np.sum(t1 > gamma))
    return ProbEstimate(pfa=k0 / spec.trials, pd=k1 / spec.trials,
                        pfa_ci=wilson_interval(k0, spec.trials),
                        pd_ci=wilson_interval(k1, spec.trials),
                        trials=spec.trials)


def empirical_gain_samples(cfg: ChannelConfig, quantity, draws,
                           rng: RngStream | np.random.Generator,
                           phase_mode=PhaseMode.STATISTICAL, batch=256):
    """Draws of ||d||^2, ||G Phi f||^2 or ||d + G Phi f||^2.

    quantity: "direct", "reflected" or "combined".
    """
    if quantity not in ("direct", "reflected", "combined"):
        raise ValueError(f"unknown quantity {quantity!r}")
    from .channels import _steering_triplet
    from .gains import _beta_splits
    gen = rng.generator() if isinstance(rng, RngStream) else rng
    N, M = cfg.N, cfg.M
    out = np.empty(draws)
    pos = 0
    a_f, a_G, b_G = _steering_triplet(cfg)
    bf_bar, bf_til, bG_bar, bG_til = _beta_splits(cfg)
    G_bar = math.sqrt(bG_bar) * np.outer(a_G, b_G.conj()) if M else None
    fixed_phases = None
    if phase_mode is not PhaseMode.RANDOM:
        fixed_phases = _trial_phases(cfg, phase_mode, gen)
    while pos < draws:
        b = min(batch, draws - pos)
        if quantity == "reflected" and M == 0:
            vals = np.zeros(b)
        elif quantity == "direct" or M == 0:
            d = sample_complex_gaussian_matrix((b, N), cfg.beta_d, gen)
            vals = np.sum(np.abs(d) ** 2, axis=1)
        else:
            f = math.sqrt(bf_bar) * a_f + sample_complex_gaussian_matrix((b, M), bf_til, gen)
            G = G_bar + sample_complex_gaussian_matrix((b, N, M), bG_til, gen)
            if phase_mode is PhaseMode.RANDOM:
                phases = gen.uniform(0.0, 2.0 * np.pi, size=(b, M))
            else:
                phases = fixed_phases
            refl = np.einsum("bnm,bm->bn", G, np.exp(1j * phases) * f)
            if quantity == "combined":
                refl = refl + sample_complex_gaussian_matrix((b, N), cfg.beta_d, gen)
            vals = np.sum(np.abs(refl) ** 2, axis=1)
        out[pos:pos + b] = vals
        pos += b
    return out


# ---------------------------------------------------------------------------
# sweeps

SENSING_AXES = ("N", "c", "alpha", "sigma_u_sq", "sigma_s_sq")
CHANNEL_AXES = ("M", "beta_d", "beta_f", "beta_G", "kappa_f", "kappa_G")

SWEEP_FIXED_COLUMNS = ("cell", "gamma", "pd_analytical", "pfa_emp", "pfa_lo",
                       "pfa_hi", "pd_emp", "pd_lo", "pd_hi", "m_inf", "m_pd",
                       "g0", "status")


def _apply_axis(spec: ExperimentSpec, name, value) -> ExperimentSpec:
    if name == "N":
        return replace(spec, sensing=replace(spec.sensing, N=int(value)),
                       channel=replace(spec.channel, N=int(value)))
    if name in SENSING_AXES:
        return replace(spec, sensing=replace(spec.sensing, **{name: value}))
    if name in CHANNEL_AXES:
        value = int(value) if name == "M" else value
        return replace(spec, channel=replace(spec.channel, **{name: value}))
    raise ValueError(f"unknown sweep axis {name!r}")


def sweep_columns(axes):
    return ("cell",) + tuple(name for name, _ in axes) + SWEEP_FIXED_COLUMNS[1:]


def _run_cell(args):
    spec, axes, cell_id, values = args
    row = {"cell": cell_id}
    for (name, _), v in zip(axes, values):
        row[name] = v
    try:
        cell_spec = spec
        for (name, _), v in zip(axes, values):
            cell_spec = _apply_axis(cell_spec, name, v)
        gamma = detection_threshold(cell_spec.sensing)
        row["gamma"] = gamma
        if cell_spec.gain_case is not None:
            from . import planner
            dist = gain_dist(cell_spec.channel, cell_spec.gain_case)
            row["pd_analytical"] = analytical_pd(dist, cell_spec.sensing, gamma)
            pl = planner.plan(cell_spec.channel, cell_spec.sensing, cell_spec.gain_case)
            row["m_inf"], row["m_pd"] = pl.m_inf, pl.m_pd
            row["g0"] = math.nan if pl.g0 is None else pl.g0
        else:
            row["pd_analytical"] = math.nan
            row["m_inf"] = row["m_pd"] = -1
            row["g0"] = math.nan
        est = estimate_probs(cell_spec, cell_id=cell_id, gamma=gamma)
        row["pfa_emp"], row["pd_emp"] = est.pfa, est.pd
        row["pfa_lo"], row["pfa_hi"] = est.pfa_ci
        row["pd_lo"], row["pd_hi"] = est.pd_ci
        row["status"] = "ok"
    except Exception as exc:  # record the cell failure, keep sweeping
        for col in SWEEP_FIXED_COLUMNS[1:-1]:
            row.setdefault(col, math.nan)
        row["status"] = f"error:{type(exc).__name__}"
    return row


def sweep(spec: ExperimentSpec, axes, workers=1):
    """One row per grid point of the cartesian product of the axes.

    Row order is the product order of the axes; the per-trial stream keys make
    the output independent of the worker count.
    """
    axes = [(name, list(values)) for name, values in axes]
    for name, values in axes:
        if name not in SENSING_AXES + CHANNEL_AXES:
            raise ValueError(f"unknown sweep axis {name!r}")
        if not values:
            raise ValueError("sweep axes must be nonempty")
    grid = list(itertools.product(*(v for _, v in axes))) if axes else [()]
    jobs = [(spec, axes, i, values) for i, values in enumerate(grid)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_cell, jobs, chunksize=1))
    else:
        rows = [_run_cell(j) for j in jobs]
    rows.sort(key=lambda r: r["cell"])
    return rows
