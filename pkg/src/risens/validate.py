"""Acceptance suite: numbered end-to-end checks behind `risens validate`.

Each criterion function returns a CriterionResult and is deterministic given
the seed.  The suite is also exercised one criterion per test in
tests/test_acceptance.py.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from . import planner, tracy_widom as tw
from .channels import ChannelConfig, statistical_phase_design, _steering_triplet
from .detector import SensingConfig, analytical_pd, detection_threshold, spiked_law, tw_normalize
from .gains import (GainCase, cascade_dist_rayleigh, cascade_dist_rician,
                    component_slots, gain_dist, gain_dist_direct, gain_dist_los,
                    gain_dist_rayleigh, gain_dist_rician,
                    rician_component_expectation)
from .mc import (ExperimentSpec, Hypothesis, PhaseMode, _reduced_statistic,
                 empirical_gain_samples, estimate_probs, statistic_bank, sweep)
from .rng import RngStream

DEFAULT_SEED = 20240901


@dataclass(frozen=True)
class CriterionResult:
    index: int
    name: str
    passed: bool
    detail: str


def _result(index, name, passed, detail):
    return CriterionResult(index, name, bool(passed), detail)


def _h0_bank_512(seed, trials=10_000):
    sens = SensingConfig(N=512, c=0.01, alpha=0.1)
    ch = ChannelConfig(N=512, M=0, beta_d=0.01 / 512)
    spec = ExperimentSpec(sens, ch, trials=trials, master_seed=seed)
    t, _ = statistic_bank(spec, Hypothesis.H0)
    return sens, t


def criterion_1(seed=DEFAULT_SEED, _bank=None):
    """Threshold calibration: empirical P_fa within [0.08, 0.12] at alpha=0.1."""
    sens, t = _bank if _bank is not None else _h0_bank_512(seed)
    gamma = detection_threshold(sens)
    pfa = float(np.mean(t > gamma))
    return _result(1, "false-alarm calibration (N=512, 1e4 trials)",
                   0.08 <= pfa <= 0.12, f"pfa={pfa:.4f} target [0.08, 0.12]")


def criterion_2(seed=DEFAULT_SEED, _bank=None):
    """Null statistic matches the Tracy-Widom law (KS < 0.03)."""
    sens, t = _bank if _bank is not None else _h0_bank_512(seed)
    z = tw_normalize(t, sens)
    ks = stats.kstest(z, lambda x: tw.tw2_cdf(x)).statistic
    return _result(2, "null law vs Tracy-Widom (KS)", ks < 0.03,
                   f"ks={ks:.4f} target < 0.03")


def criterion_3(seed=DEFAULT_SEED, trials=20_000):
    """Spiked law moments at deterministic g=0.2, c=0.01, N=256."""
    sens = SensingConfig(N=256, c=0.01, alpha=0.1)
    law = spiked_law(0.2, sens)
    gen = RngStream(seed, (3,)).generator()
    t = np.array([_reduced_statistic(0.2, sens, gen) for _ in range(trials)])
    mean_err = abs(t.mean() - law.mu_T) / law.mu_T
    var_err = abs(t.var(ddof=1) - law.v_T) / law.v_T
    ok = mean_err < 0.02 and var_err < 0.15
    return _result(3, "spiked-law moments (g=0.2, N=256)", ok,
                   f"mean={t.mean():.5f} (mu_T={law.mu_T:.5f}, rel {mean_err:.4f} < 0.02), "
                   f"var={t.var(ddof=1):.3e} (v_T={law.v_T:.3e}, rel {var_err:.4f} < 0.15)")


def _fig_channel(N=64, M=0, kappa=5.0, los=False):
    # N beta_d = -20 dB, beta_f beta_G = -60 dB, off-broadside angles
    return ChannelConfig(N=N, M=M, beta_d=0.01 / N, beta_f=1e-3, beta_G=1e-3,
                         kappa_f=0.0 if los else kappa, kappa_G=0.0 if los else kappa,
                         los=los, theta_f_aoa=0.35, theta_G_aoa=-0.6, theta_G_aod=0.8)


def criterion_4(seed=DEFAULT_SEED, draws=100_000):
    """Gain-law moments (3%/10%) and KS fits for the LoS/Rayleigh/Rician laws."""
    checks = []

    def moment_check(tag, samples, law, ks_tol=None):
        m_err = abs(samples.mean() - law.mean) / law.mean
        ok = m_err < 0.03
        msg = f"{tag}: mean rel {m_err:.4f}"
        if law.variance > 0:
            v_err = abs(samples.var(ddof=1) - law.variance) / law.variance
            ok = ok and v_err < 0.10
            msg += f", var rel {v_err:.4f}"
        if ks_tol is not None:
            ks = stats.kstest(samples, "norm", args=(law.mean, law.std)).statistic
            ok = ok and ks < ks_tol
            msg += f", ks {ks:.4f} < {ks_tol}"
        checks.append((ok, msg))

    # direct link
    cfg = _fig_channel()
    s = empirical_gain_samples(cfg, "direct", draws, RngStream(seed, (4, 0)))
    moment_check("direct", s, gain_dist_direct(cfg))
    # pure LoS, M=40
    cfg = _fig_channel(M=40, los=True)
    s = empirical_gain_samples(cfg, "reflected", draws, RngStream(seed, (4, 1)))
    law = gain_dist_los(cfg)
    refl_mean = cfg.M**2 * cfg.N * cfg.beta_f * cfg.beta_G
    checks.append((abs(s.mean() - refl_mean) / refl_mean < 0.03,
                   f"los reflected: mean rel {abs(s.mean() - refl_mean) / refl_mean:.6f}"))
    s = empirical_gain_samples(cfg, "combined", draws, RngStream(seed, (4, 2)))
    moment_check("los combined", s, law, ks_tol=0.03)
    # Rayleigh cascade, M=500
    cfg = _fig_channel(M=500, kappa=0.0)
    s = empirical_gain_samples(cfg, "reflected", draws, RngStream(seed, (4, 3)),
                               phase_mode=PhaseMode.RANDOM)
    moment_check("rayleigh cascade", s, cascade_dist_rayleigh(cfg))
    s = empirical_gain_samples(cfg, "combined", draws, RngStream(seed, (4, 4)),
                               phase_mode=PhaseMode.RANDOM)
    moment_check("rayleigh combined", s, gain_dist_rayleigh(cfg), ks_tol=0.05)
    # Rician, M=40, kappa=5
    cfg = _fig_channel(M=40, kappa=5.0)
    s = empirical_gain_samples(cfg, "reflected", draws, RngStream(seed, (4, 5)))
    moment_check("rician cascade", s, cascade_dist_rician(cfg))
    s = empirical_gain_samples(cfg, "combined", draws, RngStream(seed, (4, 6)))
    moment_check("rician combined", s, gain_dist_rician(cfg), ks_tol=0.03)

    ok = all(c[0] for c in checks)
    detail = "; ".join(("ok " if c[0] else "FAIL ") + c[1] for c in checks)
    return _result(4, "gain-law moments and KS fits (1e5 draws)", ok, detail)


def component_mc_estimates(M, N, draws, seed):
    """Monte-Carlo estimates of the 25 cascade component expectations.

    Unit path losses, steering-vector deterministic parts, designed phases;
    the four cross terms t_(a,b,c,d) = f_a^H Phi^H G_b^H G_c Phi f_d are
    accumulated so that squares are E[|t|^2] and pairs are E[conj(t1) t2].
    """
    cfg = ChannelConfig(N=N, M=M, beta_d=0.0, beta_f=1.0, beta_G=1.0,
                        kappa_f=1.0, kappa_G=1.0, theta_f_aoa=0.35,
                        theta_G_aoa=-0.6, theta_G_aod=0.8)
    a_f, a_G, b_G = _steering_triplet(cfg)
    phi = np.exp(1j * statistical_phase_design(cfg))
    G_bar = np.outer(a_G, b_G.conj())
    gen = RngStream(seed, (5,)).generator()
    sums = {i: 0.0 for i in range(1, 26)}
    sq_sums = {i: 0.0 for i in range(1, 26)}
    batch, done = 4000, 0
    to_c = np.array([1.0, 1.0j])
    while done < draws:
        b = min(batch, draws - done)
        f_t = (gen.standard_normal((b, M, 2)) @ to_c) / math.sqrt(2.0)
        G_t = (gen.standard_normal((b, N, M, 2)) @ to_c) / math.sqrt(2.0)
        fv = {0: np.broadcast_to(phi * a_f, (b, M)), 1: phi * f_t}
        Gv = {0: np.broadcast_to(G_bar, (b, N, M)), 1: G_t}
        u = {(gs, fs): np.einsum("bnm,bm->bn", Gv[gs], fv[fs])
             for gs in (0, 1) for fs in (0, 1)}

        def t_of(slot):
            a, gb, gc, d = slot
            return np.einsum("bn,bn->b", u[(gb, a)].conj(), u[(gc, d)])

        for i in range(1, 26):
            s1, s2 = component_slots(i)
            vals = np.real(np.conj(t_of(s1)) * t_of(s2))
            sums[i] += float(np.sum(vals))
            sq_sums[i] += float(np.sum(vals * vals))
        done += b
    out = {}
    for i in range(1, 26):
        mean = sums[i] / draws
        var = max(sq_sums[i] / draws - mean * mean, 0.0)
        out[i] = (mean, math.sqrt(var / draws))
    return out


def criterion_5(seed=DEFAULT_SEED, draws=1_000_000, M=4, N=4):
    """Cascade component expectations vs Monte-Carlo at M=N=4 (5% or 4 SE)."""
    est = component_mc_estimates(M, N, draws, seed)
    fails = []
    lines = []
    for i in range(1, 26):
        mc, se = est[i]
        exact = rician_component_expectation(i, M, N)
        rel = abs(mc - exact) / exact
        ok = rel < 0.05 or abs(mc - exact) < 4.0 * se
        if not ok:
            fails.append(i)
        lines.append(f"C{i}: mc={mc:.2f} closed={exact:.0f} rel={rel:.3f} se={se:.2f}"
                     + ("" if ok else " FAIL"))
    detail = f"{25 - len(fails)}/25 within tolerance"
    if fails:
        detail += ("; failing indices " + str(fails)
                   + " (their closed forms are leading-order asymptotics; the exact"
                   " finite-size expectations carry O(1/M) corrections of ~25% at M=N=4)")
    return _result(5, "cascade component expectations (M=N=4, 1e6 draws)",
                   not fails, detail + " | " + "; ".join(lines))


def criterion_6(seed=DEFAULT_SEED, tuples=20):
    """Cascade variance reconstruction vs the closed form; kappa=0 reduction."""
    from .gains import cascade_second_moment
    gen = RngStream(seed, (6,)).generator()
    worst = 0.0
    for _ in range(tuples):
        cfg = ChannelConfig(N=int(gen.integers(2, 64)), M=int(gen.integers(2, 128)),
                            beta_d=0.0,
                            beta_f=float(10 ** gen.uniform(-4, 0)),
                            beta_G=float(10 ** gen.uniform(-4, 0)),
                            kappa_f=float(gen.uniform(0, 10)),
                            kappa_G=float(gen.uniform(0, 10)))
        law = cascade_dist_rician(cfg)
        recon = cascade_second_moment(cfg) - law.mean ** 2
        worst = max(worst, abs(recon - law.variance) / law.variance)
    # kappa = 0 degenerates to the Rayleigh cascade law
    cfg0 = ChannelConfig(N=48, M=96, beta_d=0.0, beta_f=2e-3, beta_G=7e-4)
    ray, ric = cascade_dist_rayleigh(cfg0), cascade_dist_rician(cfg0)
    exact0 = (math.isclose(ray.mean, ric.mean, rel_tol=1e-14)
              and math.isclose(ray.variance, ric.variance, rel_tol=1e-14))
    ok = worst < 1e-10 and exact0
    return _result(6, "cascade variance reconstruction", ok,
                   f"worst rel err {worst:.2e} < 1e-10 over {tuples} tuples; "
                   f"kappa=0 reduction exact: {exact0}")


def criterion_7(seed=DEFAULT_SEED, trials=10_000):
    """Without the reflecting surface P_d collapses onto P_fa at -20 dB SNR."""
    sens = SensingConfig(N=64, c=0.01, alpha=0.1)
    spec = ExperimentSpec(sens, _fig_channel(), trials=trials, master_seed=seed)
    est = estimate_probs(spec, cell_id=7)
    gap = abs(est.pd - est.pfa)
    return _result(7, "no-RIS null result (pd vs pfa)", gap < 0.03,
                   f"pfa={est.pfa:.4f} pd={est.pd:.4f} |gap|={gap:.4f} < 0.03")


def _pd_gap_profile(N, m_grid, seed, trials=1000):
    sens = SensingConfig(N=N, c=0.01, alpha=0.1)
    gamma = detection_threshold(sens)
    gaps = []
    for j, M in enumerate(m_grid):
        ch = _fig_channel(N=N, M=M)
        spec = ExperimentSpec(sens, ch, trials=trials, master_seed=seed,
                              gain_case=GainCase.RICIAN)
        est = estimate_probs(spec, cell_id=800 + j, gamma=gamma)
        pd_a = analytical_pd(gain_dist(ch, GainCase.RICIAN), sens, gamma)
        gaps.append(abs(est.pd - pd_a))
    return gaps


def criterion_8(seed=DEFAULT_SEED, trials=1000):
    """Analytical-vs-empirical P_d gap over an M grid; smaller at larger N."""
    m_grid = list(range(0, 73, 10))
    gaps_512 = _pd_gap_profile(512, m_grid, seed, trials)
    gaps_64 = _pd_gap_profile(64, m_grid, seed, trials)
    g512, g64 = max(gaps_512), max(gaps_64)
    ok = g512 <= 0.05 and g512 <= g64
    return _result(8, "P_d accuracy over M grid (N=512 vs N=64)", ok,
                   f"max gap N=512: {g512:.4f} <= 0.05; N=64: {g64:.4f}; "
                   f"shrinks with N: {g512 <= g64}")


def _mc_pd(ch, sens, seed, cell, trials):
    spec = ExperimentSpec(sens, ch, trials=trials, master_seed=seed,
                          gain_case=GainCase.RICIAN)
    return estimate_probs(spec, cell_id=cell, gamma=detection_threshold(sens)).pd


def criterion_9(seed=DEFAULT_SEED, trials=10_000, search_trials=2000):
    """Planner counts validated by simulation over a grid of sample ratios."""
    c_grid = [0.01, 0.02, 0.03, 0.04, 0.05]
    checks = []
    for j, c in enumerate(c_grid):
        sens = SensingConfig(N=64, c=c, alpha=0.1)
        ch = _fig_channel()
        pl = planner.plan(ch, sens, GainCase.RICIAN)
        pd_at_mpd = _mc_pd(ch.with_m(pl.m_pd), sens, seed, 900 + 10 * j, trials)
        # smallest M whose simulated P_d reaches 0.9
        lo, hi = 0, pl.m_pd
        while _mc_pd(ch.with_m(hi), sens, seed, 901 + 10 * j, search_trials) < 0.9:
            lo, hi = hi, max(2 * hi, 1)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if _mc_pd(ch.with_m(mid), sens, seed, 901 + 10 * j, search_trials) >= 0.9:
                hi = mid
            else:
                lo = mid
        ok = pd_at_mpd >= 0.995 and hi >= pl.m_inf
        checks.append((ok, f"c={c}: pd(m_pd={pl.m_pd})={pd_at_mpd:.4f} >= 0.995, "
                           f"mc minimal M for 0.9 = {hi} >= m_inf={pl.m_inf}"))
    ok = all(c[0] for c in checks)
    detail = "; ".join(("ok " if c[0] else "FAIL ") + c[1] for c in checks)
    return _result(9, "planner counts validated by simulation", ok, detail)


def criterion_10(seed=DEFAULT_SEED):
    """Monotonicity: element count vs target P_d and vs Rician factor."""
    sens = SensingConfig(N=64, c=0.01, alpha=0.1)
    ch = _fig_channel()
    targets = [0.5, 0.8, 0.9, 0.99, 0.999]
    ms = [planner.m_for_target_pd(ch, sens, GainCase.RICIAN, t) for t in targets]
    mono_t = all(a <= b for a, b in zip(ms, ms[1:]))
    kappas = [0.0, 1.0, 5.0, 10.0]
    mk = [planner.m_for_target_pd(_fig_channel(kappa=k), sens, GainCase.RICIAN, 0.99)
          for k in kappas]
    mono_k = all(a >= b for a, b in zip(mk, mk[1:]))
    return _result(10, "planner monotonicity (target, Rician factor)",
                   mono_t and mono_k,
                   f"M vs target {dict(zip(targets, ms))} nondecreasing: {mono_t}; "
                   f"M(pd>0.99) vs kappa {dict(zip(kappas, mk))} nonincreasing: {mono_k}")


def criterion_11(seed=DEFAULT_SEED, trials=200):
    """Sweep output is byte-identical across worker counts."""
    from .cli import write_sweep_csv
    sens = SensingConfig(N=64, c=0.01, alpha=0.1)
    spec = ExperimentSpec(sens, _fig_channel(), trials=trials, master_seed=seed,
                          gain_case=GainCase.RICIAN)
    axes = [("M", [0, 30, 60])]
    blobs = []
    for workers in (1, 3):
        rows = sweep(spec, axes, workers=workers)
        buf = io.StringIO()
        write_sweep_csv(buf, rows, axes)
        blobs.append(buf.getvalue().encode())
    ok = blobs[0] == blobs[1]
    return _result(11, "worker-count-independent sweep output", ok,
                   f"{len(blobs[0])} bytes, identical: {ok}")


_CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4,
             5: criterion_5, 6: criterion_6, 7: criterion_7, 8: criterion_8,
             9: criterion_9, 10: criterion_10, 11: criterion_11}


def run_all(seed=DEFAULT_SEED, indices=None):
    indices = sorted(indices) if indices else sorted(_CRITERIA)
    results = []
    bank = _h0_bank_512(seed) if {1, 2} & set(indices) else None
    for i in indices:
        if i in (1, 2):
            results.append(_CRITERIA[i](seed, _bank=bank))
        else:
            results.append(_CRITERIA[i](seed))
    return results
