"""Reflecting-element planning: M_inf, g0, M_PD, and target-P_d search.

All counts come from the three-sigma margin g_m(M) = mu_g(M) - k sigma_g(M)
of the case-appropriate gain law: M_inf is the smallest count whose margin
clears the phase transition sqrt(c); M_PD additionally clears the larger root
g0 of f(g) = gamma, where f is the three-sigma lower edge of the spiked
statistic law.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq, minimize_scalar

from .channels import ChannelConfig
from .detector import SensingConfig, analytical_pd, detection_threshold
from .gains import GainCase, gain_dist

THREE_SIGMA = 3.0  # design dial, not a law
_M_CAP = 10_000_000


class InfeasiblePlanError(RuntimeError):
    """Raised when no element count below the search cap meets the condition."""


@dataclass(frozen=True)
class PlanResult:
    m_inf: int
    m_pd: int
    g0: float | None
    gamma: float


def g_margin(M, cfg: ChannelConfig, case: GainCase, k_sigma=THREE_SIGMA) -> float:
    """Gain margin mu_g(M) - k sigma_g(M) under the case's law."""
    dist = gain_dist(cfg.with_m(M), case)
    return dist.mean - k_sigma * dist.std


def _smallest_m_with_margin(target, cfg, case, k_sigma):
    """Smallest integer M with g_margin(M) >= target (0 if already met)."""
    if g_margin(0, cfg, case, k_sigma) >= target:
        return 0
    lo, hi = 0, 1
    while g_margin(hi, cfg, case, k_sigma) < target:
        lo, hi = hi, hi * 2
        if hi > _M_CAP:
            raise InfeasiblePlanError(
                f"g_margin never reaches {target:.4g} for M <= {_M_CAP}")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if g_margin(mid, cfg, case, k_sigma) >= target:
            hi = mid
        else:
            lo = mid
    return hi


def m_inf(cfg: ChannelConfig, sensing: SensingConfig, case: GainCase,
          k_sigma=THREE_SIGMA) -> int:
    """Lower bound on the element count: smallest M with g_margin >= sqrt(c)."""
    return _smallest_m_with_margin(math.sqrt(sensing.c), cfg, case, k_sigma)


def f_of_g(g, sensing: SensingConfig, k_sigma=THREE_SIGMA) -> float:
    """Three-sigma lower edge of the spiked statistic law, defined on g > sqrt(c)."""
    c, n = sensing.c, sensing.n
    if g <= math.sqrt(c):
        raise ValueError(f"f(g) requires g > sqrt(c) = {math.sqrt(c):.6g}, got {g}")
    v = max(((g + 1.0) ** 2 / n) * (1.0 - c / (g * g)), 0.0)
    return g + 1.0 + c + c / g - k_sigma * math.sqrt(v)


def g0_root(gamma, sensing: SensingConfig, k_sigma=THREE_SIGMA,
            rel_tol=1e-12) -> float | None:
    """Larger root of f(g) = gamma, or None when min f > gamma.

    f decreases from (1+sqrt(c))^2 at the transition and then increases, so
    the larger root sits on the increasing branch past the minimizer.
    """
    sc = math.sqrt(sensing.c)
    lo = sc * (1.0 + 1e-12)
    # grow a bracket until f turns upward past gamma
    hi = max(2.0 * sc, 1e-3)
    for _ in range(200):
        if f_of_g(hi, sensing, k_sigma) > gamma and f_of_g(hi, sensing, k_sigma) > f_of_g(0.5 * (lo + hi), sensing, k_sigma):
            break
        hi *= 2.0
    else:
        raise RuntimeError("bracket growth exhausted while locating f's increasing branch")
    res = minimize_scalar(lambda g: f_of_g(g, sensing, k_sigma),
                          bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-14})
    g_min, f_min = float(res.x), float(res.fun)
    if f_min > gamma:
        return None
    if f_min == gamma:
        return g_min
    root = brentq(lambda g: f_of_g(g, sensing, k_sigma) - gamma, g_min, hi,
                  xtol=1e-300, rtol=rel_tol)
    return float(root)


def m_pd(cfg: ChannelConfig, sensing: SensingConfig, case: GainCase,
         k_sigma=THREE_SIGMA, gamma: float | None = None) -> int:
    """Sufficient element count: margin clears g0 (falls back to m_inf if no root)."""
    if gamma is None:
        gamma = detection_threshold(sensing)
    g0 = g0_root(gamma, sensing, k_sigma)
    if g0 is None:
        return m_inf(cfg, sensing, case, k_sigma)
    return _smallest_m_with_margin(g0, cfg, case, k_sigma)


def plan(cfg: ChannelConfig, sensing: SensingConfig, case: GainCase,
         k_sigma=THREE_SIGMA) -> PlanResult:
    gamma = detection_threshold(sensing)
    g0 = g0_root(gamma, sensing, k_sigma)
    mi = m_inf(cfg, sensing, case, k_sigma)
    mp = mi if g0 is None else _smallest_m_with_margin(g0, cfg, case, k_sigma)
    return PlanResult(m_inf=mi, m_pd=max(mp, mi), g0=g0, gamma=gamma)


def m_for_target_pd(cfg: ChannelConfig, sensing: SensingConfig, case: GainCase,
                    target, gamma: float | None = None) -> int:
    """Smallest M whose analytical P_d meets the target.

    Exponential bracket then integer bisection; P_d is assumed monotone in M
    and the assumption is spot-checked at the bracket endpoints.
    """
    if not (0.0 < target < 1.0):
        raise ValueError("target must be in (0, 1)")
    if gamma is None:
        gamma = detection_threshold(sensing)

    def pd_at(M):
        return analytical_pd(gain_dist(cfg.with_m(M), case), sensing, gamma=gamma)

    if pd_at(0) >= target:
        return 0
    lo, hi = 0, 1
    while pd_at(hi) < target:
        lo, hi = hi, hi * 2
        if hi > _M_CAP:
            raise InfeasiblePlanError(f"P_d never reaches {target} for M <= {_M_CAP}")
    if pd_at(hi) < pd_at(lo):
        raise RuntimeError("P_d not monotone across the search bracket")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pd_at(mid) >= target:
            hi = mid
        else:
            lo = mid
    return hi
