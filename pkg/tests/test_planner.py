import math

import pytest

from risens.channels import ChannelConfig
from risens.detector import SensingConfig, detection_threshold
from risens.gains import GainCase, gain_dist
from risens.planner import (InfeasiblePlanError, f_of_g, g0_root, g_margin,
                            m_for_target_pd, m_inf, m_pd, plan)
from risens.rng import RngStream

SENS = SensingConfig(N=64, c=0.01, alpha=0.1)


def _cfg(M=0, **kw):
    base = dict(N=64, M=M, beta_d=0.01 / 64, beta_f=1e-3, beta_G=1e-3,
                kappa_f=5.0, kappa_G=5.0)
    base.update(kw)
    return ChannelConfig(**base)


def test_margin_no_elements():
    # direct path only: mu - 3 sigma with mu = 0.01, sigma = sqrt(64) beta_d
    margin = g_margin(0, _cfg(), GainCase.RICIAN)
    assert margin == pytest.approx(0.01 - 3.0 * 8.0 * 0.01 / 64, rel=1e-12)


def test_margin_los_example():
    dist = gain_dist(_cfg(40, los=True), GainCase.LOS)
    expect = dist.mean - 3.0 * dist.std
    assert g_margin(40, _cfg(40), GainCase.LOS) == pytest.approx(expect, rel=1e-12)
    assert expect == pytest.approx(0.09543, abs=5e-5)


def test_f_continuity_at_transition():
    sc = math.sqrt(SENS.c)
    # the three-sigma term scales like sqrt(g - sqrt(c)) near the transition
    val = f_of_g(sc * (1.0 + 1e-9), SENS)
    assert abs(val - (1.0 + sc) ** 2) < 1e-5


def test_f_value():
    # g=0.2: mu_T - 3 sqrt(v_T) = 1.26 - 3 sqrt(1.6875e-4)
    expect = 1.26 - 3.0 * math.sqrt(1.6875e-4)
    assert f_of_g(0.2, SENS) == pytest.approx(expect, rel=1e-12)


def test_f_domain():
    with pytest.raises(ValueError):
        f_of_g(0.05, SENS)
    with pytest.raises(ValueError):
        f_of_g(math.sqrt(SENS.c), SENS)


def test_g0_root_certificate():
    gamma = detection_threshold(SENS)
    root = g0_root(gamma, SENS)
    assert root is not None
    assert abs(f_of_g(root, SENS) - gamma) < 1e-9
    # larger root: f is increasing there
    assert f_of_g(root * 1.01, SENS) > gamma


def test_g0_none_when_threshold_below_min():
    # an artificially low gamma that f never dips to
    assert g0_root(0.5, SENS) is None


def test_m_inf_certificate():
    mi = m_inf(_cfg(), SENS, GainCase.RICIAN)
    sc = math.sqrt(SENS.c)
    assert g_margin(mi, _cfg(), GainCase.RICIAN) >= sc
    assert g_margin(mi - 1, _cfg(), GainCase.RICIAN) < sc


def test_bisection_matches_linear_scan():
    gen = RngStream(31, (0,)).generator()
    for _ in range(20):
        cfg = _cfg(beta_f=float(10 ** gen.uniform(-3.5, -2.5)),
                   beta_G=float(10 ** gen.uniform(-3.5, -2.5)),
                   kappa_f=float(gen.uniform(0.5, 10)),
                   kappa_G=float(gen.uniform(0.5, 10)))
        target = float(gen.uniform(0.05, 0.3))
        by_search = None
        for M in range(0, 2000):
            if g_margin(M, cfg, GainCase.RICIAN) >= target:
                by_search = M
                break
        if by_search is None:
            continue
        from risens.planner import _smallest_m_with_margin
        assert _smallest_m_with_margin(target, cfg, GainCase.RICIAN, 3.0) == by_search


def test_plan_ordering_and_fields():
    res = plan(_cfg(), SENS, GainCase.RICIAN)
    assert res.m_inf <= res.m_pd
    assert res.gamma == pytest.approx(detection_threshold(SENS), rel=1e-12)
    assert res.g0 is not None and res.g0 > math.sqrt(SENS.c)
    assert res.m_pd == m_pd(_cfg(), SENS, GainCase.RICIAN)
    assert res.m_inf == m_inf(_cfg(), SENS, GainCase.RICIAN)


def test_baseline_regime_values():
    res = plan(_cfg(), SENS, GainCase.RICIAN)
    assert res.m_inf == 54
    assert res.m_pd == 71


def test_target_alpha_is_free():
    # the false-alarm floor is met with no elements at all
    assert m_for_target_pd(_cfg(), SENS, GainCase.RICIAN, 0.05) == 0


def test_target_certificate():
    from risens.detector import analytical_pd
    gamma = detection_threshold(SENS)
    m = m_for_target_pd(_cfg(), SENS, GainCase.RICIAN, 0.9)
    at = analytical_pd(gain_dist(_cfg(m), GainCase.RICIAN), SENS, gamma)
    below = analytical_pd(gain_dist(_cfg(m - 1), GainCase.RICIAN), SENS, gamma)
    assert at >= 0.9 > below


def test_target_monotone():
    ms = [m_for_target_pd(_cfg(), SENS, GainCase.RICIAN, t)
          for t in (0.5, 0.8, 0.9, 0.99)]
    assert all(b >= a for a, b in zip(ms, ms[1:]))


def test_target_domain():
    for bad in (0.0, 1.0, -0.1, 1.1):
        with pytest.raises(ValueError):
            m_for_target_pd(_cfg(), SENS, GainCase.RICIAN, bad)


def test_infeasible_raises():
    # no reflect path and a hopeless direct margin: the margin never grows
    cfg = _cfg(beta_f=0.0, beta_G=0.0)
    with pytest.raises(InfeasiblePlanError):
        m_inf(cfg, SENS, GainCase.RICIAN)
