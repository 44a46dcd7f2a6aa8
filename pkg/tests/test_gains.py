import math

import numpy as np
import pytest

from risens.channels import ChannelConfig
from risens.gains import (GainCase, cascade_dist_rayleigh, cascade_dist_rician,
                          cascade_second_moment, component_slots, gain_dist,
                          gain_dist_direct, gain_dist_los, gain_dist_rayleigh,
                          gain_dist_rician, quadratic_form_clt_variance,
                          rician_component_expectation, rician_equivalents)
from risens.rng import RngStream

# the simulation regime: N beta_d = -20 dB, beta_f beta_G = -60 dB
BD = 0.01 / 64


def _cfg(M, **kw):
    base = dict(N=64, M=M, beta_d=BD, beta_f=1e-3, beta_G=1e-3)
    base.update(kw)
    return ChannelConfig(**base)


def test_direct_zero_pathloss():
    law = gain_dist_direct(ChannelConfig(N=16, M=0, beta_d=0.0))
    assert (law.mean, law.variance) == (0.0, 0.0)


def test_direct_values():
    law = gain_dist_direct(_cfg(0))
    assert law.mean == pytest.approx(0.01, rel=1e-12)
    assert law.variance == pytest.approx(64 * 1.5625e-4**2, rel=1e-12)
    assert law.variance == pytest.approx(1.5625e-6, rel=1e-12)


def test_los_m_zero_falls_back_to_direct():
    law = gain_dist_los(_cfg(0, los=True))
    direct = gain_dist_direct(_cfg(0))
    assert (law.mean, law.variance) == (direct.mean, direct.variance)


def test_los_values():
    law = gain_dist_los(_cfg(40, los=True))
    assert law.mean == pytest.approx(0.1124, rel=1e-12)
    assert law.variance == pytest.approx(3.2e-5, rel=1e-12)


def test_rayleigh_cascade_values():
    law = cascade_dist_rayleigh(_cfg(500))
    assert law.mean == pytest.approx(0.032, rel=1e-12)
    assert law.variance == pytest.approx(1.8048e-5, rel=1e-12)
    zero = cascade_dist_rayleigh(_cfg(0))
    assert (zero.mean, zero.variance) == (0.0, 0.0)


def test_rayleigh_gain_values():
    law = gain_dist_rayleigh(_cfg(500))
    assert law.mean == pytest.approx(0.042, rel=1e-12)
    beta_r = math.sqrt(282_000) * 1e-6
    assert law.variance == pytest.approx(64 * (1.5625e-4 + beta_r) ** 2, rel=1e-12)
    assert law.variance == pytest.approx(3.0232e-5, rel=1e-4)


def test_rayleigh_gain_no_cascade_is_direct():
    law = gain_dist_rayleigh(_cfg(500, beta_f=0.0))
    direct = gain_dist_direct(_cfg(500))
    assert (law.mean, law.variance) == (direct.mean, direct.variance)


def test_rician_cascade_kappa_zero_equals_rayleigh():
    for M, N in ((3, 2), (40, 64), (500, 64)):
        cfg = ChannelConfig(N=N, M=M, beta_d=BD, beta_f=2e-3, beta_G=5e-4)
        ray = cascade_dist_rayleigh(cfg)
        ric = cascade_dist_rician(cfg)
        assert ric.mean == pytest.approx(ray.mean, rel=1e-14)
        assert ric.variance == pytest.approx(ray.variance, rel=1e-14)


def test_rician_cascade_los_limit():
    cfg = _cfg(40, los=True)
    law = cascade_dist_rician(cfg)
    assert law.mean == pytest.approx(40**2 * 64 * 1e-6, rel=1e-12)
    assert law.variance == 0.0


def test_rician_equivalents_limits():
    eq = rician_equivalents(2.0, 2.0**2 / 16, 16)  # v = mu^2/N: pure scatter
    assert eq.hbar_sq == pytest.approx(0.0, abs=1e-12)
    assert eq.sigma_h_sq == pytest.approx(2.0 / 16, rel=1e-12)
    eq = rician_equivalents(2.0, 0.0, 16)  # v = 0: pure deterministic
    assert eq.hbar_sq == pytest.approx(2.0, rel=1e-12)
    assert eq.sigma_h_sq == pytest.approx(0.0, abs=1e-15)


def test_rician_equivalents_mean_preserved_and_clamp():
    eq = rician_equivalents(1.7, 0.09, 8)
    assert 8 * eq.sigma_h_sq + eq.hbar_sq == pytest.approx(1.7, rel=1e-12)
    assert not eq.clamped
    clamped = rician_equivalents(1.0, 10.0, 8)  # v > mu^2/N
    assert clamped.clamped and clamped.hbar_sq == 0.0
    with pytest.raises(ValueError):
        rician_equivalents(-1.0, 0.1, 8)


def test_rician_gain_kappa_zero_mean_matches_rayleigh():
    cfg = _cfg(500)
    ric = gain_dist_rician(cfg)
    ray = gain_dist_rayleigh(cfg)
    assert ric.mean == pytest.approx(ray.mean, rel=1e-12)


def test_rician_gain_los_limit_equals_los_law():
    cfg = _cfg(40, los=True)
    ric = gain_dist_rician(cfg)
    los = gain_dist_los(cfg)
    assert (ric.mean, ric.variance) == (los.mean, los.variance)


def test_gain_dist_dispatch():
    cfg = _cfg(40, kappa_f=5.0, kappa_G=5.0)
    assert gain_dist(cfg, GainCase.RICIAN).case is GainCase.RICIAN
    assert gain_dist(_cfg(0), GainCase.RICIAN).case is GainCase.DIRECT
    assert gain_dist(cfg, GainCase.LOS).mean == gain_dist_los(cfg).mean


def test_quadratic_form_identity():
    assert quadratic_form_clt_variance(np.eye(16)) == pytest.approx(1.0, rel=1e-12)
    assert quadratic_form_clt_variance(np.zeros((8, 8))) == 0.0


def test_quadratic_form_rejects_non_hermitian():
    A = np.arange(16.0).reshape(4, 4)
    with pytest.raises(ValueError):
        quadratic_form_clt_variance(A)


def test_quadratic_form_against_monte_carlo():
    gen = RngStream(21, (0,)).generator()
    B = gen.standard_normal((8, 8, 2)) @ np.array([1, 1j])
    A = (B + B.conj().T) / 2.0
    M = 8
    draws = 1_000_000
    x = (gen.standard_normal((draws, M, 2)) @ np.array([1, 1j])) / math.sqrt(2.0)
    q = np.real(np.einsum("bi,ij,bj->b", x.conj(), A, x))
    mc_var = q.var(ddof=1)
    assert quadratic_form_clt_variance(A) * M == pytest.approx(mc_var, rel=0.02)


def test_component_expectation_values():
    assert rician_component_expectation(1, 40, 64) == pytest.approx(40**4 * 64**2)
    assert rician_component_expectation(1, 40, 64) == pytest.approx(1.048576e10)
    assert rician_component_expectation(16, 2, 2) == 32.0
    assert rician_component_expectation(6, 3, 5) == 2 * 9 * 25
    with pytest.raises(ValueError):
        rician_component_expectation(26, 4, 4)
    with pytest.raises(ValueError):
        component_slots(0)


def test_second_moment_reconstruction():
    gen = RngStream(22, (0,)).generator()
    for _ in range(20):
        cfg = ChannelConfig(N=int(gen.integers(2, 64)), M=int(gen.integers(2, 128)),
                            beta_d=0.0,
                            beta_f=float(10 ** gen.uniform(-4, 0)),
                            beta_G=float(10 ** gen.uniform(-4, 0)),
                            kappa_f=float(gen.uniform(0, 10)),
                            kappa_G=float(gen.uniform(0, 10)))
        law = cascade_dist_rician(cfg)
        recon_var = cascade_second_moment(cfg) - law.mean**2
        assert recon_var == pytest.approx(law.variance, rel=1e-10)


def test_all_variances_nonnegative():
    gen = RngStream(23, (0,)).generator()
    for _ in range(50):
        cfg = ChannelConfig(N=int(gen.integers(1, 64)), M=int(gen.integers(0, 256)),
                            beta_d=float(10 ** gen.uniform(-6, 0)),
                            beta_f=float(10 ** gen.uniform(-6, 0)),
                            beta_G=float(10 ** gen.uniform(-6, 0)),
                            kappa_f=float(gen.uniform(0, 20)),
                            kappa_G=float(gen.uniform(0, 20)))
        for case in GainCase:
            assert gain_dist(cfg, case).variance >= 0.0
