import io

import numpy as np
import pytest

from risens import tracy_widom as tw
from risens.detector import SensingConfig, tw_normalize
from risens.mc import ExperimentSpec, Hypothesis, statistic_bank
from risens.channels import ChannelConfig

# literature values for the F2 law (Tracy-Widom order 2)
LIT_MEAN = -1.771087
LIT_VAR = 0.813195


@pytest.fixture(scope="module")
def table():
    return tw.default_table()


@pytest.fixture(scope="module")
def null_sample():
    # normalized top-eigenvalue draws under pure noise, N=512
    sens = SensingConfig(N=512, c=0.01, alpha=0.1)
    ch = ChannelConfig(N=512, M=0, beta_d=1.0)
    spec = ExperimentSpec(sens, ch, trials=20_000, master_seed=404)
    t, _ = statistic_bank(spec, Hypothesis.H0)
    return np.asarray(tw_normalize(t, sens))


def test_table_invariants(table):
    assert np.all(np.diff(table.grid) > 0)
    assert np.all(np.diff(table.cdf) > 0)
    assert table.cdf[0] < 1e-8
    assert table.cdf[-1] > 1.0 - 1e-8


def test_cdf_tails(table):
    assert tw.tw2_cdf(-10.0, table) == pytest.approx(0.0, abs=1e-8)
    assert tw.tw2_cdf(6.0, table) == pytest.approx(1.0, abs=1e-8)
    assert tw.tw2_cdf(-50.0, table) == 0.0
    assert tw.tw2_cdf(50.0, table) == 1.0


def test_cdf_monotone(table):
    s = np.linspace(-10.0, 6.0, 4001)
    vals = np.array([tw.tw2_cdf(x, table) for x in s])
    assert np.all(np.diff(vals) >= 0)
    assert vals.min() >= 0.0 and vals.max() <= 1.0


def test_quantile_roundtrip_on_grid(table):
    for s0 in table.grid[100:-100:200]:
        p = tw.tw2_cdf(s0, table)
        assert tw.tw2_quantile(p, table) == pytest.approx(s0, abs=1e-9)


def test_quantile_inverse_consistency(table):
    for p in (0.1, 0.5, 0.9, 0.99):
        q = tw.tw2_quantile(p, table)
        assert tw.tw2_cdf(q, table) == pytest.approx(p, abs=1e-6)


def test_quantile_domain(table):
    for p in (0.0, 1.0, -0.5, 1.5):
        with pytest.raises(ValueError):
            tw.tw2_quantile(p, table)


def test_known_quantiles(table):
    # literature: F2^-1(0.95) = -0.2325, F2^-1(0.99) = 0.4776
    assert tw.tw2_quantile(0.95, table) == pytest.approx(-0.2325, abs=2e-3)
    assert tw.tw2_quantile(0.99, table) == pytest.approx(0.4776, abs=2e-3)


def test_table_moments(table):
    s, F = table.grid, table.cdf
    pdf = np.gradient(F, s)
    mean = np.trapezoid(s * pdf, s)
    var = np.trapezoid(s * s * pdf, s) - mean**2
    assert mean == pytest.approx(LIT_MEAN, abs=5e-4)
    assert var == pytest.approx(LIT_VAR, abs=5e-3)


def test_cdf_against_monte_carlo(table, null_sample):
    # sup distance between the table CDF and the empirical null CDF
    z = np.sort(null_sample)
    emp = np.arange(1, len(z) + 1) / len(z)
    model = np.array([tw.tw2_cdf(x, table) for x in z])
    assert np.max(np.abs(emp - model)) < 0.03


def test_percentile_against_monte_carlo(table, null_sample):
    q90 = np.quantile(null_sample, 0.90)
    assert tw.tw2_cdf(q90, table) == pytest.approx(0.90, abs=0.01)
    med = tw.tw2_quantile(0.5, table)
    assert abs(med - np.median(null_sample)) < 0.05


def test_generate_small_table():
    small = tw.generate_tw2_table(256)
    assert len(small.grid) == 256
    for p in (0.05, 0.5, 0.9):
        assert tw.tw2_quantile(p, small) == pytest.approx(
            tw.tw2_quantile(p), abs=1e-5)


def test_generate_rejects_low_resolution():
    with pytest.raises(ValueError):
        tw.generate_tw2_table(100)


def test_table_io_roundtrip(table):
    buf = io.StringIO()
    tw.write_table(table, buf)
    buf.seek(0)
    back = tw.read_table(buf)
    assert np.array_equal(back.grid, table.grid)
    assert np.array_equal(back.cdf, table.cdf)
    assert back.provenance == table.provenance


def test_corrupt_table_rejected(table):
    cdf = table.cdf.copy()
    cdf[10], cdf[11] = cdf[11], cdf[10]  # break monotonicity
    with pytest.raises(ValueError):
        tw.Tw2Table(grid=table.grid, cdf=cdf, provenance="broken")
