"""Maximum-eigenvalue detector: threshold, spiked law, and analytical P_d.

The false-alarm threshold is calibrated from the Tracy-Widom law of the null
largest eigenvalue; under the active hypothesis the statistic follows a
single-spike law whose branch depends on whether the equivalent gain g clears
the phase transition at sqrt(c).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import special, stats

from . import tracy_widom as tw
from .gains import GainDistribution
from .linalg import largest_eigenvalue

_GL_NODES = 256
_TAIL_SIGMAS = 8.0


@dataclass(frozen=True)
class SensingConfig:
    """Detector-side parameters: array size, sample count, false-alarm cap."""

    N: int
    c: float
    alpha: float
    sigma_u_sq: float = 1.0
    sigma_s_sq: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.c < 1.0):
            raise ValueError(f"need 0 < c < 1, got c={self.c}")
        if not (0.0 < self.alpha < 1.0):
            raise ValueError(f"need 0 < alpha < 1, got alpha={self.alpha}")
        if self.N < 1:
            raise ValueError("need N >= 1")
        if self.sigma_u_sq <= 0 or self.sigma_s_sq < 0:
            raise ValueError("need sigma_u_sq > 0 and sigma_s_sq >= 0")

    @property
    def n(self) -> int:
        return int(round(self.N / self.c))


class SpikeBranch(Enum):
    BULK_EDGE = "bulk_edge"
    SPIKED = "spiked"


@dataclass(frozen=True)
class SpikedLaw:
    branch: SpikeBranch
    mu_T: float | None = None
    v_T: float | None = None


class Decision(Enum):
    D0 = "D0"  # idle
    D1 = "D1"  # active


@dataclass(frozen=True)
class MedResult:
    decision: Decision
    statistic: float


def bulk_edge(c) -> float:
    return (1.0 + math.sqrt(c)) ** 2


def tw_normalize(t, cfg: SensingConfig):
    """Map the statistic to the Tracy-Widom scale of the null law."""
    sc = math.sqrt(cfg.c)
    return cfg.N ** (2.0 / 3.0) * (np.asarray(t) - bulk_edge(cfg.c)) / ((1.0 + sc) ** (4.0 / 3.0) * sc)


def detection_threshold(cfg: SensingConfig, table: tw.Tw2Table | None = None) -> float:
    """Threshold gamma meeting P(T > gamma | idle) = alpha asymptotically."""
    sc = math.sqrt(cfg.c)
    q = tw.tw2_quantile(1.0 - cfg.alpha, table)
    return cfg.N ** (-2.0 / 3.0) * (1.0 + sc) ** (4.0 / 3.0) * sc * q + bulk_edge(cfg.c)


def spiked_law(g, cfg: SensingConfig) -> SpikedLaw:
    """Asymptotic law of the statistic given gain g (spike strength tau = g+1).

    g <= sqrt(c) (boundary included: the spiked variance degenerates there)
    stays on the bulk edge; above it the statistic is Gaussian with
    mu_T = g + 1 + c + c/g and v_T = ((g+1)^2/n)(1 - c/g^2).
    """
    if g < 0:
        raise ValueError("g must be >= 0")
    c = cfg.c
    if g <= math.sqrt(c):
        return SpikedLaw(SpikeBranch.BULK_EDGE)
    mu = g + 1.0 + c + c / g
    v = ((g + 1.0) ** 2 / cfg.n) * (1.0 - c / (g * g))
    return SpikedLaw(SpikeBranch.SPIKED, mu_T=mu, v_T=max(v, 0.0))


def med_decide(samples, gamma, cfg: SensingConfig, tol=1e-10) -> MedResult:
    """Run the detector on an explicit N x n sample block."""
    t = largest_eigenvalue(samples, tol=tol) / cfg.sigma_u_sq
    return MedResult(Decision.D1 if t > gamma else Decision.D0, t)


def _q_function(x):
    return 0.5 * special.erfc(x / math.sqrt(2.0))


def _tail_prob_given_g(g, gamma, cfg: SensingConfig):
    """P(T > gamma | g) for g above the transition (vectorized)."""
    g = np.asarray(g, dtype=float)
    c, n = cfg.c, cfg.n
    mu = g + 1.0 + c + c / g
    v = np.maximum(((g + 1.0) ** 2 / n) * (1.0 - c / (g * g)), 0.0)
    sd = np.sqrt(v)
    out = np.where(mu > gamma, 1.0, 0.0)  # degenerate v -> indicator
    ok = sd > 0
    out = np.where(ok, _q_function((gamma - mu) / np.where(ok, sd, 1.0)), out)
    return out


def analytical_pd(dist: GainDistribution, cfg: SensingConfig,
                  gamma: float | None = None, nodes=_GL_NODES) -> float:
    """Detection probability for a Gaussian gain law.

    P_d = alpha P(g < sqrt(c)) + int_{sqrt(c)}^inf P(T > gamma | g) p(g) dg,
    with the inner probability in closed form (Gaussian upper tail) and the
    outer integral by Gauss-Legendre on [max(sqrt(c), mu-8s), mu+8s].
    """
    if gamma is None:
        gamma = detection_threshold(cfg)
    sc = math.sqrt(cfg.c)
    mu, sd = dist.mean, dist.std
    if sd == 0.0:
        # point mass at mu
        if mu <= sc:
            return cfg.alpha
        return float(_tail_prob_given_g(mu, gamma, cfg))
    p_below = float(stats.norm.cdf((sc - mu) / sd))
    lo = max(sc, mu - _TAIL_SIGMAS * sd)
    hi = mu + _TAIL_SIGMAS * sd
    if hi <= lo:
        return cfg.alpha * p_below
    # the inner tail probability steps from 0 to 1 over a width ~ (g+1)/sqrt(n)
    # around the g solving mu_T(g) = gamma; split the panel there so the
    # quadrature resolves it
    b = 1.0 + cfg.c - gamma
    disc = b * b - 4.0 * cfg.c
    breaks = [lo, hi]
    if disc > 0:
        g_star = 0.5 * (-b + math.sqrt(disc))
        if lo < g_star < hi:
            breaks = [lo, g_star, hi]
    x, w = np.polynomial.legendre.leggauss(nodes)
    integral = 0.0
    for a, bnd in zip(breaks[:-1], breaks[1:]):
        gg = 0.5 * (bnd - a) * x + 0.5 * (bnd + a)
        ww = 0.5 * (bnd - a) * w
        dens = np.exp(-0.5 * ((gg - mu) / sd) ** 2) / (sd * math.sqrt(2.0 * math.pi))
        integral += float(np.sum(ww * _tail_prob_given_g(gg, gamma, cfg) * dens))
    return cfg.alpha * p_below + integral
