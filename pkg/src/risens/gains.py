"""Asymptotic Gaussian laws of the equivalent channel gain g = ||d + G Phi f||^2.

Covers the no-RIS direct law, the LoS / Rayleigh / Rician cascade and gain
laws, the equivalent-Rician parameter mapping, and the component-expectation
oracles used to cross-check the Rician cascade variance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .channels import ChannelConfig


class GainCase(Enum):
    DIRECT = "direct"
    LOS = "los"
    RAYLEIGH = "rayleigh"
    RICIAN = "rician"


@dataclass(frozen=True)
class GainDistribution:
    mean: float
    variance: float
    case: GainCase

    def __post_init__(self):
        if self.variance < 0:
            raise ValueError(f"variance must be >= 0, got {self.variance}")

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)


@dataclass(frozen=True)
class RicianEquivalents:
    """Equivalent Rician parameters (||hbar||^2, sigma_h^2) matching (mu_r, v_r)."""

    hbar_sq: float
    sigma_h_sq: float
    clamped: bool = False  # set when v_r > mu_r^2 / N forced hbar_sq to 0


def _beta_splits(cfg: ChannelConfig):
    bf_bar = cfg.beta_f * cfg.kappa_f / (cfg.kappa_f + 1.0)
    bf_til = cfg.beta_f / (cfg.kappa_f + 1.0)
    bG_bar = cfg.beta_G * cfg.kappa_G / (cfg.kappa_G + 1.0)
    bG_til = cfg.beta_G / (cfg.kappa_G + 1.0)
    if cfg.los:
        bf_bar, bf_til = cfg.beta_f, 0.0
        bG_bar, bG_til = cfg.beta_G, 0.0
    return bf_bar, bf_til, bG_bar, bG_til


def gain_dist_direct(cfg: ChannelConfig) -> GainDistribution:
    """No-RIS law of ||d||^2: mean N beta_d, variance N beta_d^2."""
    N, bd = cfg.N, cfg.beta_d
    return GainDistribution(N * bd, N * bd * bd, GainCase.DIRECT)


def gain_dist_los(cfg: ChannelConfig) -> GainDistribution:
    """Gain law under pure-LoS RIS links with the statistical phase design.

    M = 0 returns the direct law: the LoS variance expression degenerates to 0
    there, while the no-RIS baseline is exactly the direct law.
    """
    if cfg.M == 0:
        return gain_dist_direct(cfg)
    N, M, bd = cfg.N, cfg.M, cfg.beta_d
    bfg = cfg.beta_f * cfg.beta_G
    mean = N * bd + M * M * N * bfg
    var = 2.0 * M * M * N * bd * bfg
    return GainDistribution(mean, var, GainCase.LOS)


def cascade_dist_rayleigh(cfg: ChannelConfig) -> GainDistribution:
    """Law of the cascade gain r = ||G Phi f||^2 for Rayleigh links, random phases."""
    N, M = cfg.N, cfg.M
    bfg = cfg.beta_f * cfg.beta_G
    mean = M * N * bfg
    var = (M + N) * M * N * bfg * bfg
    return GainDistribution(mean, var, GainCase.RAYLEIGH)


def gain_dist_rayleigh(cfg: ChannelConfig) -> GainDistribution:
    """Gain law for Rayleigh RIS links via the surrogate-path-loss approximation.

    The cascade is replaced by an independent Rayleigh channel with per-antenna
    path loss beta_r = sqrt((M+N)M) beta_f beta_G chosen to match the cascade
    variance; the variance below inherits that modeling approximation.
    """
    if cfg.M == 0 or cfg.beta_f * cfg.beta_G == 0.0:
        return gain_dist_direct(cfg)
    N, M, bd = cfg.N, cfg.M, cfg.beta_d
    bfg = cfg.beta_f * cfg.beta_G
    beta_r = math.sqrt((M + N) * M) * bfg
    mean = N * bd + M * N * bfg
    var = N * (bd + beta_r) ** 2
    return GainDistribution(mean, var, GainCase.RAYLEIGH)


def cascade_dist_rician(cfg: ChannelConfig) -> GainDistribution:
    """Law of r = ||G Phi f||^2 for Rician links under the designed phases."""
    N, M = cfg.N, cfg.M
    fb, ft, Gb, Gt = _beta_splits(cfg)
    mean = M * M * N * fb * Gb + M * N * (ft * Gb + fb * Gt + ft * Gt)
    var = (
        2 * M**3 * N**2 * fb * ft * Gb**2
        + 2 * M**3 * N * fb**2 * Gb * Gt
        + (2 * M**3 * N + 4 * M**2 * N**2 + 4 * M**2 * N) * fb * ft * Gb * Gt
        + M**2 * N**2 * ft**2 * Gb**2
        + 2 * M**2 * N * ft**2 * Gb * Gt
        + 2 * (M + N) * M * N * fb * ft * Gt**2
        + (M + N) * M * N * ft**2 * Gt**2
    )
    return GainDistribution(mean, var, GainCase.RICIAN)


def rician_equivalents(mu_r, v_r, N) -> RicianEquivalents:
    """Map cascade moments (mu_r, v_r) to equivalent Rician (||hbar||^2, sigma_h^2).

    Preserves the mean exactly: N sigma_h^2 + ||hbar||^2 = mu_r.  A negative
    radicand (v_r > mu_r^2/N) is clamped to the pure-scatter mapping and
    flagged.
    """
    if mu_r < 0 or v_r < 0:
        raise ValueError("mu_r and v_r must be >= 0")
    radicand = N * (mu_r * mu_r / N - v_r)
    clamped = radicand < 0
    hbar_sq = 0.0 if clamped else math.sqrt(radicand)
    sigma_h_sq = (mu_r - hbar_sq) / N
    return RicianEquivalents(hbar_sq=hbar_sq, sigma_h_sq=sigma_h_sq, clamped=clamped)


def gain_dist_rician(cfg: ChannelConfig) -> GainDistribution:
    """Gain law for Rician RIS links with the statistical phase design.

    Delegates to the LoS law when the los flag is set (the kappa -> infinity
    limit) and to the direct law when M = 0.
    """
    if cfg.M == 0:
        return gain_dist_direct(cfg)
    if cfg.los:
        return gain_dist_los(cfg)
    cas = cascade_dist_rician(cfg)
    eq = rician_equivalents(cas.mean, cas.variance, cfg.N)
    s = eq.sigma_h_sq + cfg.beta_d
    mean = cfg.N * s + eq.hbar_sq
    var = cfg.N * s * s + 2.0 * eq.hbar_sq * s
    return GainDistribution(mean, var, GainCase.RICIAN)


def gain_dist(cfg: ChannelConfig, case: GainCase) -> GainDistribution:
    """Dispatch to the case-appropriate law of g."""
    if case is GainCase.DIRECT or cfg.M == 0:
        return gain_dist_direct(cfg)
    if case is GainCase.LOS:
        return gain_dist_los(cfg)
    if case is GainCase.RAYLEIGH:
        return gain_dist_rayleigh(cfg)
    if case is GainCase.RICIAN:
        return gain_dist_rician(cfg)
    raise ValueError(f"unknown case {case}")


def quadratic_form_clt_variance(A, fourth_moment=2.0):
    """Normalized variance of the centered quadratic form x^H A x.

    For x with i.i.d. circular complex unit-variance entries,
    Var(x^H A x) = Tr(A^2) + sum_i A_ii^2 (E|x|^4 - 2) exactly at finite M;
    this returns that value divided by M (the scaling under which it converges
    to the spectral-moment expression).
    """
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("A must be square")
    if not np.allclose(A, A.conj().T, atol=1e-12 * max(1.0, float(np.abs(A).max(initial=0.0)))):
        raise ValueError("A must be Hermitian")
    M = A.shape[0]
    tr_a2 = float(np.real(np.trace(A @ A)))
    diag_term = float(np.sum(np.real(np.diag(A)) ** 2)) * (fourth_moment - 2.0)
    return (tr_a2 + diag_term) / M


# ---------------------------------------------------------------------------
# Component expectations of the squared Rician cascade (unit path losses,
# steering-vector deterministic parts, designed phases).  C_1..C_16 are the
# squared magnitudes of the 16 cross terms of ||G' Phi f'||^2; C_17..C_25 are
# the cross pairs with non-zero expectation (each counted twice in E[r^2]).
# ---------------------------------------------------------------------------

_COMPONENT_EXPECTATIONS = {
    1: lambda M, N: M**4 * N**2,
    2: lambda M, N: M**3 * N**2,
    3: lambda M, N: M**3 * N,
    4: lambda M, N: M**3 * N,
    5: lambda M, N: M**3 * N**2,
    6: lambda M, N: 2 * M**2 * N**2,
    7: lambda M, N: M**2 * N,
    8: lambda M, N: M**2 * N,
    9: lambda M, N: M**3 * N,
    10: lambda M, N: M**2 * N,
    11: lambda M, N: M**2 * N**2,
    12: lambda M, N: (M + N) * M * N,
    13: lambda M, N: M**3 * N,
    14: lambda M, N: M**2 * N,
    15: lambda M, N: (M + N) * M * N,
    16: lambda M, N: (M + N + M * N) * M * N,
    17: lambda M, N: M**3 * N**2,
    18: lambda M, N: M**3 * N**2,
    19: lambda M, N: M**3 * N**2,
    20: lambda M, N: M**2 * N**2,
    21: lambda M, N: M**2 * N**2,
    22: lambda M, N: M**2 * N**2,
    23: lambda M, N: M**2 * N**2,
    24: lambda M, N: M**2 * N**2,
    25: lambda M, N: M**2 * N,
}

# Each cascade cross term t_(a,b,c,d) = (f_a)^H Phi^H (G_b)^H (G_c) Phi (f_d)
# with a..d in {bar: 0, tilde: 1}; the 16 squares follow the expansion order
# (f-left, G-left, G-right, f-right).
_SQUARE_SLOTS = [
    (0, 0, 0, 0), (0, 0, 0, 1), (0, 0, 1, 0), (0, 0, 1, 1),
    (1, 0, 0, 0), (1, 0, 0, 1), (1, 0, 1, 0), (1, 0, 1, 1),
    (0, 1, 0, 0), (0, 1, 0, 1), (0, 1, 1, 0), (0, 1, 1, 1),
    (1, 1, 0, 0), (1, 1, 0, 1), (1, 1, 1, 0), (1, 1, 1, 1),
]
# non-zero cross pairs (index -> pair of cross-term slots)
_PAIR_SLOTS = {
    17: ((0, 0, 0, 0), (1, 0, 0, 1)),
    18: ((0, 0, 0, 0), (0, 1, 1, 0)),
    19: ((0, 0, 0, 0), (1, 1, 1, 1)),
    20: ((1, 0, 0, 1), (0, 1, 1, 0)),
    21: ((1, 0, 0, 1), (1, 1, 1, 1)),
    22: ((0, 1, 1, 0), (1, 1, 1, 1)),
    23: ((0, 0, 0, 1), (0, 1, 1, 1)),
    24: ((1, 0, 0, 0), (1, 1, 1, 0)),
    25: ((0, 1, 0, 0), (1, 1, 0, 1)),
}


def rician_component_expectation(index, M, N):
    """Closed-form E[C_index] at unit path losses (index in 1..25)."""
    if index not in _COMPONENT_EXPECTATIONS:
        raise ValueError(f"index must be in 1..25, got {index}")
    return float(_COMPONENT_EXPECTATIONS[index](M, N))


def component_slots(index):
    """The (f_a, G_b, G_c, f_d) bar/tilde slots of the pair making up C_index."""
    if 1 <= index <= 16:
        s = _SQUARE_SLOTS[index - 1]
        return s, s
    if index in _PAIR_SLOTS:
        return _PAIR_SLOTS[index]
    raise ValueError(f"index must be in 1..25, got {index}")


def _slot_coeff(slot, fb, ft, Gb, Gt):
    a, b, c, d = slot
    return math.sqrt((ft if a else fb) * (Gt if b else Gb) * (Gt if c else Gb) * (ft if d else fb))


def cascade_second_moment(cfg: ChannelConfig):
    """E[r^2] reconstructed from the 25 component expectations and beta splits."""
    M, N = cfg.M, cfg.N
    fb, ft, Gb, Gt = _beta_splits(cfg)
    total = 0.0
    for idx in range(1, 26):
        left, right = component_slots(idx)
        coeff = _slot_coeff(left, fb, ft, Gb, Gt) * _slot_coeff(right, fb, ft, Gb, Gt)
        weight = 1.0 if idx <= 16 else 2.0
        total += weight * coeff * rician_component_expectation(idx, M, N)
    return total
