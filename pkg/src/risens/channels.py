"""Channel ensembles (direct, LoS / Rayleigh / Rician RIS links) and phase design.

The direct link d is Rayleigh: d ~ CN(0, beta_d I_N).  The RIS links are
Rician with deterministic parts built from uniform-linear-array steering
vectors; kappa = 0 reduces to pure Rayleigh and kappa -> infinity (the `los`
flag) to the deterministic channels.  The reflecting-surface phases are
designed from the steering vectors alone (statistical CSI), which aligns the
LoS components coherently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .linalg import sample_complex_gaussian, sample_complex_gaussian_matrix
from .rng import RngStream


@dataclass(frozen=True)
class ChannelConfig:
    """Ensemble parameters for (d, f, G).

    Path losses are linear (not dB).  kappa_f / kappa_G are Rician factors;
    set los=True for the pure line-of-sight ensemble (kappa -> infinity is
    represented by the flag, not a large float, to avoid cancellation in
    beta/(kappa+1)).  M = 0 means no RIS.
    """

    N: int
    M: int
    beta_d: float
    beta_f: float = 0.0
    beta_G: float = 0.0
    kappa_f: float = 0.0
    kappa_G: float = 0.0
    los: bool = False
    theta_f_aoa: float = 0.0
    theta_G_aoa: float = 0.0
    theta_G_aod: float = 0.0
    spacing: float = 0.5  # element spacing in wavelengths

    def __post_init__(self):
        if self.N < 1 or self.M < 0:
            raise ValueError("need N >= 1 and M >= 0")
        if min(self.beta_d, self.beta_f, self.beta_G) < 0:
            raise ValueError("path losses must be >= 0")
        if min(self.kappa_f, self.kappa_G) < 0:
            raise ValueError("Rician factors must be >= 0")
        if self.spacing <= 0:
            raise ValueError("spacing must be > 0")

    def with_m(self, M: int) -> "ChannelConfig":
        return replace(self, M=int(M))


@dataclass(frozen=True)
class ChannelRealization:
    d: np.ndarray  # (N,)
    f: np.ndarray  # (M,)
    G: np.ndarray  # (N, M)


def steering_vector(length, angle, spacing=0.5):
    """ULA steering vector: element k = exp(j 2 pi spacing k sin(angle))."""
    if length < 1:
        raise ValueError("length must be >= 1")
    k = np.arange(length)
    return np.exp(2j * np.pi * spacing * k * math.sin(angle))


def _steering_triplet(cfg: ChannelConfig):
    a_f = steering_vector(cfg.M, cfg.theta_f_aoa, cfg.spacing) if cfg.M else np.zeros(0, complex)
    a_G = steering_vector(cfg.N, cfg.theta_G_aoa, cfg.spacing)
    b_G = steering_vector(cfg.M, cfg.theta_G_aod, cfg.spacing) if cfg.M else np.zeros(0, complex)
    return a_f, a_G, b_G


def sample_channels(cfg: ChannelConfig, rng: RngStream | np.random.Generator) -> ChannelRealization:
    """Draw one (d, f, G) realization from the configured ensemble."""
    gen = rng.generator() if isinstance(rng, RngStream) else rng
    d = sample_complex_gaussian(cfg.N, cfg.beta_d, gen)
    a_f, a_G, b_G = _steering_triplet(cfg)
    if cfg.M == 0:
        return ChannelRealization(d=d, f=np.zeros(0, complex), G=np.zeros((cfg.N, 0), complex))
    if cfg.los:
        f = math.sqrt(cfg.beta_f) * a_f
        G = math.sqrt(cfg.beta_G) * np.outer(a_G, b_G.conj())
        return ChannelRealization(d=d, f=f, G=G)
    bf_bar = cfg.beta_f * cfg.kappa_f / (cfg.kappa_f + 1.0)
    bf_til = cfg.beta_f / (cfg.kappa_f + 1.0)
    bG_bar = cfg.beta_G * cfg.kappa_G / (cfg.kappa_G + 1.0)
    bG_til = cfg.beta_G / (cfg.kappa_G + 1.0)
    f = math.sqrt(bf_bar) * a_f + sample_complex_gaussian(cfg.M, bf_til, gen)
    G = math.sqrt(bG_bar) * np.outer(a_G, b_G.conj()) \
        + sample_complex_gaussian_matrix((cfg.N, cfg.M), bG_til, gen)
    return ChannelRealization(d=d, f=f, G=G)


def statistical_phase_design(cfg: ChannelConfig) -> np.ndarray:
    """Phases phi_i = -angle(conj(b_G(i)) a_f(i)): coherent combining of the LoS parts.

    Depends only on angles and spacing; for the steering vectors it achieves
    b_G^H diag(e^{j phi}) a_f = M exactly (the cascade inner product is
    sum_i conj(b_G(i)) e^{j phi_i} a_f(i)).
    """
    a_f, _, b_G = _steering_triplet(cfg)
    return np.mod(-np.angle(b_G.conj() * a_f), 2.0 * np.pi)


def random_phase_design(M, rng: RngStream | np.random.Generator) -> np.ndarray:
    """I.i.d. uniform phases on [0, 2 pi)."""
    gen = rng.generator() if isinstance(rng, RngStream) else rng
    return gen.uniform(0.0, 2.0 * np.pi, size=M)


def effective_gain(real: ChannelRealization, phases: np.ndarray) -> float:
    """Equivalent channel gain ||d + G diag(e^{j phi}) f||^2 (||d||^2 when M=0)."""
    M = real.f.shape[0]
    if real.G.shape != (real.d.shape[0], M) or phases.shape != (M,):
        raise ValueError(
            f"dimension mismatch: d{real.d.shape}, f{real.f.shape}, "
            f"G{real.G.shape}, phases{phases.shape}"
        )
    if M == 0:
        return float(np.sum(np.abs(real.d) ** 2))
    h = real.d + real.G @ (np.exp(1j * phases) * real.f)
    return float(np.sum(np.abs(h) ** 2))
