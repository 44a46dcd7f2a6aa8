"""Complex Gaussian sampling and largest-eigenvalue computation.

The detector only ever needs the top eigenvalue of the N x N sample
covariance (1/n) X X^H, so we never form the covariance explicitly: power
iteration works through matrix-vector products with X and X^H, which costs
O(N n) per sweep instead of O(N^2 n) for forming the Gram matrix.
"""

from __future__ import annotations

import numpy as np

from .rng import RngStream

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 10_000


class PowerIterationError(RuntimeError):
    """Raised when power iteration fails to converge within the iteration cap."""

    def __init__(self, iterations: int, last_value: float):
        super().__init__(
            f"power iteration did not converge after {iterations} iterations "
            f"(last estimate {last_value:.6e})"
        )
        self.iterations = iterations
        self.last_value = last_value


def sample_complex_gaussian(length, variance, rng: RngStream | np.random.Generator):
    """Draw a circularly-symmetric complex Gaussian vector.

    Entries are i.i.d. CN(0, variance): real and imaginary parts independent,
    each with variance variance/2, so E|z_i|^2 = variance and E[z_i^2] = 0.
    """
    if variance < 0:
        raise ValueError(f"variance must be >= 0, got {variance}")
    gen = rng.generator() if isinstance(rng, RngStream) else rng
    if variance == 0.0:
        return np.zeros(length, dtype=complex)
    scale = np.sqrt(variance / 2.0)
    z = gen.standard_normal(2 * length).view(complex)
    return scale * z


def sample_complex_gaussian_matrix(shape, variance, gen: np.random.Generator):
    """Matrix version of :func:`sample_complex_gaussian` (row-major fill)."""
    if variance == 0.0:
        return np.zeros(shape, dtype=complex)
    n_entries = int(np.prod(shape))
    scale = np.sqrt(variance / 2.0)
    z = gen.standard_normal(2 * n_entries).view(complex)
    return scale * z.reshape(shape)


def largest_eigenvalue(samples, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER,
                       rng: np.random.Generator | None = None):
    """Largest eigenvalue of the sample covariance (1/n) X X^H.

    Parameters
    ----------
    samples : (N, n) complex ndarray
        Sample block, one received vector per column; requires N <= n.
    tol : float
        Relative tolerance on the Rayleigh-quotient estimate.
    max_iter : int
        Iteration cap; exceeding it raises PowerIterationError with the count.
    rng : optional Generator used only for the random start vector.

    Never forms the N x N covariance: each sweep is two products with X.
    """
    X = np.asarray(samples)
    if X.ndim != 2:
        raise ValueError("samples must be a 2-D array")
    N, n = X.shape
    if N > n:
        raise ValueError(f"need N <= n, got N={N}, n={n}")
    if tol <= 0:
        raise ValueError("tol must be > 0")

    if not np.any(X):
        return 0.0

    gen = rng if rng is not None else np.random.Generator(np.random.PCG64(0x5EED))
    v = gen.standard_normal(2 * N).view(complex)
    v /= np.linalg.norm(v)

    lam = 0.0
    hits = 0  # consecutive iterations meeting the tolerance
    for it in range(1, max_iter + 1):
        w = (X @ (X.conj().T @ v)) / n
        norm_w = np.linalg.norm(w)
        if norm_w == 0.0:
            # v landed in the null space; restart from a fresh direction
            v = gen.standard_normal(2 * N).view(complex)
            v /= np.linalg.norm(v)
            continue
        lam_new = float(np.real(np.vdot(v, w)))
        v = w / norm_w
        if abs(lam_new - lam) <= tol * abs(lam_new):
            hits += 1
            if hits >= 2:
                return lam_new
        else:
            hits = 0
        lam = lam_new
    raise PowerIterationError(max_iter, lam)


def largest_eigenvalue_dense(samples):
    """Dense-eigendecomposition oracle for small instances (independent path)."""
    X = np.asarray(samples)
    N, n = X.shape
    cov = (X @ X.conj().T) / n
    return float(np.linalg.eigvalsh(cov)[-1])
