"""Largest eigenvalue of Hermitian positive semidefinite band matrices.

Matrices are held in LAPACK lower band storage: ``ab[k, j] = G[j + k, j]``
for ``0 <= k <= b``. The routines here return Rayleigh quotients, which are
rigorous lower bounds for the top eigenvalue up to rounding, and a
definiteness test that certifies upper bounds.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from scipy.linalg import eigh
from scipy.linalg.lapack import zpbtrf, zpbtrs

__all__ = [
    "band_from_sparse",
    "band_matvec",
    "band_to_dense",
    "is_positive_definite",
    "shifted_factor",
    "top_eigen",
]

_DENSE_LIMIT = 192


def band_from_sparse(G: sp.spmatrix, bandwidth: int) -> np.ndarray:
    """Extract the lower band of a Hermitian sparse matrix."""
    G = sp.csr_matrix(G)
    n = G.shape[0]
    ab = np.zeros((bandwidth + 1, n), dtype=complex, order="F")
    for k in range(min(bandwidth, n - 1) + 1):
        ab[k, : n - k] = G.diagonal(-k)
    return ab


def band_to_dense(ab: np.ndarray) -> np.ndarray:
    b1, n = ab.shape
    G = np.zeros((n, n), dtype=complex)
    idx = np.arange(n)
    for k in range(min(b1, n)):
        G[idx[: n - k] + k, idx[: n - k]] = ab[k, : n - k]
        if k:
            G[idx[: n - k], idx[: n - k] + k] = np.conj(ab[k, : n - k])
    return G


def band_matvec(ab: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Return ``G @ v`` for the Hermitian band matrix ``G``."""
    n = ab.shape[1]
    y = ab[0].real * v
    for k in range(1, min(ab.shape[0], n)):
        d = ab[k, : n - k]
        y[k:] += d * v[: n - k]
        y[: n - k] += np.conj(d) * v[k:]
    return y


def shifted_factor(ab: np.ndarray, sigma: float):
    """Cholesky factor of ``sigma*I - G`` or ``None`` when not definite."""
    m = -ab
    m[0] += sigma
    c, info = zpbtrf(np.asfortranarray(m), lower=1)
    if info != 0:
        return None
    return c


def is_positive_definite(ab: np.ndarray) -> bool:
    _, info = zpbtrf(np.asfortranarray(ab), lower=1)
    return info == 0


def _rayleigh(ab, v):
    return float(np.vdot(v, band_matvec(ab, v)).real / np.vdot(v, v).real)


def top_eigen(ab: np.ndarray, v0: np.ndarray | None = None,
              rtol: float = 1e-14, max_iter: int = 400, hint: float | None = None,
              atol: float = 0.0):
    """Top eigenpair estimate of a PSD band matrix.

    Returns ``(rho, v)`` with ``rho`` the Rayleigh quotient of the unit
    vector ``v``, hence ``rho <= lambda_max``. Small matrices use a dense
    solver; larger ones use shift-invert iteration with a shift that is
    certified to lie above the spectrum by a successful Cholesky factorization.
    ``hint`` is an estimate of how far the top eigenvalue lies above the
    Rayleigh quotient of ``v0``. Iteration stops once a step gains less
    than ``max(rtol * scale, atol)``.
    """
    n = ab.shape[1]
    if n <= _DENSE_LIMIT or v0 is None:
        if n > 4 * _DENSE_LIMIT:
            raise ValueError("a starting vector is required for large bands")
        w, V = eigh(band_to_dense(ab), subset_by_index=[n - 1, n - 1])
        v = V[:, 0]
        return _rayleigh(ab, v), v

    v = np.asarray(v0, dtype=complex)
    v = v / np.linalg.norm(v)
    rho = _rayleigh(ab, v)
    scale = max(abs(rho), float(np.max(np.abs(ab[0]))), 1e-300)
    delta = max(abs(rho) * 1e-9, scale * 1e-13)
    if hint is not None and hint > 0:
        delta = max(delta, 0.5 * hint)
    chol = None
    for _ in range(80):
        chol = shifted_factor(ab, rho + delta)
        if chol is not None:
            break
        delta *= 4.0
    if chol is None:
        raise RuntimeError("no definite shift found")
    sigma = rho + delta

    prev_gain = None
    for it in range(max_iter):
        w, info = zpbtrs(chol, v, lower=1)
        if info != 0:
            raise RuntimeError("band solve failed")
        w = w / np.linalg.norm(w)
        rho_new = _rayleigh(ab, w)
        gain = rho_new - rho
        if rho_new >= rho:
            v, rho = w, rho_new
        if abs(gain) <= max(rtol * scale, atol):
            break
        # slow convergence means the shift sits far from the top eigenvalue
        # relative to the gap; move it closer when definiteness allows
        if prev_gain is not None and gain > 0.3 * prev_gain and sigma - rho > 4 * rtol * scale:
            trial = rho + (sigma - rho) / 16.0
            c2 = shifted_factor(ab, trial)
            if c2 is not None:
                chol, sigma = c2, trial
                prev_gain = None
                continue
        prev_gain = gain
    return rho, v
