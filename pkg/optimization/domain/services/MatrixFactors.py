import numpy as np
from scipy.linalg import eigh

from optimization.domain.model.exceptions.OptimizationErrors import AsymmetryError


def symmetric_factors(P) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(P^{1/2}, P^{-1/2}, P^{-1}) of a symmetric PD matrix, all symmetric"""
    P = np.atleast_2d(np.asarray(P, dtype=float))
    if not np.allclose(P, P.T, atol=1e-10 * max(1.0, np.abs(P).max()), rtol=0.0):
        raise AsymmetryError("Matrix factors need a symmetric matrix")
    w, V = eigh((P + P.T) / 2)
    if w.min() <= 0:
        raise ValueError(f"Matrix is not positive definite (min eigenvalue {w.min():.3e})")
    root = np.sqrt(w)
    return (V * root) @ V.T, (V / root) @ V.T, (V / w) @ V.T


def psd_sqrt(M) -> np.ndarray:
    """Symmetric square root of a PSD matrix, tiny negative eigenvalues clipped"""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    w, V = eigh((M + M.T) / 2)
    return (V * np.sqrt(np.clip(w, 0.0, None))) @ V.T
