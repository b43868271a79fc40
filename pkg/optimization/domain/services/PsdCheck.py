from dataclasses import dataclass

import numpy as np

from optimization.domain.model.exceptions.OptimizationErrors import AsymmetryError

SYMMETRY_TOL = 1e-10


@dataclass(frozen=True)
class PsdReport:
    is_psd: bool
    min_eigenvalue: float


def check_psd(matrix, tol: float = 1e-9) -> PsdReport:
    """PSD test by the smallest eigenvalue, lambda_min >= -tol"""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    if matrix.shape[0] != matrix.shape[1]:
        raise AsymmetryError(f"Matrix of shape {matrix.shape} is not square")
    if np.max(np.abs(matrix - matrix.T), initial=0.0) > SYMMETRY_TOL:
        raise AsymmetryError("Matrix is not symmetric within 1e-10")
    if matrix.size == 0:
        return PsdReport(is_psd=True, min_eigenvalue=np.inf)
    lam_min = float(np.linalg.eigvalsh((matrix + matrix.T) / 2).min())
    return PsdReport(is_psd=lam_min >= -tol, min_eigenvalue=lam_min)


def is_diagonally_dominant(matrix, tol: float = 0.0) -> bool:
    """Nonnegative diagonal dominating the absolute off-diagonal row sums"""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    diag = np.diag(matrix)
    off = np.sum(np.abs(matrix), axis=1) - np.abs(diag)
    return bool(np.all(diag >= -tol) and np.all(diag - off >= -tol))
