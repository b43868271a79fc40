from dataclasses import dataclass

import numpy as np

from networkmodel.domain.model.aggregates.NetworkModel import NetworkModel
from networkmodel.domain.model.exceptions.NetworkErrors import ConventionError


@dataclass(frozen=True)
class SparsityPattern:
    """
    Value Object: block pattern allowed in the global A
    Block (i, j) may be nonzero iff j is a neighbor of i
    """
    blocks: frozenset[tuple[int, int]]

    def __post_init__(self):
        ids = {i for i, _ in self.blocks} | {j for _, j in self.blocks}
        missing = [i for i in sorted(ids) if (i, i) not in self.blocks]
        if missing:
            raise ConventionError(f"Sparsity pattern lacks diagonal blocks for {missing}")

    @classmethod
    def of_network(cls, model: NetworkModel) -> "SparsityPattern":
        return cls(frozenset((i, j) for i in model.ids for j in model.neighbors(i)))

    @classmethod
    def block_diagonal(cls, model: NetworkModel) -> "SparsityPattern":
        return cls(frozenset((i, i) for i in model.ids))

    def mask(self, row_slices: dict[int, slice], col_slices: dict[int, slice]) -> np.ndarray:
        """Boolean mask of the allowed entries for the given block partition"""
        n_rows = max(s.stop for s in row_slices.values())
        n_cols = max(s.stop for s in col_slices.values())
        allowed = np.zeros((n_rows, n_cols), dtype=bool)
        for i, j in self.blocks:
            allowed[row_slices[i], col_slices[j]] = True
        return allowed

    def project(self, matrix, row_slices: dict[int, slice], col_slices: dict[int, slice]) -> np.ndarray:
        """Frobenius-closest matrix with this pattern: zero every entry outside it"""
        matrix = np.asarray(matrix, dtype=float)
        return np.where(self.mask(row_slices, col_slices), matrix, 0.0)
