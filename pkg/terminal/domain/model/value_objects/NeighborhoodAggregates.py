from dataclasses import dataclass

import numpy as np

from networkmodel.domain.model.aggregates.NetworkModel import NetworkModel
from terminal.domain.model.aggregates.TerminalIngredients import TerminalIngredients
from terminal.domain.model.value_objects.TerminalSetParams import TerminalSetParams


@dataclass(frozen=True, eq=False)
class NeighborhoodAggregates:
    """
    Value Object: terminal data of a neighborhood in lifted coordinates
    alpha_N = sum_j alpha_j W_ij' W_ij, c_N = sum_j W_ij' c_j, P_ij = W_ij' P_j W_ij
    """
    alpha_N: np.ndarray
    c_N: np.ndarray
    P_ij: dict[int, np.ndarray]

    @classmethod
    def of(cls, model: NetworkModel, ingredients: TerminalIngredients, params: TerminalSetParams, i: int):
        alpha_N = np.zeros((model.neighborhood_dim(i),) * 2)
        c_N = np.zeros(model.neighborhood_dim(i))
        P_ij = {}
        for j in model.neighbors(i):
            W = model.selector(i, j)
            alpha_N += params.of(j).alpha * (W.T @ W)
            c_N += W.T @ params.of(j).c
            P_ij[j] = W.T @ ingredients.of(j).P @ W
        return cls(alpha_N=alpha_N, c_N=c_N, P_ij=P_ij)

    @property
    def P_N(self) -> np.ndarray:
        return sum(self.P_ij.values())
