from dataclasses import dataclass

import numpy as np

from networkmodel.domain.model.aggregates.NetworkModel import NetworkModel
from terminal.domain.model.aggregates.TerminalIngredients import TerminalIngredients


def dd_margin(matrix: np.ndarray) -> np.ndarray:
    """Diagonal minus absolute off-diagonal row sum, per row"""
    diag = np.diag(matrix)
    return diag - (np.sum(np.abs(matrix), axis=1) - np.abs(diag))


@dataclass(frozen=True, eq=False)
class TerminalGeometry:
    """
    Constants of subsystem i's online terminal constraints
    Everything here depends on the model and the offline ingredients only
    """
    id: int
    neighbors: tuple[int, ...]
    n: int
    m: int
    n_neighborhood: int
    W: dict[int, np.ndarray]
    masks: dict[int, np.ndarray]
    A: np.ndarray
    B: np.ndarray
    K: np.ndarray
    A_K: np.ndarray
    P: np.ndarray
    P_sqrt: np.ndarray
    P_inv: np.ndarray
    P_lifted: dict[int, np.ndarray]
    P_inv_sqrt: dict[int, np.ndarray]
    P_neighbors: dict[int, np.ndarray]
    G: np.ndarray
    g: np.ndarray
    Hc: np.ndarray
    hc: np.ndarray
    HcK: np.ndarray
    state_norms: np.ndarray
    input_norms: np.ndarray
    P_inv_dd: np.ndarray
    A_K_abs: np.ndarray
    P_lifted_dd: dict[int, np.ndarray]

    @classmethod
    def build(cls, model: NetworkModel, ingredients: TerminalIngredients, i: int) -> "TerminalGeometry":
        sub = model.subsystem(i)
        own = ingredients.of(i)
        neighbors = model.neighbors(i)
        W = {j: model.selector(i, j) for j in neighbors}
        P_lifted = {j: W[j].T @ ingredients.of(j).P @ W[j] for j in neighbors}
        P_inv_sqrt = {j: ingredients.of(j).P_inv_sqrt for j in neighbors}
        A_K = sub.A + sub.B @ own.K
        HcK = sub.Hc @ own.K

        state_norms = np.array([
            [np.linalg.norm(sub.G[k] @ W[j].T @ P_inv_sqrt[j]) for j in neighbors]
            for k in range(sub.q)
        ]).reshape(sub.q, len(neighbors))
        input_norms = np.array([
            [np.linalg.norm(HcK[l] @ W[j].T @ P_inv_sqrt[j]) for j in neighbors]
            for l in range(sub.r)
        ]).reshape(sub.r, len(neighbors))

        return cls(
            id=i,
            neighbors=neighbors,
            n=sub.n,
            m=sub.m,
            n_neighborhood=sub.n_neighborhood,
            W=W,
            masks={j: W[j].sum(axis=0) for j in neighbors},
            A=sub.A,
            B=sub.B,
            K=own.K,
            A_K=A_K,
            P=own.P,
            P_sqrt=own.P_sqrt,
            P_inv=own.P_inv,
            P_lifted=P_lifted,
            P_inv_sqrt=P_inv_sqrt,
            P_neighbors={j: ingredients.of(j).P for j in neighbors},
            G=sub.G,
            g=sub.g,
            Hc=sub.Hc,
            hc=sub.hc,
            HcK=HcK,
            state_norms=state_norms,
            input_norms=input_norms,
            P_inv_dd=dd_margin(own.P_inv),
            A_K_abs=np.abs(A_K),
            P_lifted_dd={j: dd_margin(P) for j, P in P_lifted.items()},
        )

    @property
    def q(self) -> int:
        return self.G.shape[0]

    @property
    def r(self) -> int:
        return self.Hc.shape[0]

    def position(self, j: int) -> int:
        return self.neighbors.index(j)

    def unit(self, j: int) -> np.ndarray:
        e = np.zeros(len(self.neighbors))
        e[self.position(j)] = 1.0
        return e


def build_geometries(model: NetworkModel, ingredients: TerminalIngredients) -> dict[int, TerminalGeometry]:
    return {i: TerminalGeometry.build(model, ingredients, i) for i in model.ids}
