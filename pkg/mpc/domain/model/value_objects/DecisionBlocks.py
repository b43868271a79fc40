"""
cvxpy variables of the online problem, grouped the way the consensus
splitting shares them: shared blocks w_j = (x_j(0..T), x_ej, alpha_j, c_j) and
non-shared local blocks v_i.
"""
from dataclasses import dataclass

import cvxpy as cp
import numpy as np

from mpc.domain.model.value_objects.OcpVariant import OcpVariant


@dataclass(frozen=True, eq=False)
class SharedBlock:
    id: int
    x: cp.Variable
    xe: cp.Variable | None
    alpha: cp.Variable
    c: cp.Variable

    @classmethod
    def create(cls, j: int, n: int, T: int, variant: OcpVariant, owner: int | None = None) -> "SharedBlock":
        suffix = "" if owner is None else f"@{owner}"
        return cls(
            id=j,
            x=cp.Variable((T + 1, n), name=f"x_{j}{suffix}"),
            xe=cp.Variable(n, name=f"xe_{j}{suffix}") if variant.tracks_reference else None,
            alpha=cp.Variable(name=f"alpha_{j}{suffix}"),
            c=cp.Variable(n, name=f"c_{j}{suffix}"),
        )

    def parts(self) -> list[cp.Variable]:
        parts = [self.x]
        if self.xe is not None:
            parts.append(self.xe)
        return parts + [self.alpha, self.c]

    def flatten(self) -> cp.Expression:
        """Row-major stacking, matching SharingLayout"""
        return cp.hstack([cp.reshape(p, (p.size,), order="C") for p in self.parts()])

    @staticmethod
    def size(n: int, T: int, variant: OcpVariant) -> int:
        return (T + 1) * n + (n if variant.tracks_reference else 0) + 1 + n

    @staticmethod
    def unflatten(vector: np.ndarray, n: int, T: int, variant: OcpVariant) -> dict[str, np.ndarray]:
        vector = np.asarray(vector, dtype=float)
        out, offset = {}, 0
        out["x"] = vector[offset:offset + (T + 1) * n].reshape(T + 1, n)
        offset += (T + 1) * n
        if variant.tracks_reference:
            out["xe"] = vector[offset:offset + n]
            offset += n
        out["alpha"] = np.array(vector[offset])
        offset += 1
        out["c"] = vector[offset:offset + n]
        return out

    @staticmethod
    def pack(values: dict[str, np.ndarray], variant: OcpVariant) -> np.ndarray:
        parts = [np.asarray(values["x"], dtype=float).reshape(-1)]
        if variant.tracks_reference:
            parts.append(np.asarray(values["xe"], dtype=float).reshape(-1))
        parts.append(np.atleast_1d(np.asarray(values["alpha"], dtype=float)))
        parts.append(np.asarray(values["c"], dtype=float).reshape(-1))
        return np.concatenate(parts)


@dataclass(frozen=True, eq=False)
class LocalBlock:
    """Non-shared variables v_i of one subsystem"""
    id: int
    u: cp.Variable
    ue: cp.Variable | None = None
    d: cp.Variable | None = None
    lam: cp.Variable | None = None
    b: cp.Variable | None = None
    rho: cp.Variable | None = None
    sigma: cp.Variable | None = None
    tau: cp.Variable | None = None

    @classmethod
    def create(cls, i: int, n: int, m: int, T: int, n_neighbors: int, q: int, r: int,
               variant: OcpVariant, owner: int | None = None) -> "LocalBlock":
        suffix = "" if owner is None else f"@{owner}"
        u = cp.Variable((T, m), name=f"u_{i}{suffix}")
        if variant is OcpVariant.APP:
            return cls(
                id=i,
                u=u,
                rho=cp.Variable(n_neighbors, name=f"rho_{i}{suffix}"),
                sigma=cp.Variable((q, n_neighbors), name=f"sigma_{i}{suffix}") if q else None,
                tau=cp.Variable((r, n_neighbors), name=f"tau_{i}{suffix}") if r else None,
            )
        return cls(
            id=i,
            u=u,
            ue=cp.Variable(m, name=f"ue_{i}{suffix}"),
            d=cp.Variable(m, name=f"d_{i}{suffix}"),
            lam=cp.Variable(n_neighbors, name=f"lam_{i}{suffix}"),
            b=cp.Variable(n, name=f"b_{i}{suffix}") if variant is OcpVariant.DST_DD else None,
        )

    def named(self) -> dict[str, cp.Variable]:
        """Variables keyed by their role"""
        return {
            role: var
            for role, var in (
                ("u", self.u), ("ue", self.ue), ("d", self.d), ("lam", self.lam), ("b", self.b),
                ("rho", self.rho), ("sigma", self.sigma), ("tau", self.tau),
            )
            if var is not None
        }
