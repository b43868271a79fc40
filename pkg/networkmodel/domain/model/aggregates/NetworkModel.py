import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping

import numpy as np
from scipy.linalg import block_diag
from scipy.optimize import linprog

from networkmodel.domain.model.exceptions.NetworkErrors import (
    SchemaError,
    DimensionError,
    ConventionError,
    MissingNeighborError,
)

logger = logging.getLogger(__name__)

SPD_TOL = 1e-9


def _frozen_array(value, name: str, ndim: int) -> np.ndarray:
    try:
        array = np.array(value, dtype=float)
    except (TypeError, ValueError):
        raise SchemaError(f"{name} is not numeric")
    if array.ndim != ndim:
        raise DimensionError(f"{name} must be {ndim}-dimensional, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise SchemaError(f"{name} has non-finite entries")
    array.setflags(write=False)
    return array


def _require_spd(matrix: np.ndarray, name: str) -> None:
    if matrix.shape[0] != matrix.shape[1]:
        raise DimensionError(f"{name} must be square, got {matrix.shape}")
    if not np.allclose(matrix, matrix.T, atol=SPD_TOL, rtol=0.0):
        raise SchemaError(f"{name} must be symmetric")
    if np.linalg.eigvalsh(matrix).min() <= SPD_TOL:
        raise SchemaError(f"{name} must be positive definite")


@dataclass(frozen=True, eq=False)
class SubsystemModel:
    """
    Entity: one subsystem of the coupled network
    Dynamics x_i+ = A_i x_{N_i} + B_i u_i, polytopes G_i x_{N_i} <= g_i and
    Hc_i u_i <= hc_i, cost weights Q_i (neighborhood), R_i and S_i (offset)
    """
    id: int
    A: np.ndarray
    B: np.ndarray
    G: np.ndarray
    g: np.ndarray
    Hc: np.ndarray
    hc: np.ndarray
    Q: np.ndarray
    R: np.ndarray
    S: np.ndarray

    def __post_init__(self):
        label = f"subsystem {self.id}"
        for name in ("A", "B", "G", "Hc", "Q", "R", "S"):
            object.__setattr__(self, name, _frozen_array(getattr(self, name), f"{name} of {label}", 2))
        for name in ("g", "hc"):
            object.__setattr__(self, name, _frozen_array(getattr(self, name), f"{name} of {label}", 1))

        if self.A.shape[0] != self.B.shape[0]:
            raise DimensionError(f"A and B of {label} have different row counts")
        if self.B.shape[1] == 0 or not np.any(self.B):
            raise SchemaError(f"B of {label} has no input channel; input-free subsystems are not supported")
        if self.G.shape[1] != self.A.shape[1]:
            raise DimensionError(f"G of {label} must have {self.A.shape[1]} columns")
        if self.G.shape[0] != self.g.shape[0]:
            raise DimensionError(f"G and g of {label} have different row counts")
        if self.Hc.shape[1] != self.m:
            raise DimensionError(f"Hc of {label} must have {self.m} columns")
        if self.Hc.shape[0] != self.hc.shape[0]:
            raise DimensionError(f"Hc and hc of {label} have different row counts")
        if self.Q.shape != (self.n_neighborhood, self.n_neighborhood):
            raise DimensionError(f"Q of {label} must be {self.n_neighborhood}x{self.n_neighborhood}")
        if self.R.shape != (self.m, self.m):
            raise DimensionError(f"R of {label} must be {self.m}x{self.m}")
        if self.S.shape != (self.n, self.n):
            raise DimensionError(f"S of {label} must be {self.n}x{self.n}")
        _require_spd(self.Q, f"Q of {label}")
        _require_spd(self.R, f"R of {label}")
        _require_spd(self.S, f"S of {label}")
        self._require_nonempty(self.G, self.g, f"state polytope of {label}")
        self._require_nonempty(self.Hc, self.hc, f"input polytope of {label}")

    @staticmethod
    def _require_nonempty(lhs: np.ndarray, rhs: np.ndarray, name: str) -> None:
        if lhs.shape[0] == 0:
            return
        result = linprog(
            c=np.zeros(lhs.shape[1]),
            A_ub=lhs,
            b_ub=rhs,
            bounds=[(None, None)] * lhs.shape[1],
            method="highs",
        )
        if result.status == 2:
            raise SchemaError(f"The {name} is empty")

    @property
    def n(self) -> int:
        return self.B.shape[0]

    @property
    def m(self) -> int:
        return self.B.shape[1]

    @property
    def q(self) -> int:
        return self.G.shape[0]

    @property
    def r(self) -> int:
        return self.Hc.shape[0]

    @property
    def n_neighborhood(self) -> int:
        return self.A.shape[1]

    def equals(self, other: "SubsystemModel") -> bool:
        """Field-wise equality (arrays compared exactly)"""
        if self.id != other.id:
            return False
        return all(
            np.array_equal(getattr(self, name), getattr(other, name))
            for name in ("A", "B", "G", "g", "Hc", "hc", "Q", "R", "S")
        )


@dataclass(frozen=True, eq=False)
class NetworkModel:
    """
    Aggregate Root: coupled-subsystem network
    Immutable after construction; neighborhoods are ordered by ascending id and
    the selectors W_ij are derived from that order.
    """
    subsystems: tuple[SubsystemModel, ...]
    neighbor_sets: tuple[tuple[int, ...], ...]
    horizon: int
    continuous: bool = False
    sampling_time: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "subsystems", tuple(self.subsystems))
        object.__setattr__(self, "neighbor_sets", tuple(tuple(int(j) for j in n) for n in self.neighbor_sets))

        if not self.subsystems:
            raise SchemaError("A network needs at least one subsystem")
        if [s.id for s in self.subsystems] != list(range(1, len(self.subsystems) + 1)):
            raise SchemaError("Subsystem ids must be 1..M in order")
        if len(self.neighbor_sets) != len(self.subsystems):
            raise SchemaError("One neighbor list per subsystem is required")
        if int(self.horizon) < 1:
            raise SchemaError("The horizon must be a positive integer")
        if self.sampling_time is not None and self.sampling_time <= 0:
            raise SchemaError("The sampling time must be positive")

        for i, neighbors in zip(self.ids, self.neighbor_sets):
            if i not in neighbors:
                raise ConventionError(f"Subsystem {i} must belong to its own neighborhood")
            if list(neighbors) != sorted(set(neighbors)):
                raise ConventionError(f"Neighbors of subsystem {i} must be listed in ascending order without repeats")
            unknown = [j for j in neighbors if j not in self.ids]
            if unknown:
                raise ConventionError(f"Subsystem {i} lists unknown neighbors {unknown}")
            for j in neighbors:
                if i not in self.neighbor_sets[j - 1]:
                    raise ConventionError(f"{j} is a neighbor of {i} but {i} is not a neighbor of {j}")

        for subsystem in self.subsystems:
            expected = sum(self.subsystem(j).n for j in self.neighbors(subsystem.id))
            if subsystem.n_neighborhood != expected:
                raise DimensionError(
                    f"A of subsystem {subsystem.id} has {subsystem.n_neighborhood} columns, "
                    f"its neighborhood has dimension {expected}"
                )

    # =========================================================================
    # STRUCTURE
    # =========================================================================

    @property
    def M(self) -> int:
        return len(self.subsystems)

    @property
    def ids(self) -> tuple[int, ...]:
        return tuple(range(1, len(self.subsystems) + 1))

    @property
    def T(self) -> int:
        return int(self.horizon)

    def subsystem(self, i: int) -> SubsystemModel:
        return self.subsystems[i - 1]

    def neighbors(self, i: int) -> tuple[int, ...]:
        return self.neighbor_sets[i - 1]

    def neighborhood_dim(self, i: int) -> int:
        return self.subsystem(i).n_neighborhood

    def neighborhood_slices(self, i: int) -> dict[int, slice]:
        """Position of each x_j inside x_{N_i}"""
        slices, offset = {}, 0
        for j in self.neighbors(i):
            n_j = self.subsystem(j).n
            slices[j] = slice(offset, offset + n_j)
            offset += n_j
        return slices

    @cached_property
    def _selectors(self) -> dict[tuple[int, int], np.ndarray]:
        selectors = {}
        for i in self.ids:
            n_neighborhood = self.neighborhood_dim(i)
            for j, block in self.neighborhood_slices(i).items():
                W = np.zeros((self.subsystem(j).n, n_neighborhood))
                W[:, block] = np.eye(self.subsystem(j).n)
                W.setflags(write=False)
                selectors[(i, j)] = W
        return selectors

    def selector(self, i: int, j: int) -> np.ndarray:
        """Binary W_ij with W_ij x_{N_i} = x_j"""
        try:
            return self._selectors[(i, j)]
        except KeyError:
            raise MissingNeighborError(f"{j} is not a neighbor of {i}")

    def lift(self, family: Mapping[int, np.ndarray], i: int) -> np.ndarray:
        """Stack {x_j : j in N_i} into x_{N_i}"""
        missing = [j for j in self.neighbors(i) if j not in family]
        if missing:
            raise MissingNeighborError(f"Lifting for subsystem {i} is missing blocks {missing}")
        blocks = []
        for j in self.neighbors(i):
            block = np.asarray(family[j], dtype=float).reshape(-1)
            if block.shape[0] != self.subsystem(j).n:
                raise DimensionError(f"Block {j} must have {self.subsystem(j).n} entries")
            blocks.append(block)
        return np.concatenate(blocks)

    def stage_cost(self, i: int, x_neighborhood, u, x_eq_neighborhood, u_eq) -> float:
        """||x_N - x_eN||^2_Q + ||u - u_e||^2_R for subsystem i"""
        subsystem = self.subsystem(i)
        dx = np.asarray(x_neighborhood, dtype=float).reshape(-1) - np.asarray(x_eq_neighborhood, dtype=float).reshape(-1)
        du = np.asarray(u, dtype=float).reshape(-1) - np.asarray(u_eq, dtype=float).reshape(-1)
        if dx.shape[0] != subsystem.n_neighborhood or du.shape[0] != subsystem.m:
            raise DimensionError(
                f"Stage cost of subsystem {i} expects {subsystem.n_neighborhood} states and {subsystem.m} inputs"
            )
        return float(dx @ subsystem.Q @ dx + du @ subsystem.R @ du)

    # =========================================================================
    # GLOBAL VIEW
    # =========================================================================

    @cached_property
    def state_slices(self) -> dict[int, slice]:
        slices, offset = {}, 0
        for s in self.subsystems:
            slices[s.id] = slice(offset, offset + s.n)
            offset += s.n
        return slices

    @cached_property
    def input_slices(self) -> dict[int, slice]:
        slices, offset = {}, 0
        for s in self.subsystems:
            slices[s.id] = slice(offset, offset + s.m)
            offset += s.m
        return slices

    @property
    def n_total(self) -> int:
        return sum(s.n for s in self.subsystems)

    @property
    def m_total(self) -> int:
        return sum(s.m for s in self.subsystems)

    def neighborhood_projection(self, i: int) -> np.ndarray:
        """Matrix L_i with x_{N_i} = L_i x"""
        L = np.zeros((self.neighborhood_dim(i), self.n_total))
        for j, block in self.neighborhood_slices(i).items():
            L[block, self.state_slices[j]] = np.eye(self.subsystem(j).n)
        return L

    @cached_property
    def global_dynamics(self) -> tuple[np.ndarray, np.ndarray]:
        """Global (A, B) assembled from the neighborhood rows"""
        A = np.zeros((self.n_total, self.n_total))
        B = np.zeros((self.n_total, self.m_total))
        for s in self.subsystems:
            rows = self.state_slices[s.id]
            A[rows, :] = s.A @ self.neighborhood_projection(s.id)
            B[rows, self.input_slices[s.id]] = s.B
        A.setflags(write=False)
        B.setflags(write=False)
        return A, B

    @cached_property
    def global_weights(self) -> tuple[np.ndarray, np.ndarray]:
        """Global stage weights: sum of lifted Q_i and block-diagonal R"""
        Q = np.zeros((self.n_total, self.n_total))
        for s in self.subsystems:
            L = self.neighborhood_projection(s.id)
            Q += L.T @ s.Q @ L
        R = block_diag(*[s.R for s in self.subsystems])
        return Q, R

    def split_state(self, x) -> dict[int, np.ndarray]:
        x = np.asarray(x, dtype=float).reshape(-1)
        if x.shape[0] != self.n_total:
            raise DimensionError(f"Global state must have {self.n_total} entries")
        return {i: x[block].copy() for i, block in self.state_slices.items()}

    def split_input(self, u) -> dict[int, np.ndarray]:
        u = np.asarray(u, dtype=float).reshape(-1)
        if u.shape[0] != self.m_total:
            raise DimensionError(f"Global input must have {self.m_total} entries")
        return {i: u[block].copy() for i, block in self.input_slices.items()}

    def stack_state(self, family: Mapping[int, np.ndarray]) -> np.ndarray:
        return np.concatenate([np.asarray(family[i], dtype=float).reshape(-1) for i in self.ids])

    def stack_input(self, family: Mapping[int, np.ndarray]) -> np.ndarray:
        return np.concatenate([np.asarray(family[i], dtype=float).reshape(-1) for i in self.ids])

    def propagate(self, x, u) -> np.ndarray:
        """One exact step of the plant: x+ = A x + B u"""
        A, B = self.global_dynamics
        return A @ np.asarray(x, dtype=float).reshape(-1) + B @ np.asarray(u, dtype=float).reshape(-1)

    def equilibrium_input(self, x_r) -> np.ndarray:
        """Input u_r making (x_r, u_r) an equilibrium, least squares if none exists"""
        A, B = self.global_dynamics
        x_r = np.asarray(x_r, dtype=float).reshape(-1)
        u_r, *_ = np.linalg.lstsq(B, x_r - A @ x_r, rcond=None)
        return u_r

    def equals(self, other: "NetworkModel") -> bool:
        """Field-wise equality used by the persistence round trip"""
        return (
            self.neighbor_sets == other.neighbor_sets
            and self.horizon == other.horizon
            and self.continuous == other.continuous
            and self.sampling_time == other.sampling_time
            and len(self.subsystems) == len(other.subsystems)
            and all(a.equals(b) for a, b in zip(self.subsystems, other.subsystems))
        )
