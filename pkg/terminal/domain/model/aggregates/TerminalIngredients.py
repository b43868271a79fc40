import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from networkmodel.domain.model.aggregates.NetworkModel import NetworkModel
from optimization.domain.services.MatrixFactors import symmetric_factors
from terminal.domain.model.value_objects.LmiLifting import LmiLifting

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SubsystemIngredients:
    """
    Entity: terminal cost P_i and terminal gain K_i of one subsystem
    Symmetric factors of P_i are derived once at construction
    """
    id: int
    P: np.ndarray
    K: np.ndarray
    epsilon: float = 1e-6

    def __post_init__(self):
        P = np.atleast_2d(np.asarray(self.P, dtype=float))
        P = (P + P.T) / 2
        K = np.atleast_2d(np.asarray(self.K, dtype=float))
        for array in (P, K):
            array.setflags(write=False)
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "K", K)

    @cached_property
    def _factors(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        factors = symmetric_factors(self.P)
        for f in factors:
            f.setflags(write=False)
        return factors

    @property
    def P_sqrt(self) -> np.ndarray:
        return self._factors[0]

    @property
    def P_inv_sqrt(self) -> np.ndarray:
        return self._factors[1]

    @property
    def P_inv(self) -> np.ndarray:
        return self._factors[2]

    @property
    def n(self) -> int:
        return self.P.shape[0]


@dataclass(frozen=True, eq=False)
class SubsystemCertificate:
    """Synthesis variables of one subsystem and the slack of its LMIs"""
    id: int
    E: np.ndarray
    Y: np.ndarray
    Gamma: np.ndarray
    Theta: dict[int, np.ndarray]
    lmi_min_eigenvalue: float
    relaxation_min_eigenvalue: float
    coupling_max_eigenvalue: float


@dataclass(frozen=True, eq=False)
class SynthesisCertificate:
    """Audit trail of the offline synthesis"""
    lifting: LmiLifting
    objective: float
    solver: str
    subsystems: tuple[SubsystemCertificate, ...] = field(default_factory=tuple)

    @property
    def max_lmi_violation(self) -> float:
        """Worst violation over every LMI of the synthesis, 0 when all hold"""
        worst = 0.0
        for s in self.subsystems:
            worst = max(worst, -s.lmi_min_eigenvalue, -s.relaxation_min_eigenvalue, s.coupling_max_eigenvalue)
        return worst


@dataclass(frozen=True, eq=False)
class TerminalIngredients:
    """
    Aggregate Root: offline terminal ingredients of a network
    One SubsystemIngredients per subsystem, ordered by id
    """
    subsystems: tuple[SubsystemIngredients, ...]
    certificate: SynthesisCertificate | None = None

    def __post_init__(self):
        object.__setattr__(self, "subsystems", tuple(sorted(self.subsystems, key=lambda s: s.id)))

    def of(self, i: int) -> SubsystemIngredients:
        return self.subsystems[i - 1]

    def mismatches(self, model: NetworkModel) -> list[str]:
        """Reasons these ingredients cannot serve the model, empty when they fit"""
        problems = []
        if [s.id for s in self.subsystems] != list(model.ids):
            return [f"ingredients cover subsystems {[s.id for s in self.subsystems]}, network has {list(model.ids)}"]
        for s in self.subsystems:
            sub = model.subsystem(s.id)
            if s.P.shape != (sub.n, sub.n):
                problems.append(f"P_{s.id} is {s.P.shape}, expected {(sub.n, sub.n)}")
            if s.K.shape != (sub.m, sub.n_neighborhood):
                problems.append(f"K_{s.id} is {s.K.shape}, expected {(sub.m, sub.n_neighborhood)}")
        return problems

    def global_P(self, model: NetworkModel) -> np.ndarray:
        P = np.zeros((model.n_total, model.n_total))
        for s in self.subsystems:
            block = model.state_slices[s.id]
            P[block, block] = s.P
        return P

    def global_K(self, model: NetworkModel) -> np.ndarray:
        """Global gain with u = K x"""
        K = np.zeros((model.m_total, model.n_total))
        for s in self.subsystems:
            K[model.input_slices[s.id], :] = s.K @ model.neighborhood_projection(s.id)
        return K

    def closed_loop(self, model: NetworkModel) -> np.ndarray:
        A, B = model.global_dynamics
        return A + B @ self.global_K(model)
