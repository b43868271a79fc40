import logging
from collections.abc import Mapping

import cvxpy as cp
import numpy as np

from networkmodel.domain.model.aggregates.NetworkModel import NetworkModel
from networkmodel.domain.model.exceptions.NetworkErrors import SchemaError
from optimization.domain.model.aggregates.ConicProgram import ConicProgram
from optimization.domain.model.value_objects.SolveStatus import SolveStatus
from optimization.domain.services.ConicSolver import ConicSolver
from optimization.domain.services.MatrixFactors import psd_sqrt
from optimization.domain.services.PsdCheck import check_psd
from terminal.domain.model.aggregates.TerminalIngredients import (
    SubsystemCertificate,
    SubsystemIngredients,
    SynthesisCertificate,
    TerminalIngredients,
)
from terminal.domain.model.exceptions.TerminalErrors import SynthesisInfeasibleError, SynthesisNumericalError
from terminal.domain.model.value_objects.LmiLifting import LmiLifting
from terminal.domain.services.InvarianceVerifier import DecreaseReport, verify_decrease

logger = logging.getLogger(__name__)

DEFAULT_EPSILON = 1e-6


class SynthesisServiceImpl:
    """
    Offline synthesis of terminal costs P_i = E_i^{-1} and gains K_i = Y_i E_{N_i}^{-1}.
    One centralized SDP maximizing sum_i trace(E_i) subject to, per subsystem,

        [[X_i,           (A E_N + B Y)',  (Q^{1/2} E_N)',  (R^{1/2} Y)'],
         [A E_N + B Y,   E_i,             0,               0           ],
         [Q^{1/2} E_N,   0,               I,               0           ],
         [R^{1/2} Y,     0,               0,               I           ]]  >= 0

    with X_i = W_ii' E_i W_ii + Gamma_i (or E_N + Gamma_i), E_i >= eps_i I,
    Gamma_i <= Theta_i (Theta_i block diagonal over the neighborhood) and, for
    every i, the i-blocks of Theta_j summed over j in N_i negative semidefinite.
    """

    def __init__(self, solver: ConicSolver, lifting: LmiLifting = LmiLifting.OWN_BLOCK):
        self._solver = solver
        self._lifting = lifting

    def build_program(
            self,
            model: NetworkModel,
            epsilon: Mapping[int, float],
            lifting: LmiLifting | None = None,
    ) -> tuple[ConicProgram, dict]:
        lifting = lifting or self._lifting
        program = ConicProgram(name="terminal_synthesis")
        E = {i: cp.Variable((model.subsystem(i).n,) * 2, symmetric=True, name=f"E_{i}") for i in model.ids}
        Y, Gamma, Theta = {}, {}, {}

        for i in model.ids:
            sub = model.subsystem(i)
            n_N = sub.n_neighborhood
            Y[i] = cp.Variable((sub.m, n_N), name=f"Y_{i}")
            Gamma[i] = cp.Variable((n_N, n_N), symmetric=True, name=f"Gamma_{i}")
            Theta[i] = {
                j: cp.Variable((model.subsystem(j).n,) * 2, symmetric=True, name=f"Theta_{i}_{j}")
                for j in model.neighbors(i)
            }

        for i in model.ids:
            sub = model.subsystem(i)
            n_N = sub.n_neighborhood
            W = {j: model.selector(i, j) for j in model.neighbors(i)}
            E_N = sum(W[j].T @ E[j] @ W[j] for j in model.neighbors(i))
            if lifting is LmiLifting.OWN_BLOCK:
                X = W[i].T @ E[i] @ W[i] + Gamma[i]
            else:
                X = E_N + Gamma[i]

            AE = sub.A @ E_N + sub.B @ Y[i]
            QE = psd_sqrt(sub.Q) @ E_N
            RY = psd_sqrt(sub.R) @ Y[i]
            n, m = sub.n, sub.m
            lmi = cp.bmat([
                [X, AE.T, QE.T, RY.T],
                [AE, E[i], np.zeros((n, n_N)), np.zeros((n, m))],
                [QE, np.zeros((n_N, n)), np.eye(n_N), np.zeros((n_N, m))],
                [RY, np.zeros((m, n)), np.zeros((m, n_N)), np.eye(m)],
            ])
            program.add_psd(f"decrease_{i}", lmi)
            program.add_psd(f"epsilon_{i}", E[i] - epsilon[i] * np.eye(n))

            Theta_i = sum(W[j].T @ Theta[i][j] @ W[j] for j in model.neighbors(i))
            program.add_psd(f"relaxation_{i}", Theta_i - Gamma[i])
            program.add_psd(f"coupling_{i}", -sum(Theta[j][i] for j in model.neighbors(i)))

        program.set_objective(-sum(cp.trace(E[i]) for i in model.ids))
        return program, {"E": E, "Y": Y, "Gamma": Gamma, "Theta": Theta}

    @staticmethod
    def _epsilons(model: NetworkModel, epsilon: float | Mapping[int, float] | None) -> dict[int, float]:
        if epsilon is None:
            epsilon = DEFAULT_EPSILON
        if isinstance(epsilon, Mapping):
            values = {i: float(epsilon[i]) for i in model.ids}
        else:
            values = {i: float(epsilon) for i in model.ids}
        if any(v <= 0 for v in values.values()):
            raise ValueError("Every epsilon must be positive")
        return values

    def synthesize(
            self,
            model: NetworkModel,
            epsilon: float | Mapping[int, float] | None = None,
            lifting: LmiLifting | None = None,
    ) -> TerminalIngredients:
        lifting = lifting or self._lifting
        if model.continuous:
            raise SchemaError("Terminal synthesis needs a discrete-time network; discretize it first")
        eps = self._epsilons(model, epsilon)

        logger.info(f"Starting terminal synthesis for {model.M} subsystems ({lifting.value} lifting)...")
        program, _ = self.build_program(model, eps, lifting)
        result = self._solver.solve(program)

        if result.status is SolveStatus.INFEASIBLE:
            logger.error("✗ Terminal synthesis infeasible")
            raise SynthesisInfeasibleError(
                "No distributed terminal cost and gain satisfy the synthesis LMIs for this network"
            )
        if not result.has_incumbent or result.status is not SolveStatus.OPTIMAL:
            logger.error(f"✗ Terminal synthesis failed with status {result.status.value}")
            raise SynthesisNumericalError(f"Terminal synthesis ended with status {result.status.value}")

        subsystems, certificates = [], []
        for i in model.ids:
            E_i = result.value(f"E_{i}")
            E_i = (E_i + E_i.T) / 2
            E_N = sum(
                model.selector(i, j).T @ result.value(f"E_{j}") @ model.selector(i, j)
                for j in model.neighbors(i)
            )
            try:
                P_i = np.linalg.inv(E_i)
                K_i = result.value(f"Y_{i}") @ np.linalg.inv(E_N)
            except np.linalg.LinAlgError as e:
                raise SynthesisNumericalError(f"Synthesis returned a singular E for subsystem {i}: {e}")
            subsystems.append(SubsystemIngredients(id=i, P=(P_i + P_i.T) / 2, K=K_i, epsilon=eps[i]))
            certificates.append(self._certificate(program, model, result, i))

        certificate = SynthesisCertificate(
            lifting=lifting,
            objective=-float(result.objective),
            solver=result.stats.solver,
            subsystems=tuple(certificates),
        )
        logger.info(
            f"✓ Terminal synthesis solved: sum trace(E) = {certificate.objective:.6g}, "
            f"worst LMI violation {certificate.max_lmi_violation:.2e}"
        )
        return TerminalIngredients(subsystems=tuple(subsystems), certificate=certificate)

    @staticmethod
    def _certificate(program: ConicProgram, model: NetworkModel, result, i: int) -> SubsystemCertificate:
        def min_eig(name: str) -> float:
            expr = program.constraint(name).constraint.args[0]
            return check_psd(np.asarray(expr.value, dtype=float), tol=0.0).min_eigenvalue

        return SubsystemCertificate(
            id=i,
            E=result.value(f"E_{i}"),
            Y=result.value(f"Y_{i}"),
            Gamma=result.value(f"Gamma_{i}"),
            Theta={j: result.value(f"Theta_{i}_{j}") for j in model.neighbors(i)},
            lmi_min_eigenvalue=min_eig(f"decrease_{i}"),
            relaxation_min_eigenvalue=min_eig(f"relaxation_{i}"),
            coupling_max_eigenvalue=-min_eig(f"coupling_{i}"),
        )

    @staticmethod
    def verify_ingredients(
            model: NetworkModel,
            ingredients: TerminalIngredients,
            n_samples: int,
            seed: int,
    ) -> DecreaseReport:
        return verify_decrease(model, ingredients, n_samples, np.random.default_rng(seed))
