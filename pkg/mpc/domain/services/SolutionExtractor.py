import logging

import numpy as np

from optimization.domain.model.value_objects.SolveStatus import SolveStatus
from mpc.domain.model.aggregates.OcpInstance import OcpInstance
from mpc.domain.model.exceptions.MpcErrors import DynamicsResidualError
from mpc.domain.model.value_objects.OcpVariant import OcpVariant
from mpc.domain.model.value_objects.TrajectorySolution import SubsystemTrajectory, TrajectorySolution
from mpc.domain.services.ObjectiveEvaluator import dynamics_residual, total_cost
from terminal.domain.model.value_objects.TerminalSetParams import SubsystemTerminalParams

logger = logging.getLogger(__name__)

DYNAMICS_TOL = 1e-6


def solution_from_values(
        instance: OcpInstance,
        values: dict[str, np.ndarray],
        status: SolveStatus,
        strict: bool = True,
        wall_time: float = 0.0,
        iterations: int | None = None,
) -> TrajectorySolution:
    """
    Build a TrajectorySolution from values keyed by the central variable names
    (x_j, xe_j, alpha_j, c_j, u_i, ue_i, d_i, lam_i, b_i, rho_i, sigma_i, tau_i).
    With strict, a dynamics residual above tolerance raises DynamicsResidualError.
    """
    model = instance.model
    tracking = instance.variant.tracks_reference
    trajectories, subsystems = {}, {}

    for i in model.ids:
        sub = model.subsystem(i)
        x = np.asarray(values[f"x_{i}"], dtype=float).reshape(model.T + 1, sub.n)
        u = np.asarray(values[f"u_{i}"], dtype=float).reshape(model.T, sub.m)
        xe = np.asarray(values[f"xe_{i}"], dtype=float) if tracking else np.zeros(sub.n)
        ue = np.asarray(values[f"ue_{i}"], dtype=float) if tracking else np.zeros(sub.m)
        trajectories[i] = {"x": x, "u": u, "xe": xe, "ue": ue}

    for i in model.ids:
        sub = model.subsystem(i)
        neighbors = model.neighbors(i)
        multiplier_name = f"lam_{i}" if tracking else f"rho_{i}"
        lam = np.clip(np.asarray(values[multiplier_name], dtype=float).reshape(-1), 0.0, None)
        b = None
        if instance.variant is OcpVariant.DST_DD:
            b = np.clip(np.asarray(values[f"b_{i}"], dtype=float).reshape(-1), 0.0, None)
        terminal = SubsystemTerminalParams(
            alpha=max(0.0, float(np.asarray(values[f"alpha_{i}"]).reshape(-1)[0])),
            c=np.asarray(values[f"c_{i}"], dtype=float),
            d=np.asarray(values[f"d_{i}"], dtype=float) if tracking else np.zeros(sub.m),
            lam={j: float(v) for j, v in zip(neighbors, lam)},
            b=b,
        )
        multipliers = {
            name: np.asarray(values[f"{name}_{i}"], dtype=float)
            for name in ("rho", "sigma", "tau")
            if f"{name}_{i}" in values
        }
        subsystems[i] = SubsystemTrajectory(
            id=i,
            x=trajectories[i]["x"],
            u=trajectories[i]["u"],
            xe=trajectories[i]["xe"],
            ue=trajectories[i]["ue"],
            terminal=terminal,
            multipliers=multipliers,
        )

    residual = dynamics_residual(model, trajectories)
    scale = 1.0 + max(float(np.max(np.abs(t["x"]))) for t in trajectories.values())
    if residual > DYNAMICS_TOL * scale:
        message = f"Extracted trajectory violates the dynamics by {residual:.3e}"
        if strict:
            raise DynamicsResidualError(message)
        logger.debug(message)

    x_r = {i: instance.reference_of(i) for i in model.ids}
    return TrajectorySolution(
        variant=instance.variant,
        subsystems=subsystems,
        objective=total_cost(model, instance.ingredients, instance.variant, trajectories, x_r),
        status=status,
        dynamics_residual=residual,
        wall_time=wall_time,
        iterations=iterations,
    )
