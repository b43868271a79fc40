import numpy as np

from networkmodel.domain.model.aggregates.NetworkModel import NetworkModel
from mpc.domain.model.value_objects.OcpVariant import OcpVariant
from terminal.domain.model.aggregates.TerminalIngredients import TerminalIngredients


def subsystem_costs(
        model: NetworkModel,
        ingredients: TerminalIngredients,
        variant: OcpVariant,
        trajectories: dict[int, dict[str, np.ndarray]],
        x_r: dict[int, np.ndarray],
) -> dict[int, float]:
    """
    J_i recomputed from stage_cost plus terminal and offset terms.
    trajectories[i] holds x (T+1, n_i), u (T, m_i) and, when tracking, xe and ue.
    """
    costs = {}
    for i in model.ids:
        sub = model.subsystem(i)
        P = ingredients.of(i).P
        data = trajectories[i]
        if variant.tracks_reference:
            xeN = model.lift({j: trajectories[j]["xe"] for j in model.neighbors(i)}, i)
            ue = data["ue"]
        else:
            xeN, ue = np.zeros(sub.n_neighborhood), np.zeros(sub.m)

        total = 0.0
        for t in range(model.T):
            xN = model.lift({j: trajectories[j]["x"][t] for j in model.neighbors(i)}, i)
            total += model.stage_cost(i, xN, data["u"][t], xeN, ue)

        xe = data["xe"] if variant.tracks_reference else np.zeros(sub.n)
        dT = data["x"][model.T] - xe
        total += float(dT @ P @ dT)
        if variant.tracks_reference:
            offset = xe - x_r[i]
            total += float(offset @ sub.S @ offset)
        costs[i] = total
    return costs


def total_cost(model, ingredients, variant, trajectories, x_r) -> float:
    return float(sum(subsystem_costs(model, ingredients, variant, trajectories, x_r).values()))


def dynamics_residual(model: NetworkModel, trajectories: dict[int, dict[str, np.ndarray]]) -> float:
    """Largest violation of x_i(t+1) = A_i x_N(t) + B_i u_i(t) along the horizon"""
    worst = 0.0
    for i in model.ids:
        sub = model.subsystem(i)
        for t in range(model.T):
            xN = model.lift({j: trajectories[j]["x"][t] for j in model.neighbors(i)}, i)
            gap = trajectories[i]["x"][t + 1] - sub.A @ xN - sub.B @ trajectories[i]["u"][t]
            worst = max(worst, float(np.max(np.abs(gap))))
    return worst
