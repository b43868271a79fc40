from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True, eq=False)
class SubsystemTerminalParams:
    """
    Online terminal set of one subsystem
    Ellipsoid {x : (x - c)' P (x - c) <= alpha^2} with controller K x_N + d
    """
    alpha: float
    c: np.ndarray
    d: np.ndarray
    lam: dict[int, float] = field(default_factory=dict)
    b: np.ndarray | None = None

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError(f"alpha must be nonnegative, got {self.alpha}")
        if any(v < 0 for v in self.lam.values()):
            raise ValueError("S-lemma multipliers must be nonnegative")
        object.__setattr__(self, "c", np.asarray(self.c, dtype=float).reshape(-1))
        object.__setattr__(self, "d", np.asarray(self.d, dtype=float).reshape(-1))
        if self.b is not None:
            b = np.asarray(self.b, dtype=float).reshape(-1)
            if np.any(b < 0):
                raise ValueError("DD slack b must be nonnegative")
            object.__setattr__(self, "b", b)


@dataclass(frozen=True)
class TerminalSetParams:
    """Value Object: terminal set parameters of every subsystem"""
    subsystems: dict[int, SubsystemTerminalParams]

    def of(self, i: int) -> SubsystemTerminalParams:
        return self.subsystems[i]

    def alphas(self) -> dict[int, float]:
        return {i: p.alpha for i, p in self.subsystems.items()}

    def centers(self) -> dict[int, np.ndarray]:
        return {i: p.c for i, p in self.subsystems.items()}

    def scaled(self, gamma: float) -> "TerminalSetParams":
        """Every radius multiplied by gamma, everything else kept"""
        return TerminalSetParams({
            i: SubsystemTerminalParams(alpha=gamma * p.alpha, c=p.c, d=p.d, lam=dict(p.lam), b=p.b)
            for i, p in self.subsystems.items()
        })
