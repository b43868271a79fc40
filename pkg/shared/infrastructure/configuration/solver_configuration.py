import os
import logging
from dataclasses import dataclass
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

logger = logging.getLogger(__name__)

SUPPORTED_SOLVERS = ("CLARABEL", "SCS", "MOSEK")


def _read_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        value = float(raw)
    except ValueError:
        raise ValueError(f"{name} must be a number, got '{raw}'")
    if value <= 0:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


def _read_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got '{raw}'")
    if value < 1:
        raise ValueError(f"{name} must be at least 1, got {value}")
    return value


@dataclass(frozen=True)
class SolverSettings:
    """
    Runtime settings shared by every optimization in the toolkit
    Read once from the environment (.env supported)
    """
    solver: str
    feas_tol: float
    gap_tol: float
    jobs: int
    log_level: str
    fallback: str | None = "SCS"


def load_solver_settings() -> SolverSettings:
    """
    Build settings from DMPC_* environment variables.
    Raises ValueError on any malformed value.
    """
    solver = os.getenv("DMPC_SOLVER", "CLARABEL").strip().upper()
    if solver not in SUPPORTED_SOLVERS:
        raise ValueError(
            f"DMPC_SOLVER '{solver}' is not supported. "
            f"Set it to one of: {', '.join(SUPPORTED_SOLVERS)}."
        )

    log_level = os.getenv("DMPC_LOG_LEVEL", "INFO").strip().upper()
    if not isinstance(logging.getLevelName(log_level), int):
        raise ValueError(f"DMPC_LOG_LEVEL '{log_level}' is not a logging level")

    fallback = os.getenv("DMPC_FALLBACK_SOLVER", "SCS").strip().upper()
    if fallback in ("", "NONE"):
        fallback = None
    elif fallback not in SUPPORTED_SOLVERS:
        raise ValueError(
            f"DMPC_FALLBACK_SOLVER '{fallback}' is not supported. "
            f"Set it to NONE or one of: {', '.join(SUPPORTED_SOLVERS)}."
        )

    settings = SolverSettings(
        solver=solver,
        feas_tol=_read_float("DMPC_FEAS_TOL", 1e-7),
        gap_tol=_read_float("DMPC_GAP_TOL", 1e-7),
        jobs=_read_int("DMPC_JOBS", os.cpu_count() or 1),
        log_level=log_level,
        fallback=fallback,
    )
    logger.debug(f"Solver settings loaded: {settings}")
    return settings
