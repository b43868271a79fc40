import json
import logging
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from networkmodel.domain.model.aggregates.NetworkModel import NetworkModel, SubsystemModel
from networkmodel.domain.model.exceptions.NetworkErrors import SchemaError, DimensionError
from networkmodel.infrastructure.persistence.resources.NetworkFileResource import (
    NetworkFileResource,
    SubsystemFileResource,
)

logger = logging.getLogger(__name__)

BENCHMARK_PATH = Path(__file__).resolve().parent.parent / "data" / "power_network_7pga.json"


def _matrix(rows: list[list[float]], cols: int) -> np.ndarray:
    if not rows:
        return np.zeros((0, cols))
    return np.array(rows, dtype=float)


def _vector(values: list[float]) -> np.ndarray:
    return np.array(values, dtype=float).reshape(-1)


class NetworkRepositoryImpl:
    """
    JSON file implementation of NetworkRepository
    Matrices are stored dense and row-major
    """

    def __init__(self, benchmark_path: Path = BENCHMARK_PATH):
        self._benchmark_path = Path(benchmark_path)

    # =========================================================================
    # READ
    # =========================================================================

    def load(self, path: Path) -> NetworkModel:
        path = Path(path)
        try:
            raw = path.read_text(encoding="utf-8")
        except FileNotFoundError:
            raise SchemaError(f"Network file not found: {path}")
        try:
            resource = NetworkFileResource.model_validate_json(raw)
        except ValidationError as e:
            raise SchemaError(f"Malformed network file {path}: {e}")

        model = self.to_model(resource)
        logger.info(f"Network loaded from {path}: M={model.M}, T={model.T}, continuous={model.continuous}")
        return model

    def load_benchmark(self) -> NetworkModel:
        return self.load(self._benchmark_path)

    @staticmethod
    def to_model(resource: NetworkFileResource) -> NetworkModel:
        """Resource → aggregate; all invariants are checked by the aggregate"""
        dims = {s.id: s.n for s in resource.subsystems}
        subsystems = []
        for position, (entry, neighbors) in enumerate(zip(resource.subsystems, resource.neighbors), start=1):
            if entry.id != position:
                raise SchemaError(f"Subsystem at position {position} declares id {entry.id}")
            unknown = [j for j in neighbors if j not in dims]
            if unknown:
                raise SchemaError(f"Subsystem {entry.id} lists unknown neighbors {unknown}")
            n_neighborhood = sum(dims[j] for j in neighbors)
            B = _matrix(entry.B, entry.m)
            if B.shape != (entry.n, entry.m):
                raise DimensionError(f"B of subsystem {entry.id} must be {entry.n}x{entry.m}, got {B.shape}")
            subsystems.append(SubsystemModel(
                id=entry.id,
                A=_matrix(entry.A, n_neighborhood),
                B=B,
                G=_matrix(entry.G, n_neighborhood),
                g=_vector(entry.g),
                Hc=_matrix(entry.Hc, entry.m),
                hc=_vector(entry.hc),
                Q=_matrix(entry.Q, n_neighborhood),
                R=_matrix(entry.R, entry.m),
                S=_matrix(entry.S, entry.n),
            ))

        return NetworkModel(
            subsystems=tuple(subsystems),
            neighbor_sets=tuple(tuple(n) for n in resource.neighbors),
            horizon=resource.horizon,
            continuous=resource.continuous,
            sampling_time=resource.sampling_time,
        )

    # =========================================================================
    # WRITE
    # =========================================================================

    @staticmethod
    def to_resource(model: NetworkModel) -> NetworkFileResource:
        return NetworkFileResource(
            subsystems=[
                SubsystemFileResource(
                    id=s.id, n=s.n, m=s.m,
                    A=s.A.tolist(), B=s.B.tolist(),
                    G=s.G.tolist(), g=s.g.tolist(),
                    Hc=s.Hc.tolist(), hc=s.hc.tolist(),
                    Q=s.Q.tolist(), R=s.R.tolist(), S=s.S.tolist(),
                )
                for s in model.subsystems
            ],
            neighbors=[list(n) for n in model.neighbor_sets],
            horizon=model.T,
            continuous=model.continuous,
            sampling_time=model.sampling_time,
        )

    def save(self, model: NetworkModel, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        payload = self.to_resource(model).model_dump(mode="json")
        path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        logger.info(f"✓ Network written to {path}")
        return path
