from pathlib import Path
from typing import Protocol

from networkmodel.domain.model.aggregates.NetworkModel import NetworkModel


class NetworkRepository(Protocol):
    """
    Interface of the network store
    Contract fulfilled by the JSON file implementation
    """

    def load(self, path: Path) -> NetworkModel:
        """Read and validate a network file"""
        ...

    def save(self, model: NetworkModel, path: Path) -> Path:
        """Write a network file, returns the written path"""
        ...

    def load_benchmark(self) -> NetworkModel:
        """Bundled seven-area benchmark (continuous time)"""
        ...
