import logging
from pathlib import Path

from networkmodel.domain.model.aggregates.NetworkModel import NetworkModel
from networkmodel.domain.model.commands.DiscretizeNetworkCommand import DiscretizeNetworkCommand
from networkmodel.domain.model.exceptions.NetworkErrors import SchemaError
from networkmodel.domain.repositories.NetworkRepository import NetworkRepository
from networkmodel.domain.services.Discretization import discretize_network

logger = logging.getLogger(__name__)


class NetworkCommandServiceImpl:
    """
    Application service for network files
    Loads, discretizes and stores networks through the repository
    """

    def __init__(self, repository: NetworkRepository):
        self._repository = repository

    def load_network(self, path: Path) -> NetworkModel:
        return self._repository.load(path)

    def load_discrete(self, path: Path | None = None, h: float | None = None) -> NetworkModel:
        """
        Load a network ready for control design.
        Continuous models are discretized with h (or their own sampling time);
        without a path the bundled benchmark is used.
        """
        model = self._repository.load(path) if path is not None else self._repository.load_benchmark()
        return self.to_discrete(model, h)

    @staticmethod
    def to_discrete(model: NetworkModel, h: float | None = None) -> NetworkModel:
        """Discrete models pass through; continuous ones use h or their own sampling time"""
        if not model.continuous:
            return model
        step = h if h is not None else model.sampling_time
        if step is None:
            raise SchemaError("A continuous network needs a sampling time to be discretized")
        return discretize_network(model, step)

    def discretize(self, command: DiscretizeNetworkCommand) -> NetworkModel:
        model = self._repository.load(command.source)
        h = command.h if command.h is not None else model.sampling_time
        if h is None:
            raise SchemaError("No sampling time given and none stored in the network file")
        discrete = discretize_network(model, h)
        self._repository.save(discrete, command.target)
        return discrete
