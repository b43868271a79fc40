import logging

from networkmodel.application.internal.commandservice.NetworkCommandServiceImpl import NetworkCommandServiceImpl
from terminal.application.internal.synthesisservice.SynthesisServiceImpl import SynthesisServiceImpl
from terminal.domain.model.aggregates.TerminalIngredients import TerminalIngredients
from terminal.domain.model.commands.SynthesizeIngredientsCommand import SynthesizeIngredientsCommand
from terminal.domain.repositories.IngredientsRepository import IngredientsRepository

logger = logging.getLogger(__name__)


class IngredientsCommandServiceImpl:
    """
    Application service for the offline stage
    Loads the network, runs the synthesis and stores the ingredients
    """

    def __init__(
            self,
            networks: NetworkCommandServiceImpl,
            synthesis: SynthesisServiceImpl,
            repository: IngredientsRepository,
    ):
        self._networks = networks
        self._synthesis = synthesis
        self._repository = repository

    def synthesize(self, command: SynthesizeIngredientsCommand) -> TerminalIngredients:
        model = self._networks.load_discrete(command.network, command.sampling_time)
        ingredients = self._synthesis.synthesize(model, command.epsilon, command.lifting)
        self._repository.save(ingredients, command.output)
        return ingredients
