import logging
from functools import lru_cache
from pathlib import Path

from networkmodel.application.internal.commandservice.NetworkCommandServiceImpl import NetworkCommandServiceImpl
from networkmodel.domain.model.aggregates.NetworkModel import NetworkModel
from networkmodel.infrastructure.persistence.repositories.NetworkRepositoryImpl import NetworkRepositoryImpl
from optimization.domain.model.value_objects.SolveOptions import SolveOptions
from optimization.infrastructure.solvers.CvxpySolverAdapter import CvxpySolverAdapter
from mpc.application.internal.ocpservice.OcpBuilderImpl import OcpBuilderImpl
from mpc.application.internal.simulationservice.SimulationServiceImpl import SimulationServiceImpl
from mpc.application.internal.studyservice.StudyServiceImpl import StudyServiceImpl
from mpc.infrastructure.persistence.repositories.ReportRepositoryImpl import ReportRepositoryImpl
from shared.infrastructure.configuration.solver_configuration import SolverSettings, load_solver_settings
from terminal.application.internal.commandservice.IngredientsCommandServiceImpl import IngredientsCommandServiceImpl
from terminal.application.internal.synthesisservice.SynthesisServiceImpl import SynthesisServiceImpl
from terminal.domain.model.aggregates.TerminalIngredients import TerminalIngredients
from terminal.domain.model.value_objects.LmiLifting import LmiLifting
from terminal.infrastructure.persistence.repositories.IngredientsRepositoryImpl import IngredientsRepositoryImpl

logger = logging.getLogger(__name__)


class PipelineServiceImpl:
    """
    Wires repositories, the solver adapter and the application services
    behind the CLI and the REST controllers
    """

    def __init__(self, settings: SolverSettings | None = None, jobs: int | None = None):
        self.settings = settings or load_solver_settings()
        self.jobs = jobs or self.settings.jobs
        self.solver = CvxpySolverAdapter(SolveOptions.from_settings(self.settings))
        self.network_repository = NetworkRepositoryImpl()
        self.ingredients_repository = IngredientsRepositoryImpl()
        self.reports = ReportRepositoryImpl()
        self.networks = NetworkCommandServiceImpl(self.network_repository)
        self.synthesis = SynthesisServiceImpl(self.solver)
        self.ingredients = IngredientsCommandServiceImpl(self.networks, self.synthesis, self.ingredients_repository)
        self.builder = OcpBuilderImpl(self.solver)
        self.simulation = SimulationServiceImpl(self.builder, self.solver, self.jobs)
        self.studies = StudyServiceImpl(self.builder, self.solver, self.jobs)

    def load_inputs(
            self,
            network: Path | None = None,
            ingredients: Path | None = None,
            h: float | None = None,
            epsilon: float | None = None,
            lifting: LmiLifting | None = None,
    ) -> tuple[NetworkModel, TerminalIngredients]:
        """Discrete network plus its ingredients, synthesized when no file is given"""
        model = self.networks.load_discrete(network, h)
        if ingredients is not None:
            return model, self.ingredients_repository.load(ingredients)
        logger.info("No ingredients file given, synthesizing them first")
        return model, self.synthesis.synthesize(model, epsilon, lifting)


@lru_cache(maxsize=1)
def get_pipeline_service() -> PipelineServiceImpl:
    """Shared instance for the REST controllers"""
    return PipelineServiceImpl()
