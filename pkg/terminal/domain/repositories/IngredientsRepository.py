from pathlib import Path
from typing import Protocol

from terminal.domain.model.aggregates.TerminalIngredients import TerminalIngredients


class IngredientsRepository(Protocol):
    """
    Interface of the terminal ingredients store
    Contract fulfilled by the JSON file implementation
    """

    def load(self, path: Path) -> TerminalIngredients:
        """Read ingredients with their certificate, if any"""
        ...

    def save(self, ingredients: TerminalIngredients, path: Path) -> Path:
        """Write ingredients, returns the written path"""
        ...
