from dataclasses import dataclass
from pathlib import Path

from terminal.domain.model.value_objects.LmiLifting import LmiLifting


@dataclass(frozen=True)
class SynthesizeIngredientsCommand:
    """
    Command: compute terminal ingredients of a network file
    Without a network path the bundled benchmark is used
    """
    output: Path
    network: Path | None = None
    epsilon: float = 1e-6
    lifting: LmiLifting = LmiLifting.OWN_BLOCK
    sampling_time: float | None = None
