from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class DiscretizeNetworkCommand:
    """
    Command: discretize a continuous network file
    h falls back to the file's sampling_time when None
    """
    source: Path
    target: Path
    h: float | None = None
