"""Run configuration shared by the command line and the verification suite."""

from __future__ import annotations

from dataclasses import asdict, dataclass

from .errors import SemicrossError
from .norms import DEFAULT_GRID, DEFAULT_MAX_DEPTH, DEFAULT_TOL

FORMATS = ("table", "machine")


@dataclass(frozen=True)
class RunConfig:
    tol: float = DEFAULT_TOL
    max_depth: int = DEFAULT_MAX_DEPTH
    grid: int = DEFAULT_GRID
    tail_depth: int = 2
    nmax: int = 4
    nmax_comb: int = 5
    format: str = "table"
    seed: int = 0

    def __post_init__(self):
        if not self.tol > 0:
            raise SemicrossError("tol: must be positive")
        for name in ("max_depth", "grid", "tail_depth", "nmax", "nmax_comb"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise SemicrossError(f"{name}: must be a positive integer")
        if self.format not in FORMATS:
            raise SemicrossError(f"format: expected one of {', '.join(FORMATS)}")

    @property
    def engine(self) -> dict:
        """Keyword arguments for the norm engines."""
        return {"tol": self.tol, "max_depth": self.max_depth, "grid": self.grid}

    def to_dict(self) -> dict:
        return asdict(self)
