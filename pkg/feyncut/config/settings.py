"""Configuration settings for feyncut."""

import os
from dataclasses import dataclass, field, fields
from typing import Any, Dict, Tuple

OUTPUT_FORMATS = ('json', 'text')
MASSLESS_DEFAULTS = ('all', 'none')


def _env_int(name: str, default: int) -> int:
    value = os.environ.get(name)
    return int(value) if value not in (None, '') else default


@dataclass
class Config:
    """Configuration class for feyncut runs."""

    # Execution settings
    threads: int = field(default_factory=lambda: _env_int('FEYNCUT_THREADS', 1))
    seed: int = 0

    # Algebra settings
    normal_vertex_cuts: bool = False
    massless_default: str = "all"

    # Output settings
    output_format: str = "json"
    results_dir: str = "results"
    log_file: str = "feyncut.log"

    # Dyson-Schwinger settings
    default_loops: int = 1
    degrees: Tuple[int, ...] = (3, 4)

    # Property sampling settings
    random_contexts: int = 500
    max_tree_edges: int = 4
    max_loop_edges: int = 3

    def __post_init__(self):
        """Validate settings."""
        if self.threads < 1:
            raise ValueError(f"Thread count must be positive, got {self.threads}")
        if self.output_format not in OUTPUT_FORMATS:
            raise ValueError(
                f"Unknown output format {self.output_format!r}; choose from {', '.join(OUTPUT_FORMATS)}"
            )
        if self.massless_default not in MASSLESS_DEFAULTS:
            raise ValueError(f"Unknown massless default {self.massless_default!r}")
        self.degrees = tuple(int(d) for d in self.degrees)

    @classmethod
    def from_dict(cls, config_dict: Dict[str, Any]) -> 'Config':
        """Create Config from dictionary."""
        return cls(**config_dict)

    @classmethod
    def from_env(cls, **overrides: Any) -> 'Config':
        """Create Config from FEYNCUT_THREADS and FEYNCUT_SEED, then apply overrides."""
        values: Dict[str, Any] = {
            'threads': _env_int('FEYNCUT_THREADS', 1),
            'seed': _env_int('FEYNCUT_SEED', 0),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def to_dict(self) -> Dict[str, Any]:
        """Convert Config to dictionary."""
        result = {f.name: getattr(self, f.name) for f in fields(self)}
        result['degrees'] = list(self.degrees)
        return result
