"""
Run configuration.

A `RunConfig` is the complete, JSON-serializable description of one CLI
run: the command, physical parameters, integrator and grid settings,
command options, output location and the random seed. Values come from an
optional JSON file and are overridden by explicit command-line flags.
"""

import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

from .dynamics import IntegratorConfig
from .errors import ConfigError
from .oracle import GridSpec
from .quantum1d import QuantumParams

logger = logging.getLogger(__name__)

PARAM_KEYS = frozenset({'lam', 'alpha', 'k', 'k2', 'k3', 'omega0', 'n1', 'n2',
                        'beta', 'mass', 'hbar', 'Lambda'})
INTEGRATOR_KEYS = frozenset({'method', 't_end', 'dt', 'tol', 'max_steps', 'sample_every'})
GRID_KEYS = frozenset({'domain', 'points', 'boundary', 'variable'})


class Command(Enum):
    SIMULATE = "simulate"
    INVARIANTS = "invariants"
    CHART = "chart"
    SPECTRUM1D = "spectrum1d"
    SPECTRUM2D = "spectrum2d"
    POLYNOMIALS = "polynomials"
    VERIFY = "verify"


class OutputFormat(Enum):
    CSV = "csv"
    JSON = "json"


def _check_keys(section: str, values: Mapping[str, Any], allowed: frozenset) -> None:
    unknown = set(values) - allowed
    if unknown:
        raise ConfigError(f"unknown {section} keys: {', '.join(sorted(unknown))}",
                          section=section)


@dataclass
class RunConfig:
    command: Command
    params: Dict[str, Any] = field(default_factory=dict)
    integrator: Dict[str, Any] = field(default_factory=dict)
    grid: Dict[str, Any] = field(default_factory=dict)
    options: Dict[str, Any] = field(default_factory=dict)
    output: Optional[str] = None
    format: OutputFormat = OutputFormat.CSV
    seed: int = 0

    def __post_init__(self):
        try:
            self.command = Command(self.command)
            self.format = OutputFormat(self.format)
        except ValueError as e:
            raise ConfigError(str(e)) from None
        _check_keys('params', self.params, PARAM_KEYS)
        _check_keys('integrator', self.integrator, INTEGRATOR_KEYS)
        _check_keys('grid', self.grid, GRID_KEYS)
        self.seed = int(self.seed)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> 'RunConfig':
        known = {'command', 'params', 'integrator', 'grid', 'options', 'output', 'format', 'seed'}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown configuration keys: {', '.join(sorted(unknown))}")
        if 'command' not in data:
            raise ConfigError("configuration has no command")
        return cls(**{k: v for k, v in data.items() if v is not None})

    def to_dict(self) -> Dict[str, Any]:
        return {
            'command': self.command.value,
            'params': dict(self.params),
            'integrator': dict(self.integrator),
            'grid': dict(self.grid),
            'options': dict(self.options),
            'output': self.output,
            'format': self.format.value,
            'seed': self.seed,
        }

    @classmethod
    def build(cls, command: Command, file_values: Optional[Mapping[str, Any]] = None,
              **overrides: Any) -> 'RunConfig':
        """File values first, then every override that is not None (flags win)."""
        data: Dict[str, Any] = {k: (dict(v) if isinstance(v, dict) else v)
                                for k, v in (file_values or {}).items()}
        if data.get('command', command.value) != command.value:
            logger.warning(f"Config file is for '{data['command']}', running '{command.value}'")
        data['command'] = command.value
        for key, value in overrides.items():
            if isinstance(value, dict):
                section = dict(data.get(key) or {})
                section.update({k: v for k, v in value.items() if v is not None})
                data[key] = section
            elif value is not None:
                data[key] = value
        return cls.from_dict(data)

    def integrator_config(self) -> IntegratorConfig:
        return IntegratorConfig(**self.integrator)

    def quantum_params(self) -> QuantumParams:
        keys = ('lam', 'beta', 'mass', 'hbar')
        return QuantumParams(**{k: float(self.params[k]) for k in keys if k in self.params})

    def grid_spec(self, qp: QuantumParams) -> Optional[GridSpec]:
        if not self.grid:
            return None
        base = GridSpec.default(qp, variable=self.grid.get('variable', 'u'))
        return GridSpec(domain=tuple(self.grid.get('domain', base.domain)),
                        points=int(self.grid.get('points', base.points)),
                        boundary=self.grid.get('boundary', base.boundary),
                        variable=base.variable)


def load_config(path) -> Dict[str, Any]:
    try:
        with open(Path(path), 'r', encoding='utf-8') as f:
            data = json.load(f)
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"config file {path} is not valid JSON: {e}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    logger.info(f"Loaded configuration from {path}")
    return data
