import json

import pytest

from src.core.config import Command, OutputFormat, RunConfig, load_config
from src.core.dynamics import IntegrationMethod
from src.core.errors import ConfigError
from src.core.oracle import Boundary, Variable


def test_flags_override_file_values():
    file_values = {'command': 'simulate', 'params': {'lam': 0.2, 'alpha': 2.0},
                   'integrator': {'dt': 0.01}, 'seed': 3}
    cfg = RunConfig.build(Command.SIMULATE, file_values,
                          params={'lam': -0.1, 'alpha': None}, integrator={'t_end': 5.0},
                          output=None)
    assert cfg.params == {'lam': -0.1, 'alpha': 2.0}
    assert cfg.integrator == {'dt': 0.01, 't_end': 5.0}
    assert cfg.seed == 3
    assert cfg.output is None


def test_build_does_not_mutate_file_values():
    file_values = {'params': {'lam': 0.2}}
    RunConfig.build(Command.SPECTRUM1D, file_values, params={'lam': 0.5})
    assert file_values == {'params': {'lam': 0.2}}


def test_command_from_flags_wins():
    cfg = RunConfig.build(Command.CHART, {'command': 'simulate'})
    assert cfg.command is Command.CHART


def test_unknown_keys_rejected():
    with pytest.raises(ConfigError):
        RunConfig.build(Command.SIMULATE, {'params': {'gamma': 1.0}})
    with pytest.raises(ConfigError):
        RunConfig.build(Command.SIMULATE, {'colour': 'red'})
    with pytest.raises(ConfigError):
        RunConfig.build(Command.SIMULATE, {'integrator': {'order': 4}})


def test_bad_enum_values():
    with pytest.raises(ConfigError):
        RunConfig(command='fly')
    with pytest.raises(ConfigError):
        RunConfig(command='chart', format='xml')


def test_missing_command():
    with pytest.raises(ConfigError):
        RunConfig.from_dict({'params': {}})


def test_dict_round_trip():
    cfg = RunConfig.build(Command.SPECTRUM2D, None, params={'Lambda': 0.1},
                          options={'max_N': 4}, format='json', seed=7)
    again = RunConfig.from_dict(json.loads(json.dumps(cfg.to_dict())))
    assert again == cfg
    assert again.format is OutputFormat.JSON


def test_integrator_config():
    cfg = RunConfig(command='simulate', integrator={'method': 'rk45', 'dt': None, 'tol': 1e-9})
    ic = cfg.integrator_config()
    assert ic.method is IntegrationMethod.RK45 and ic.dt is None and ic.tol == 1e-9


def test_build_skips_unset_integrator_flags():
    cfg = RunConfig.build(Command.SIMULATE, None,
                          integrator={'method': 'rk45', 'dt': None, 'tol': 1e-9})
    assert cfg.integrator == {'method': 'rk45', 'tol': 1e-9}


def test_integrator_config_validation():
    cfg = RunConfig.build(Command.SIMULATE, None, integrator={'method': 'rk45', 'dt': 0.1})
    with pytest.raises(ConfigError):
        cfg.integrator_config()


def test_quantum_params_and_grid():
    cfg = RunConfig.build(Command.SPECTRUM1D, None, params={'lam': -0.2, 'beta': 1.5})
    qp = cfg.quantum_params()
    assert qp.lam == -0.2 and qp.beta == 1.5
    assert cfg.grid_spec(qp) is None

    cfg = RunConfig.build(Command.SPECTRUM1D, None, params={'lam': 0.1},
                          grid={'points': 3001, 'variable': 'x'})
    g = cfg.grid_spec(cfg.quantum_params())
    assert g.points == 3001
    assert g.variable is Variable.X
    assert g.boundary is Boundary.NATURAL_TRUNCATION


def test_load_config(tmp_path):
    path = tmp_path / 'run.json'
    path.write_text(json.dumps({'command': 'spectrum1d', 'params': {'lam': 0.3}}))
    assert load_config(path)['params'] == {'lam': 0.3}


@pytest.mark.parametrize("content", ['{not json', '[1, 2]'])
def test_load_config_errors(tmp_path, content):
    path = tmp_path / 'bad.json'
    path.write_text(content)
    with pytest.raises(ConfigError):
        load_config(path)


def test_load_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / 'missing.json')
