import csv
import json

import pytest

from src.core.cli import EXIT_CONFIG, EXIT_OK, EXIT_RUNTIME, run


def read_rows(path):
    with open(path, newline='') as f:
        return list(csv.reader(f))


class TestSimulate:
    def test_writes_trajectory_and_drift(self, tmp_path):
        out = tmp_path / 'traj.csv'
        code = run(['simulate', '--model', 'ml1d', '--lambda', '0.3', '--alpha', '1',
                    '--x0', '1', '--v0', '0', '--t-end', '10', '--dt', '0.01',
                    '--sample-every', '10', '-o', str(out)])
        assert code == EXIT_OK
        rows = read_rows(out)
        assert rows[0][0] == 't' and len(rows) in (102, 103)
        summary = json.loads((tmp_path / 'traj.drift.json').read_text())
        assert summary['drift']['H'] < 1e-6
        assert summary['config']['params'] == {'lam': 0.3, 'alpha': 1.0}

    def test_rk45(self, tmp_path):
        code = run(['simulate', '--model', 'nonlinear2d', '--lambda', '-0.2', '--x0', '0.5',
                    '--y0', '0.3', '--v0', '0.1', '--vy0', '-0.2', '--method', 'rk45',
                    '--tol', '1e-10', '--t-end', '5'])
        assert code == EXIT_OK

    def test_missing_initial_position(self):
        assert run(['simulate', '--model', 'ml1d', '--lambda', '0.3']) == EXIT_CONFIG

    def test_unknown_model_flag(self):
        assert run(['simulate', '--model', 'pendulum', '--x0', '0.1']) == EXIT_CONFIG

    def test_start_outside_disk(self):
        assert run(['simulate', '--model', 'ml1d', '--lambda', '-1', '--x0', '1.5']) \
            == EXIT_RUNTIME

    def test_reaching_the_boundary(self):
        code = run(['simulate', '--model', 'ml1d', '--lambda', '-1', '--alpha', '0',
                    '--x0', '0', '--v0', '1', '--t-end', '3'])
        assert code == EXIT_RUNTIME

    def test_bad_integrator_combination(self):
        code = run(['simulate', '--model', 'ml1d', '--x0', '0.5', '--method', 'rk4',
                    '--tol', '1e-9'])
        assert code == EXIT_CONFIG


class TestConfigFile:
    def test_flags_override_file(self, tmp_path):
        config = tmp_path / 'run.json'
        config.write_text(json.dumps({'command': 'spectrum2d', 'params': {'Lambda': 0.5},
                                      'options': {'max_N': 2}}))
        out = tmp_path / 's2.csv'
        assert run(['--config', str(config), 'spectrum2d', '--Lambda', '0.1',
                    '-o', str(out)]) == EXIT_OK
        rows = read_rows(out)
        assert rows[0] == ['m', 'n', 'N=m+n', 'energy', 'provenance']
        assert len(rows) == 13

    def test_unknown_model_in_file(self, tmp_path):
        config = tmp_path / 'run.json'
        config.write_text(json.dumps({'command': 'simulate',
                                      'options': {'model': 'pendulum', 'x0': 0.1}}))
        assert run(['--config', str(config), 'simulate']) == EXIT_CONFIG

    def test_unknown_key_in_file(self, tmp_path):
        config = tmp_path / 'run.json'
        config.write_text(json.dumps({'command': 'chart', 'params': {'gamma': 2}}))
        assert run(['--config', str(config), 'chart', '--x', '0.1', '--y', '0.2']) \
            == EXIT_CONFIG

    def test_unreadable_file(self, tmp_path):
        assert run(['--config', str(tmp_path / 'nope.json'), 'verify']) == EXIT_CONFIG


class TestSpectrum1D:
    def test_negative_lambda(self, tmp_path):
        out = tmp_path / 'spectrum.csv'
        code = run(['spectrum1d', '--beta', '1', '--lambda', '-0.2', '--levels', '5',
                    '-o', str(out)])
        assert code == EXIT_OK
        rows = read_rows(out)
        assert rows[0] == ['n', 'energy', 'provenance', 'residual']
        assert sorted({r[2] for r in rows[1:]}) == ['ladder', 'oracle', 'series']
        assert len(rows) == 16
        summary = json.loads((tmp_path / 'spectrum.summary.json').read_text())
        assert summary['max_discrepancy'] < 1e-4

    def test_levels_past_the_bound_are_excluded(self, tmp_path):
        out = tmp_path / 'spectrum.csv'
        code = run(['spectrum1d', '--beta', '1', '--lambda', '1', '--levels', '5',
                    '-o', str(out)])
        assert code == EXIT_OK
        oracle_rows = [r for r in read_rows(out)[1:] if r[2] == 'oracle']
        assert [r[0] for r in oracle_rows] == ['0']

    def test_discrepancy_over_tolerance(self):
        assert run(['spectrum1d', '--lambda', '-0.2', '--levels', '2',
                    '--tolerance', '1e-30']) == EXIT_RUNTIME

    def test_bad_levels(self):
        assert run(['spectrum1d', '--levels', '0']) == EXIT_CONFIG


class TestOtherCommands:
    def test_invariants(self, tmp_path):
        out = tmp_path / 'inv.json'
        code = run(['invariants', '--model', 'nonlinear2d', '--lambda', '0.3', '--x0', '0.5',
                    '--y0', '0.4', '--v0', '0.1', '--vy0', '0.2', '-o', str(out)])
        assert code == EXIT_OK
        payload = json.loads(out.read_text())
        assert set(payload['integrals']) == {'I1', 'I2', 'I3', 'H'}
        assert payload['model'] == 'nonlinear2d'

    def test_chart(self, tmp_path):
        out = tmp_path / 'chart.json'
        code = run(['chart', '--chart', 'polar', '--lambda', '0.2', '--x', '0.3', '--y', '0.4',
                    '--k2', '0.1', '--k3', '0.1', '-o', str(out)])
        assert code == EXIT_OK
        report = json.loads(out.read_text())
        assert report['chart'] == 'polar'
        assert report['round_trip_error'] < 1e-14

    def test_chart_at_origin(self):
        assert run(['chart', '--chart', 'polar', '--x', '0', '--y', '0']) == EXIT_RUNTIME

    def test_chart_needs_point(self):
        assert run(['chart', '--chart', 'polar', '--x', '0.3']) == EXIT_CONFIG

    def test_polynomials(self, tmp_path):
        out = tmp_path / 'poly.csv'
        code = run(['polynomials', '--Lambda', '0.1', '--m', '1', '--max-degree', '4',
                    '-o', str(out)])
        assert code == EXIT_OK
        rows = read_rows(out)
        assert rows[0] == ['degree', 'c0', 'c1', 'c2', 'c3', 'c4']
        assert len(rows) == 6

    def test_polynomials_collapsed_recursion(self):
        assert run(['polynomials', '--Lambda', '0.5', '--G', '0.75',
                    '--max-degree', '3']) == EXIT_RUNTIME

    def test_imaginary_g(self):
        assert run(['polynomials', '--Lambda', '0.5', '--m', '3']) == EXIT_RUNTIME


class TestVerify:
    def test_group_passes(self, tmp_path):
        out = tmp_path / 'verify.json'
        html = tmp_path / 'verify.html'
        code = run(['verify', '--only', 'ktrig', '--workers', '1', '-o', str(out),
                    '--html', str(html)])
        assert code == EXIT_OK
        payload = json.loads(out.read_text())
        assert payload['summary']['total'] == 5
        assert payload['summary']['failed'] == []
        assert 'ktrig.fundamental' in html.read_text(encoding='utf-8')

    def test_impossible_tolerance_fails(self):
        assert run(['verify', '--only', 'ktrig.fundamental', '--workers', '1',
                    '--tolerance', '-1']) == EXIT_RUNTIME

    def test_unknown_group(self):
        assert run(['verify', '--only', 'astrology', '--workers', '1']) == EXIT_CONFIG


@pytest.mark.parametrize("argv", [['--help'], ['--version'], ['spectrum2d', '--help']])
def test_help_and_version(argv):
    assert run(argv) == EXIT_OK


def test_unknown_command():
    assert run(['teleport']) == EXIT_CONFIG


@pytest.mark.parametrize("argv, files", [
    (['simulate', '--model', 'ml1d', '--lambda', '0.3', '--x0', '1', '--v0', '0',
      '--t-end', '5', '--dt', '0.01', '--sample-every', '10', '-o', 'traj.csv'],
     ['traj.csv', 'traj.drift.json']),
    (['spectrum1d', '--beta', '1', '--lambda', '-0.2', '--levels', '3', '-o', 'spectrum.csv'],
     ['spectrum.csv', 'spectrum.summary.json']),
])
def test_repeated_runs_write_identical_bytes(tmp_path, monkeypatch, argv, files):
    outputs = []
    for name in ('first', 'second'):
        workdir = tmp_path / name
        workdir.mkdir()
        monkeypatch.chdir(workdir)
        assert run(argv) == EXIT_OK
        outputs.append([(workdir / f).read_bytes() for f in files])
    assert outputs[0] == outputs[1]
    assert all(outputs[0])
