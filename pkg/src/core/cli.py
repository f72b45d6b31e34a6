"""Command-line interface: click commands over the oscillator library."""

import logging
import math
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import click
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from .classical import PhaseState, StateKind
from .config import Command, OutputFormat, RunConfig, load_config
from .dynamics import conservation_drift, integrate
from .errors import ConfigError, ErrorCode, LambdaOscError
from .models import MODELS, build_params, get_model, model_integrals
from .oracle import sturm_liouville_eigen
from .quantum1d import (Provenance, SpectrumEntry, closed_form_spectrum,
                        normalizable_bound_index, write_spectrum_csv)
from .quantum2d import deformed_hermite, g_quantized, spectrum_2d, write_polynomials_csv, \
    write_spectrum_2d_csv
from .separability import Chart, ChartTag, chart_report
from ..utils.export import dumps_json, write_json

console = Console()
err_console = Console(stderr=True)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2

STATE_KEYS = ('x0', 'y0', 'v0', 'vy0')


def _fail(error: Exception) -> int:
    if isinstance(error, LambdaOscError):
        err_console.print(f"[bold red]❌ Error [{error.code.value}]:[/bold red] {error.message}")
        return error.exit_code
    err_console.print(f"[bold red]❌ Error [{ErrorCode.DOMAIN.value}]:[/bold red] {error}")
    logger.debug("Unexpected failure", exc_info=True)
    return EXIT_RUNTIME


def _file_values(ctx: click.Context) -> Dict[str, Any]:
    return (ctx.obj or {}).get('file_values') or {}


def _emit(cfg: RunConfig, payload: Any) -> None:
    """JSON payloads go to --output when given, otherwise to stdout."""
    if cfg.output:
        path = write_json(cfg.output, payload)
        console.print(f"\n[green]📁 Results saved to:[/green] {path}")
    else:
        click.echo(dumps_json(payload))


def _initial_state(cfg: RunConfig, dim: int) -> PhaseState:
    options = cfg.options
    if 'x0' not in options:
        raise ConfigError("missing initial position: pass --x0 (and --y0 for 2D models)")
    q = [options.get('x0'), options.get('y0', 0.0)][:dim]
    w = [options.get('v0', 0.0), options.get('vy0', 0.0)][:dim]
    kind = StateKind(options.get('kind', StateKind.VELOCITY.value))
    return PhaseState(tuple(float(v) for v in q), tuple(float(v) for v in w), kind)


def _model_options(f):
    f = click.option('--model', 'model', type=click.Choice(sorted(MODELS)),
                     help='Model from the registry')(f)
    f = click.option('--lambda', 'lam', type=float, help='Deformation parameter λ')(f)
    f = click.option('--alpha', type=float, help='Frequency α')(f)
    f = click.option('--k', 'k', type=float, help='1D barrier strength')(f)
    f = click.option('--k2', type=float, help='Barrier strength on x')(f)
    f = click.option('--k3', type=float, help='Barrier strength on y')(f)
    f = click.option('--omega0', type=float, help='Curved S-W frequency')(f)
    f = click.option('--n1', type=int, help='Rational frequency numerator')(f)
    f = click.option('--n2', type=int, help='Rational frequency denominator')(f)
    f = click.option('--x0', type=float, help='Initial x (or ρ)')(f)
    f = click.option('--y0', type=float, help='Initial y (or φ)')(f)
    f = click.option('--v0', type=float, help='Initial x-velocity or momentum')(f)
    f = click.option('--vy0', type=float, help='Initial y-velocity or momentum')(f)
    f = click.option('--kind', type=click.Choice([k.value for k in StateKind]),
                     help='Whether v0/vy0 are velocities or momenta')(f)
    return f


def _model_config(ctx, command: Command, kwargs: Dict[str, Any], **extra) -> RunConfig:
    params = {k: kwargs.pop(k) for k in ('lam', 'alpha', 'k', 'k2', 'k3', 'omega0', 'n1', 'n2')}
    options = {k: kwargs.pop(k) for k in STATE_KEYS + ('model', 'kind')}
    options.update(extra.pop('options', {}))
    return RunConfig.build(command, _file_values(ctx), params=params, options=options, **extra)


def _resolve_model(cfg: RunConfig):
    name = cfg.options.get('model')
    if not name:
        raise ConfigError("missing --model")
    model = get_model(name)
    return model, build_params(model, cfg.params)


@click.group()
@click.version_option(version='1.0.0')
@click.option('--config', 'config_path', type=click.Path(), help='JSON run configuration')
@click.option('--verbose', '-v', is_flag=True, help='Verbose output')
@click.pass_context
def cli(ctx, config_path, verbose):
    logging.basicConfig(level=logging.WARNING, format='%(message)s')
    if verbose:
        logging.getLogger().setLevel(logging.INFO)
    ctx.ensure_object(dict)
    ctx.obj['file_values'] = load_config(config_path) if config_path else {}


@cli.command()
@_model_options
@click.option('--method', type=click.Choice(['rk4', 'rk45']), help='Integrator')
@click.option('--t-end', 't_end', type=float, help='Integration horizon')
@click.option('--dt', type=float, help='rk4 step')
@click.option('--tol', type=float, help='rk45 tolerance')
@click.option('--sample-every', 'sample_every', type=int, help='Keep every n-th step')
@click.option('--output', '-o', type=click.Path(), help='Trajectory CSV')
@click.pass_context
def simulate(ctx, method, t_end, dt, tol, sample_every, output, **kwargs):
    """Integrate a model and report the drift of its first integrals."""
    try:
        integrator = {'method': method, 't_end': t_end, 'dt': dt, 'tol': tol,
                      'sample_every': sample_every}
        cfg = _model_config(ctx, Command.SIMULATE, kwargs, integrator=integrator, output=output)
        if cfg.integrator.get('method') == 'rk45' and 'dt' not in cfg.integrator:
            cfg.integrator['dt'] = None
        model, params = _resolve_model(cfg)
        state = _initial_state(cfg, model.dim)
        icfg = cfg.integrator_config()

        console.print(Panel.fit(
            "[bold cyan]🌀 Integrating[/bold cyan]\n"
            f"Model: {model.name}\n"
            f"Method: {icfg.method.value}, t_end = {icfg.t_end}",
            border_style="cyan"
        ))
        started = time.time()
        with console.status("[bold green]Integrating..."):
            traj = integrate(model, params, state, icfg)

        drift = {q.name: conservation_drift(traj, q) for q in model_integrals(model, params)}
        table = Table(title="📊 Invariant drift", show_header=True, header_style="bold magenta")
        table.add_column("Integral", style="cyan")
        table.add_column("Max relative drift", style="green")
        for name, value in drift.items():
            table.add_row(name, f"{value:.3e}")
        console.print(table)

        summary = {'config': cfg.to_dict(), 'drift': drift,
                   'steps': traj.stats.steps, 'rejected': traj.stats.rejected,
                   'samples': len(traj)}
        if cfg.output:
            traj.to_csv(cfg.output)
            drift_path = write_json(Path(cfg.output).with_suffix('.drift.json'), summary)
            console.print(f"\n[green]📁 Trajectory saved to:[/green] {cfg.output}")
            console.print(f"[green]📁 Drift report saved to:[/green] {drift_path}")
        logger.info(f"simulate finished in {time.time() - started:.2f}s")
        return EXIT_OK
    except Exception as e:
        return _fail(e)


@cli.command()
@_model_options
@click.option('--output', '-o', type=click.Path(), help='JSON output file')
@click.pass_context
def invariants(ctx, output, **kwargs):
    """Evaluate every first integral of a model at one state."""
    try:
        cfg = _model_config(ctx, Command.INVARIANTS, kwargs, output=output)
        model, params = _resolve_model(cfg)
        state = _initial_state(cfg, model.dim)
        values = {q.name: q(state) for q in model_integrals(model, params)}
        _emit(cfg, {'model': model.name, 'params': params.to_dict(),
                    'state': state.to_dict(), 'integrals': values})
        return EXIT_OK
    except Exception as e:
        return _fail(e)


@cli.command()
@click.option('--chart', 'tag', type=click.Choice([t.value for t in ChartTag]),
              help='Coordinate chart')
@click.option('--lambda', 'lam', type=float, help='Deformation parameter λ')
@click.option('--x', type=float, help='Point x')
@click.option('--y', type=float, help='Point y')
@click.option('--alpha', type=float, help='Frequency α')
@click.option('--k2', type=float, help='Barrier strength on x')
@click.option('--k3', type=float, help='Barrier strength on y')
@click.option('--output', '-o', type=click.Path(), help='JSON output file')
@click.pass_context
def chart(ctx, tag, lam, x, y, alpha, k2, k3, output):
    """Chart coordinates of a point and the separable potential forms."""
    try:
        cfg = RunConfig.build(Command.CHART, _file_values(ctx),
                              params={'lam': lam, 'alpha': alpha, 'k2': k2, 'k3': k3},
                              options={'chart': tag, 'x': x, 'y': y}, output=output)
        if cfg.options.get('x') is None or cfg.options.get('y') is None:
            raise ConfigError("chart needs --x and --y")
        c = Chart(cfg.options.get('chart', ChartTag.ZX_Y.value), float(cfg.params.get('lam', 0.0)))
        report = chart_report(c, float(cfg.options['x']), float(cfg.options['y']),
                              alpha=float(cfg.params.get('alpha', 1.0)),
                              k2=float(cfg.params.get('k2', 0.0)),
                              k3=float(cfg.params.get('k3', 0.0)))
        _emit(cfg, report)
        return EXIT_OK
    except Exception as e:
        return _fail(e)


def _oracle_entries(cfg: RunConfig, levels: int) -> List[SpectrumEntry]:
    qp = cfg.quantum_params()
    bound = min(levels, int(min(normalizable_bound_index(qp.beta * qp.mass / qp.hbar, qp.lam),
                                levels - 1)) + 1)
    if bound <= 0:
        return []
    result = sturm_liouville_eigen(qp, cfg.grid_spec(qp), k=bound)
    return [SpectrumEntry(n, float(result.eigenvalues[n]), Provenance.ORACLE,
                          float(result.two_grid_error[n]), 'bound')
            for n in range(bound)]


@cli.command()
@click.option('--beta', type=float, help='β > 0')
@click.option('--lambda', 'lam', type=float, help='Deformation parameter λ')
@click.option('--mass', type=float, help='Mass m')
@click.option('--hbar', type=float, help='ħ')
@click.option('--levels', type=int, help='Number of levels to tabulate')
@click.option('--points', type=int, help='Oracle grid points')
@click.option('--variable', type=click.Choice(['u', 'x']), help='Oracle discretization variable')
@click.option('--tolerance', type=float, help='Allowed oracle discrepancy')
@click.option('--output', '-o', type=click.Path(), help='Spectrum CSV')
@click.pass_context
def spectrum1d(ctx, beta, lam, mass, hbar, levels, points, variable, tolerance, output):
    """Series, ladder and oracle energies of the 1D quantum oscillator."""
    try:
        grid = {'points': points, 'variable': variable}
        cfg = RunConfig.build(Command.SPECTRUM1D, _file_values(ctx),
                              params={'beta': beta, 'lam': lam, 'mass': mass, 'hbar': hbar},
                              options={'levels': levels, 'tolerance': tolerance},
                              grid=grid, output=output)
        qp = cfg.quantum_params()
        count = int(cfg.options.get('levels', 5))
        limit = float(cfg.options.get('tolerance', 1e-4))
        if count < 1:
            raise ConfigError(f"--levels must be positive, got {count}")

        console.print(Panel.fit(
            "[bold cyan]🔬 1D spectrum[/bold cyan]\n"
            f"β = {qp.beta}, λ = {qp.lam}, Λ = {qp.Lambda:.6g}\n"
            f"Levels: {count}",
            border_style="cyan"
        ))
        entries = closed_form_spectrum(qp, count)
        with console.status("[bold green]Solving the Sturm–Liouville problem..."):
            oracle_entries = _oracle_entries(cfg, count)
        entries = sorted(entries + oracle_entries, key=lambda e: e.n)

        table = Table(title="📊 Energies", show_header=True, header_style="bold magenta")
        for column in ('n', 'status', 'series', 'ladder', 'oracle', 'discrepancy'):
            table.add_column(column, style="cyan" if column in ('n', 'status') else "green")
        worst = 0.0
        for n in range(count):
            row = {e.provenance: e for e in entries if e.n == n}
            status = next(e.status for e in entries if e.n == n)
            values = [row[p].energy if p in row else math.nan
                      for p in (Provenance.SERIES, Provenance.LADDER, Provenance.ORACLE)]
            gaps = [abs(v - values[1]) for v in (values[0], values[2]) if not math.isnan(v)]
            gap = max(gaps) if gaps and not math.isnan(values[1]) else math.nan
            if not math.isnan(gap):
                worst = max(worst, gap)
            table.add_row(str(n), status, *[f"{v:.12g}" for v in values],
                          '-' if math.isnan(gap) else f"{gap:.2e}")
        console.print(table)

        if cfg.output:
            write_spectrum_csv(cfg.output, entries)
            write_json(Path(cfg.output).with_suffix('.summary.json'),
                       {'config': cfg.to_dict(), 'max_discrepancy': worst, 'tolerance': limit})
            console.print(f"\n[green]📁 Spectrum saved to:[/green] {cfg.output}")
        if worst > limit:
            err_console.print(f"[bold red]❌ Max discrepancy {worst:.3e} exceeds "
                              f"{limit:.1e}[/bold red]")
            return EXIT_RUNTIME
        console.print(f"\n[bold green]✅ Max discrepancy {worst:.3e}[/bold green]")
        return EXIT_OK
    except Exception as e:
        return _fail(e)


@cli.command()
@click.option('--Lambda', 'Lambda', type=float, help='Dimensionless deformation Λ')
@click.option('--max-N', 'max_N', type=int, help='Largest m+n')
@click.option('--output', '-o', type=click.Path(), help='Spectrum CSV')
@click.pass_context
def spectrum2d(ctx, Lambda, max_N, output):
    """Closed-form and separated 2D energies grouped by N = m+n."""
    try:
        cfg = RunConfig.build(Command.SPECTRUM2D, _file_values(ctx),
                              params={'Lambda': Lambda}, options={'max_N': max_N},
                              output=output)
        value = float(cfg.params.get('Lambda', 0.0))
        top = int(cfg.options.get('max_N', 4))
        entries = spectrum_2d(value, top)

        table = Table(title=f"📊 2D spectrum, Λ = {value}", show_header=True,
                      header_style="bold magenta")
        for column in ('N', 'm', 'n', 'closed form', 'separation'):
            table.add_column(column, style="cyan" if column in ('N', 'm', 'n') else "green")
        for closed, separated in zip(entries[::2], entries[1::2]):
            table.add_row(str(closed.N), str(closed.m), str(closed.n),
                          f"{closed.energy:.12g}", f"{separated.energy:.12g}")
        console.print(table)
        if cfg.output:
            write_spectrum_2d_csv(cfg.output, entries)
            console.print(f"\n[green]📁 Spectrum saved to:[/green] {cfg.output}")
        return EXIT_OK
    except Exception as e:
        return _fail(e)


@cli.command()
@click.option('--Lambda', 'Lambda', type=float, help='Dimensionless deformation Λ')
@click.option('--m', 'm', type=int, help='Z-mode quantum number fixing G = 1 − Λm')
@click.option('--G', 'G', type=float, help='Explicit G (overrides --m)')
@click.option('--max-degree', 'max_degree', type=int, help='Highest polynomial degree')
@click.option('--output', '-o', type=click.Path(), help='Coefficient CSV')
@click.pass_context
def polynomials(ctx, Lambda, m, G, max_degree, output):
    """Coefficients of the deformed Hermite polynomials."""
    try:
        cfg = RunConfig.build(Command.POLYNOMIALS, _file_values(ctx),
                              params={'Lambda': Lambda},
                              options={'m': m, 'G': G, 'max_degree': max_degree},
                              output=output)
        value = float(cfg.params.get('Lambda', 0.0))
        factor = cfg.options.get('G')
        if factor is None:
            factor = g_quantized(value, int(cfg.options.get('m', 0)))
        top = int(cfg.options.get('max_degree', 6))
        polys = [deformed_hermite(value, float(factor), n) for n in range(top + 1)]

        table = Table(title=f"📊 Deformed Hermite, Λ = {value}, G = {factor:.6g}",
                      show_header=True, header_style="bold magenta")
        table.add_column("degree", style="cyan")
        table.add_column("coefficients (c0, c1, ...)", style="green")
        for p in polys:
            table.add_row(str(p.degree), ", ".join(f"{c:.6g}" for c in p.coefficients))
        console.print(table)
        if cfg.output:
            write_polynomials_csv(cfg.output, polys)
            console.print(f"\n[green]📁 Coefficients saved to:[/green] {cfg.output}")
        return EXIT_OK
    except Exception as e:
        return _fail(e)


@cli.command()
@click.option('--only', multiple=True, help='Restrict to a check group or check id')
@click.option('--tolerance', type=float, help='Override every check tolerance')
@click.option('--workers', type=int, envvar='LAMBDA_OSC_THREADS',
              help='Worker processes (default: CPU count)')
@click.option('--html', 'html_path', type=click.Path(), help='Write an HTML report')
@click.option('--output', '-o', type=click.Path(), help='JSON results file')
@click.pass_context
def verify(ctx, only, tolerance, workers, html_path, output):
    """Run the invariant suite; exit 0 only when every check passes."""
    from ..modules.verification import VerificationSuite
    from ..reporters.html_reporter import HTMLReporter

    try:
        cfg = RunConfig.build(Command.VERIFY, _file_values(ctx),
                              options={'only': list(only) or None, 'tolerance': tolerance,
                                       'workers': workers, 'html': html_path},
                              output=output, format=OutputFormat.JSON.value)
        suite = VerificationSuite(only=cfg.options.get('only'),
                                  tolerance=cfg.options.get('tolerance'),
                                  workers=cfg.options.get('workers'))
        console.print(Panel.fit(
            "[bold cyan]🧪 Verification suite[/bold cyan]\n"
            f"Groups: {', '.join(suite.only) if suite.only else 'all'}",
            border_style="cyan"
        ))
        started = time.time()
        with console.status("[bold green]Running checks..."):
            results = suite.run()
        duration = f"{time.time() - started:.1f}s"

        table = Table(title="📊 Checks", show_header=True, header_style="bold magenta")
        table.add_column("Check", style="cyan")
        table.add_column("Measured", style="green")
        table.add_column("Tolerance")
        table.add_column("Status")
        for r in results:
            measured = '-' if math.isnan(r.measured) else f"{r.measured:.3e}"
            status = "[green]✓ pass[/green]" if r.passed else "[red]✗ fail[/red]"
            table.add_row(r.check_id, measured, f"{r.tolerance:.1e}", status)
        console.print(table)
        for r in results:
            if r.error:
                err_console.print(f"[yellow]⚠️  {r.check_id}: {r.error}[/yellow]")

        summary = suite.summary()
        if cfg.output:
            write_json(cfg.output, {'summary': summary, 'results': [r.to_dict() for r in results]})
            console.print(f"\n[green]📁 Results saved to:[/green] {cfg.output}")
        html = cfg.options.get('html')
        if html:
            path = HTMLReporter().generate(results, html, duration)
            console.print(f"[green]📁 HTML report saved to:[/green] {path}")

        if suite.passed:
            console.print(f"\n[bold green]✅ {summary['passed']}/{summary['total']} checks "
                          f"passed in {duration}[/bold green]")
            return EXIT_OK
        err_console.print(f"\n[bold red]❌ {len(summary['failed'])} check(s) failed: "
                          f"{', '.join(summary['failed'])}[/bold red]")
        return EXIT_RUNTIME
    except Exception as e:
        return _fail(e)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and return its exit code (0 ok, 1 usage/config, 2 runtime/domain)."""
    try:
        result = cli.main(args=list(argv) if argv is not None else None,
                          prog_name='lambdaosc', standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.ClickException as e:
        e.show()
        return EXIT_CONFIG
    except click.exceptions.Abort:
        return EXIT_CONFIG
    except LambdaOscError as e:
        return _fail(e)
    return result if isinstance(result, int) else EXIT_OK


def main():
    sys.exit(run())


if __name__ == '__main__':
    main()
