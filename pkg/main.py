#!/usr/bin/env python3
"""
Hyperspectral Benchmark - Main Application
Band selection, classifier sweeps and classification map rendering
"""

import sys
import logging
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional

import click

from hyperspec.classifiers.trainer import load_model
from hyperspec.core.exceptions import HyperspecError
from hyperspec.core.hsi_data import load_cube, load_ground_truth
from hyperspec.core.pipeline import SweepResult, render_map, run_selection_only, run_sweep, write_outputs
from hyperspec.utils.config_manager import LOG_LEVELS, ConfigManager
from hyperspec.utils.logger import setup_logging

logger = logging.getLogger(__name__)


class HyperspecBenchApp:
    """Main application class for the hyperspectral benchmark"""

    def __init__(self, config_file: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None,
                 verbose: bool = False):
        self.config_manager = ConfigManager(config_file)
        self.config = self.config_manager.load_config(overrides)
        if verbose:
            self.config_manager.set('log_level', 'DEBUG')
        setup_logging(self.config_manager.get_logging_config())
        self.start_time = datetime.now()

    def run_benchmark(self) -> SweepResult:
        """Run the complete sweep and write every output"""
        self.config_manager.validate_required_fields(['cube', 'gt'])
        experiment = self.config_manager.get_experiment_config()
        logger.info(f"Benchmark started at: {self.start_time}")
        result = run_sweep(experiment)
        write_outputs(result)
        logger.info("Benchmark completed successfully")
        return result

    def run_selection(self):
        self.config_manager.validate_required_fields(['cube', 'gt'])
        return run_selection_only(self.config_manager.get_experiment_config())

    def render(self, model_path: str, out_path: str):
        self.config_manager.validate_required_fields(['cube', 'gt'])
        experiment = self.config_manager.get_experiment_config()
        model = load_model(model_path)
        cube = load_cube(experiment.cube)
        gt = load_ground_truth(experiment.gt, cube.shape)
        full, _ = render_map(model, cube, gt, model.band_ids, out_path)
        return full

    def print_results_summary(self, result: SweepResult):
        """Print the table at the largest band count"""
        elapsed = (datetime.now() - self.start_time).total_seconds()
        click.echo("=" * 72)
        click.echo(f"HYPERSPECTRAL BENCHMARK - {result.dataset or 'dataset'}")
        click.echo("=" * 72)
        click.echo(f"Selected bands: {len(result.selection.accepted)} "
                   f"(final MI {result.selection.current_mi:.4f} bits)")
        click.echo(f"Band counts: {', '.join(str(n) for n in result.band_counts)}")
        click.echo(f"\n{'Classifier':<16}{'Bands':>6}{'OA (%)':>10}{'Kappa':>9}")
        for row in result.rows:
            if row.bands_requested == result.band_counts[-1]:
                flag = " *" if row.shortfall else ""
                click.echo(f"{row.classifier:<16}{row.bands_used:>6}"
                           f"{100 * row.report.oa:>10.2f}{row.report.kappa:>9.4f}{flag}")
        click.echo(f"\nExecution Time: {elapsed:.2f} seconds")
        click.echo(f"Output Directory: {Path(self.config['out']).absolute()}")
        click.echo("=" * 72)


def _fail(message: str):
    click.echo(f"ERROR: {message}", err=True)
    sys.exit(1)


def _execute(action):
    try:
        return action()
    except HyperspecError as e:
        logger.error(str(e))
        _fail(str(e))
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        sys.exit(1)
    except Exception as e:
        logger.exception(f"Application failed: {e}")
        _fail(f"unexpected failure: {e}")


def _app(ctx: click.Context, config: Optional[str], overrides: Dict[str, Any]) -> HyperspecBenchApp:
    return HyperspecBenchApp(config, overrides, verbose=ctx.obj['verbose'])


def input_options(func):
    func = click.option('--log-level', type=click.Choice(LOG_LEVELS, case_sensitive=False),
                        help='Logging level')(func)
    func = click.option('--gt', type=click.Path(), help='Ground-truth raster (.gt with .gt.json sidecar)')(func)
    func = click.option('--cube', type=click.Path(), help='Band-sequential cube (.hsib with .hsib.json sidecar)')(func)
    func = click.option('--config', '-c', type=click.Path(), help='Configuration file (key=value or YAML)')(func)
    return func


@click.group()
@click.option('--verbose', '-v', is_flag=True, help='Enable verbose logging')
@click.option('--log-file', type=click.Path(), default=None, help='Also log to a rotating file')
@click.pass_context
def cli(ctx, verbose, log_file):
    """Mutual-information band selection and classifier benchmarking for hyperspectral images."""
    ctx.ensure_object(dict)
    ctx.obj['verbose'] = verbose
    ctx.obj['log_file'] = log_file


@cli.command()
@input_options
@click.option('--bands', help='Comma-separated band counts, e.g. 10,20,30')
@click.option('--max-bands', type=int, help='Stop selection after accepting this many bands')
@click.option('--classifiers', help="'all-paper' or roster keys such as svm-rbf,knn-3")
@click.option('--seed', type=click.IntRange(0, 2 ** 64 - 1), help='Global seed')
@click.option('--out', '-o', type=click.Path(), help='Output directory')
@click.option('--train-fraction', type=float, help='Per-class training fraction')
@click.option('--levels', type=int, help='Quantization levels for MI histograms')
@click.option('--threshold', type=float, help='Minimum MI gain (bits) to accept a band')
@click.option('--gest-mode', type=click.Choice(['mean', 'pairwise']), help='G_est update rule')
@click.option('--cv-folds', type=int, help='Cross-validation folds')
@click.option('--grid-search/--no-grid-search', default=None, help='Tune SVM hyperparameters by CV')
@click.option('--standardize/--no-standardize', default=None, help='Standardize features for SVM, KNN, LDA')
@click.option('--rf-trees', type=int, help='Trees per random forest')
@click.option('--workers', type=int, help='Worker threads')
@click.option('--inline-timing/--no-inline-timing', default=None, help='Add a time column to sweep and summary tables')
@click.option('--render-maps/--no-render-maps', default=None, help='Write classification maps')
@click.pass_context
def run(ctx, config, **options):
    """Run the band-count sweep and write all reports."""
    options['log_file'] = ctx.obj['log_file']

    def action():
        app = _app(ctx, config, options)
        result = app.run_benchmark()
        app.print_results_summary(result)

    _execute(action)


@cli.command()
@input_options
@click.option('--max-bands', type=int, help='Stop after accepting this many bands')
@click.option('--levels', type=int, help='Quantization levels for MI histograms')
@click.option('--threshold', type=float, help='Minimum MI gain (bits) to accept a band')
@click.option('--gest-mode', type=click.Choice(['mean', 'pairwise']), help='G_est update rule')
@click.option('--workers', type=int, help='Worker threads for band ranking')
@click.option('--out', '-o', type=click.Path(), help='Output directory')
@click.pass_context
def select(ctx, config, **options):
    """Run band selection only and write selection_trace.csv."""
    options['log_file'] = ctx.obj['log_file']

    def action():
        app = _app(ctx, config, options)
        selection = app.run_selection()
        click.echo(f"Accepted {len(selection.accepted)} bands: "
                   f"{', '.join(str(b) for b in selection.accepted)}")
        click.echo(f"Final MI: {selection.current_mi:.4f} bits")

    _execute(action)


@cli.command()
@input_options
@click.option('--model', 'model_path', required=True, type=click.Path(), help='Model JSON written by run')
@click.option('--out', '-o', 'out_path', required=True, type=click.Path(), help='Output PPM path')
@click.pass_context
def render(ctx, config, model_path, out_path, **options):
    """Render a saved model's classification map as PPM."""
    options['log_file'] = ctx.obj['log_file']

    def action():
        app = _app(ctx, config, options)
        full = app.render(model_path, out_path)
        click.echo(f"Wrote {full.width}x{full.height} map to {out_path}")

    _execute(action)


def main():
    """Main entry point"""
    cli(obj={})


if __name__ == "__main__":
    main()
