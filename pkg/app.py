"""
🧮 Toeplitz Lab - крайноранговa лаборатория за Тьоплицови матрици
Командният ред: конфигурационни експерименти, CSV/JSON отчети и пакетът приемни тестове

Изходни кодове:
- 0: успех
- 1: грешна употреба, конфигурация или входни данни
- 2: обявено свойство не е изпълнено
"""
import logging
import os
import sys
from typing import Callable, List, Optional

import click
from dotenv import load_dotenv

from config import Config, ExperimentConfig, load_experiment_config
from constants import EXIT_OK, EXIT_PROPERTY_FAILURE, EXIT_USAGE
from exceptions import ConfigurationError, PropertyFailure, ToeplitzLabError
from experiments import ACCEPTANCE_CHECKS, ExperimentRunner

# Зареждане на .env
load_dotenv()

logger = logging.getLogger(__name__)


# Logging конфигурация (безопасно за Windows конзола)
class _StripNonAsciiFilter(logging.Filter):
    def filter(self, record: logging.LogRecord) -> bool:
        try:
            msg = record.getMessage()
            # Премахва символи извън ASCII; файловият handler вече е записал оригинала
            record.msg = msg.encode('ascii', 'ignore').decode('ascii')
            record.args = ()
        except Exception:
            pass
        return True


def setup_logging(level: str = Config.LOG_LEVEL, log_file: Optional[str] = Config.LOG_FILE) -> None:
    """Файлов лог (UTF-8) и конзолен лог без емоджита"""
    handlers: List[logging.Handler] = []
    if log_file:
        directory = os.path.dirname(log_file)
        if directory:
            os.makedirs(directory, exist_ok=True)
        handlers.append(logging.FileHandler(log_file, encoding='utf-8'))
    stream_handler = logging.StreamHandler(sys.stderr)
    stream_handler.addFilter(_StripNonAsciiFilter())
    handlers.append(stream_handler)

    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
    )


def experiment_options(func: Callable) -> Callable:
    """Общите флагове на всички експериментни команди"""
    options = [
        click.option('--config', 'config_path', type=click.Path(dir_okay=False), required=True,
                     help='JSON experiment config'),
        click.option('--out', 'out_dir', type=click.Path(file_okay=False), default=None,
                     help='Output directory (overrides output_dir)'),
        click.option('--tol', type=float, default=None, help='Relative rank tolerance'),
        click.option('--exact', is_flag=True, default=False, help='Exact rational arithmetic where available'),
        click.option('--threads', type=int, default=None, help='Worker threads'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _load(kind: str, config_path: str, out_dir: Optional[str], tol: Optional[float],
          exact: bool, threads: Optional[int]) -> ExperimentConfig:
    config = load_experiment_config(config_path)
    if config.kind != kind:
        raise ConfigurationError(f"config describes a {config.kind} experiment, not {kind}", key='kind')
    return config.with_overrides(rank_tol=tol, exact=exact, threads=threads, output_dir=out_dir)


def _execute(ctx: click.Context, config: ExperimentConfig) -> None:
    result = ExperimentRunner(config).run()
    summary = result.report.get('results', {}).get('summary')
    if summary:
        click.echo(summary)
    for prop in result.report['properties']:
        status = 'PASS' if prop['passed'] else 'FAIL'
        click.echo(f"{status} {prop['name']}: {prop['detail']}")
    click.echo(f"report: {result.artifacts[-1]}")
    ctx.exit(result.exit_code)


def _experiment_command(kind: str, help_text: str) -> click.Command:
    @click.pass_context
    @experiment_options
    def command(ctx: click.Context, config_path: str, out_dir: Optional[str], tol: Optional[float],
                exact: bool, threads: Optional[int]) -> None:
        _execute(ctx, _load(kind, config_path, out_dir, tol, exact, threads))

    return click.command(name=kind, help=help_text)(command)


@click.group()
@click.option('--log-level', default=Config.LOG_LEVEL, show_default=True, help='Logging level')
@click.option('--log-file', default=Config.LOG_FILE, show_default=True,
              help='Log file (empty string disables file logging)')
def cli(log_level: str, log_file: str) -> None:
    """Тьоплицови матрици с крайноранговo тегло: асемблиране, ранг, възстановяване"""
    setup_logging(log_level, log_file or None)


for _kind, _help in (
    ('assemble', 'Assemble truncated Toeplitz matrices and write them as CSV.'),
    ('rank', 'Rank and spectrum against the truncation.'),
    ('recover', 'Recover point masses from the moment column.'),
    ('vandermonde', 'Check the rank / Vandermonde vanishing equivalence.'),
    ('sparse', 'Line densities, N-sparseness and reduced-matrix ranks.'),
    ('landau', 'Landau-level Toeplitz matrices and their spectra.'),
    ('helmholtz', 'Helmholtz matrices along both computation paths.'),
    ('born', 'Born kernel rank against the sphere sampling size.'),
):
    cli.add_command(_experiment_command(_kind, _help))


@cli.command()
@click.option('--config', 'config_path', type=click.Path(dir_okay=False), default=None,
              help='Optional JSON config of kind "suite"')
@click.option('--out', 'out_dir', type=click.Path(file_okay=False), default=None, help='Output directory')
@click.option('--seed', type=int, default=None, help='Random seed for the sampled configurations')
@click.option('--check', 'checks', multiple=True, type=click.Choice(sorted(ACCEPTANCE_CHECKS)),
              help='Run only these checks (repeatable)')
@click.pass_context
def suite(ctx: click.Context, config_path: Optional[str], out_dir: Optional[str],
          seed: Optional[int], checks: tuple) -> None:
    """Run the acceptance suite and print a pass/fail table."""
    if config_path:
        config = _load('suite', config_path, out_dir, None, False, None)
    else:
        config = ExperimentConfig(kind='suite').with_overrides(output_dir=out_dir)
    if seed is not None:
        config.seed = seed
    if checks:
        config.params['checks'] = list(checks)
    result = ExperimentRunner(config).run()
    for row in result.report['results']['suite']:
        status = 'PASS' if row['passed'] else 'FAIL'
        click.echo(f"{status} {row['name']}: {row['detail']}")
    ctx.exit(result.exit_code)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Входна точка с изходни кодове вместо изключения

    Returns:
        0 on success, 1 on usage/configuration/input errors, 2 on failed properties
    """
    try:
        code = cli.main(args=argv, prog_name='toeplitz-lab', standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return EXIT_USAGE
    except click.exceptions.Abort:
        logger.info("🛑 Прекратено от потребителя")
        return EXIT_USAGE
    except PropertyFailure as e:
        logger.error(f"❌ Property failed: {e}")
        click.echo(f"FAIL: {e}", err=True)
        return EXIT_PROPERTY_FAILURE
    except ToeplitzLabError as e:
        logger.error(f"❌ {type(e).__name__}: {e}")
        click.echo(f"error: {e}", err=True)
        return EXIT_USAGE
    return EXIT_OK if code is None else int(code)


if __name__ == '__main__':
    sys.exit(main())
