import click

from src.routes.options import build_config, config_options
from src.services.exceptions import VerificationFailure
from src.services.suites import SUITE_NAMES, format_report, run_suites

# у скільки разів зменшується кількість випадкових прикладів з --quick
QUICK_SCALE = 10


@click.command()
@click.argument("suite", required=False, default="all", type=click.Choice(("all",) + SUITE_NAMES))
@click.option("--quick", is_flag=True, help="Run a tenth of the random samples.")
@config_options
def verify(suite, quick, **options):
    """Runs the self-check SUITE and prints a deterministic report."""
    config = build_config(**options)
    results = run_suites(suite, config, scale=QUICK_SCALE if quick else 1)
    click.echo(format_report(config.seed, results), nl=False)
    failed = [r for r in results if not r.ok]
    if failed:
        raise VerificationFailure(f"{len(failed)} of {len(results)} checks failed")
