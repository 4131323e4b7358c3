import logging

import click

from src.config.config import configure_logging
from src.routes import bound, run, verify
from src.services.exceptions import KernelException, ProcedureAbort

logger = logging.getLogger(__name__)


class KernelGroup(click.Group):
    """
    Turns library errors into a message on stderr and the error's exit code:
    1 for contract or verification failures, 2 for domain errors, 3 for
    aborted procedures.
    """

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except KernelException as err:
            click.echo(f"error: {err.detail}", err=True)
            if isinstance(err, ProcedureAbort):
                for line in err.transcript:
                    click.echo(f"  {line}", err=True)
            logger.debug("exit %d after %s", err.exit_code, type(err).__name__)
            ctx.exit(err.exit_code)


@click.group(cls=KernelGroup)
@click.option("--log-level", help="Logging level, e.g. INFO or DEBUG.")
def cli(log_level):
    """Effective bounds for differential elimination, with checkable certificates."""
    configure_logging(log_level)


cli.add_command(bound.bound)
cli.add_command(run.run)
cli.add_command(verify.verify)


if __name__ == "__main__":
    cli()
