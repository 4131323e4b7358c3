import logging

import click

from src.routes.options import build_config, config_options
from src.schemas.documents import InputDocument, ProcedureEnum, ResultDocument
from src.services import documents
from src.services.exceptions import VerificationFailure
from src.services.runner import replay, run_procedure

logger = logging.getLogger(__name__)


@click.command()
@click.argument("procedure", required=False, type=click.Choice([p.value for p in ProcedureEnum]))
@click.argument("input_path", metavar="INPUT", required=False, type=click.Path(dir_okay=False))
@click.option("--verify", "verify_path", type=click.Path(dir_okay=False), help="Replay a result document instead.")
@click.option("--output", "-o", type=click.Path(dir_okay=False), help="Also write the result document here.")
@config_options
def run(procedure, input_path, verify_path, output, **options):
    """
    Runs PROCEDURE on the INPUT document and prints the result document.

    With ``--verify RESULT`` the certificates in RESULT are re-expanded and
    the procedure is replayed on the recorded input and config.
    """
    if verify_path:
        failures = replay(documents.read(verify_path, ResultDocument))
        if failures:
            raise VerificationFailure("; ".join(failures))
        click.echo(f"verified {verify_path}")
        return
    if procedure is None or input_path is None:
        raise click.UsageError("run needs PROCEDURE and INPUT, or --verify RESULT")
    doc = documents.read(input_path, InputDocument)
    config = build_config(document_config=doc.config, **options)
    result = run_procedure(ProcedureEnum(procedure), doc, config)
    if output:
        documents.write(output, result)
        logger.info("wrote %s", output)
    click.echo(documents.dumps(result), nl=False)
