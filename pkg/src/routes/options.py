"""
Options shared by the commands: caps and budget, merged into a RunConfig.
"""

import click
from pydantic import ValidationError

from src.schemas.run_config import RunConfig, default_config
from src.services import documents
from src.services.exceptions import ParseError

_OPTIONS = [
    click.option("--config", "config_path", type=click.Path(dir_okay=False), help="A RunConfig document."),
    click.option("--budget", "budget_bits", type=int, help="Bit cap on intermediate values."),
    click.option("--steps", "step_cap", type=int, help="Step cap per evaluation."),
    click.option("--pool", "witness_pool_size", type=int, help="Witness pool size for char_set."),
    click.option("--scan-cap", "scan_cap", type=int, help="Longest scan over a stream."),
    click.option("--degree-cap", "membership_degree_cap", type=int, help="Largest membership search degree."),
    click.option("--procedure-steps", "procedure_step_cap", type=int, help="Pass cap for the kernel procedures."),
    click.option("--seed", type=int, help="Seed of the randomized suites."),
]


def config_options(fn):
    for option in reversed(_OPTIONS):
        fn = option(fn)
    return fn


def build_config(config_path: str | None = None, document_config: dict | None = None, **flags) -> RunConfig:
    """
    The effective configuration: settings, then the config file, then the
    document's own ``config``, then command line flags.

    Args:
    - config_path (str | None): A RunConfig document.
    - document_config (dict | None): The ``config`` object of an input document.
    - flags: Flag values; None means not given.

    Returns:
    - RunConfig: The merged configuration.
    """
    config = documents.read(config_path, RunConfig) if config_path else default_config()
    try:
        if document_config:
            config = config.override(**document_config)
        return config.override(**flags)
    except ValidationError as err:
        raise ParseError(f"invalid configuration: {err}") from err
