
import click

from src.entity.bound_expr import format_expr
from src.entity.multiset import Multiset
from src.repository.catalogue import CATALOGUE, FUNCTION_PARAMS, MULTISET_PARAMS, catalogue, expand, function_argument
from src.routes.options import build_config, config_options
from src.services.evaluator import evaluator
from src.services.exceptions import ParseError


def _multiset(text: str) -> Multiset:
    try:
        return Multiset.of(int(v) for v in text.split(",") if v.strip())
    except ValueError as err:
        raise ParseError(f"--tau expects comma separated naturals, got {text!r}") from err


def _arguments(name: str, values: tuple[int, ...], functions: dict, tau: str | None, config) -> tuple:
    entry = CATALOGUE.get(name)
    if entry is None:
        raise click.UsageError(f"unknown bound {name!r}; known: {', '.join(CATALOGUE)}")
    naturals = [p for p in entry.params if p not in FUNCTION_PARAMS + MULTISET_PARAMS]
    if len(values) != len(naturals):
        raise click.UsageError(f"{name} takes {len(naturals)} natural arguments ({' '.join(naturals)}), got {len(values)}")
    positional = iter(values)
    args = []
    for param in entry.params:
        if param in FUNCTION_PARAMS:
            if functions[param] is None:
                raise click.UsageError(f"{name} needs --{param}")
            fn = function_argument(functions[param])
            fn.check_monotone(config.monotone_samples, seed=config.seed)
            args.append(fn)
        elif param in MULTISET_PARAMS:
            if tau is None:
                raise click.UsageError(f"{name} needs --tau")
            args.append(_multiset(tau))
        else:
            args.append(next(positional))
    return tuple(args)


@click.command()
@click.argument("name")
@click.argument("values", nargs=-1, type=int)
@click.option("--D", "control", help="Control function D, an expression in i (or G).")
@click.option("--F", "shift", help="Shift function F, an expression in i (or G).")
@click.option("--tau", help="Multiset argument, e.g. 2,1,1.")
@click.option("--eval", "evaluate", is_flag=True, help="Print the exact value or a residue.")
@click.option("--symbolic", is_flag=True, help="Print the bound as an s-expression.")
@click.option("--expand", "expanded", is_flag=True, help="Print the one-level definition.")
@config_options
def bound(name, values, control, shift, tau, evaluate, symbolic, expanded, **options):
    """
    Prints a catalogue bound NAME applied to VALUES.

    Without flags the s-expression is printed; ``--eval`` prints the exact
    value, or ``RESIDUE >= n`` when the budget runs out.
    """
    config = build_config(**options)
    args = _arguments(name, values, {"D": control, "F": shift}, tau, config)
    node = catalogue(name, *args)
    if symbolic or not (evaluate or expanded):
        click.echo(format_expr(node))
    if expanded:
        click.echo(expand(name, *args))
    if evaluate:
        click.echo(str(evaluator.evaluate(node, budget=config.budget())))
