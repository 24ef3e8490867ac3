import functools
from typing import Callable, Optional

import click
from pydantic import ValidationError

from app.handlers.exception import ExceptionHandler, InvalidSpecError
from app.repository.system_registry import SystemRegistry
from app.schemas.enums import ActionName, DomainKind
from app.schemas.run_schema import RunConfig, SystemSpec
from app.utils.helpers import parse_int_list, parse_shape


def system_options(command: Callable) -> Callable:
    """--box / --inc / --fpl plus the action flags shared by orbits and resonance."""
    decorators = [
        click.option("--box", "box", type=str, default=None, help="Chain product a,b,... (order ideals of the box)."),
        click.option("--inc", "inc", type=str, default=None, help="Tableau shape AxB or a partition 3,2,2."),
        click.option("--q", "q", type=int, default=None, help="Label bound for --inc."),
        click.option("--fpl", "fpl", type=int, default=None, help="Grid order n of fully-packed loops."),
        click.option(
            "--action", "action", default=None,
            type=click.Choice([a.value for a in ActionName]),
            help="Cyclic action; defaults to the natural one for the domain.",
        ),
        click.option("--direction", "direction", type=str, default=None, help="Promotion direction, e.g. 1,-1,1."),
    ]
    for decorator in reversed(decorators):
        command = decorator(command)
    return command


def output_options(command: Callable) -> Callable:
    decorators = [
        click.option("--csv", "as_csv", is_flag=True, help="Emit CSV instead of JSON."),
        click.option("--output", "-o", "output", type=click.Path(dir_okay=False), default=None,
                     help="Write the report to a file instead of standard output."),
        click.option("--timings", is_flag=True, help="Include runtimes in the report."),
    ]
    for decorator in reversed(decorators):
        command = decorator(command)
    return command


def build_system(
    box: Optional[str],
    inc: Optional[str],
    q: Optional[int],
    fpl: Optional[int],
    action: Optional[str],
    direction: Optional[str],
) -> SystemSpec:
    """Exactly one of --box, --inc, --fpl selects the domain."""
    chosen = [flag for flag, value in (("--box", box), ("--inc", inc), ("--fpl", fpl)) if value is not None]
    if len(chosen) != 1:
        raise InvalidSpecError("give exactly one of --box, --inc or --fpl", given=chosen)
    data = {"action": action}
    if direction is not None:
        data["direction"] = parse_int_list(direction, "--direction")
    if box is not None:
        data.update(kind=DomainKind.BOX, dims=parse_int_list(box, "--box"))
    elif inc is not None:
        if q is None:
            raise InvalidSpecError("--inc needs --q", option="--q")
        data.update(kind=DomainKind.INC, shape=parse_shape(inc), q=q)
    else:
        data.update(kind=DomainKind.FPL, n=fpl)
    return SystemRegistry.parse(data)


def run_config(**fields) -> RunConfig:
    try:
        return RunConfig(**fields)
    except ValidationError as e:
        raise InvalidSpecError(f"invalid options: {e.errors()[0]['msg']}", command=fields.get("command"))


def emit(text: str, output: Optional[str]) -> None:
    if output is None:
        click.echo(text, nl=False)
        return
    with click.open_file(output, "w", encoding="utf-8") as handle:
        handle.write(text)


def handled(name: str) -> Callable:
    """
    Runs a command body that returns its exit code; domain and validation
    errors become a JSON object on standard error and a nonzero exit.
    """

    def decorator(command: Callable[..., int]) -> Callable:
        @functools.wraps(command)
        def wrapper(*args, **kwargs):
            ctx = click.get_current_context()
            try:
                code = command(*args, **kwargs)
            except Exception as e:
                code = ExceptionHandler(stream=click.get_text_stream("stderr")).handle(e, command=name)
            ctx.exit(code)

        return wrapper

    return decorator
