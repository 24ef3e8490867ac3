from typing import Optional

import click

from app.repository.system_registry import SystemRegistry
from app.routes.options import build_system, emit, handled, output_options, run_config, system_options
from app.schemas.enums import OutputFormat
from app.services.dynamics_service import DynamicsService
from app.utils.helpers import orbit_rows, render_csv, render_json, serialize_report, text_histogram


ORBIT_COLUMNS = ["system", "action", "domain_size", "order", "orbit_size", "count"]


@click.command("orbits")
@system_options
@output_options
@click.option("--hist", "histogram", is_flag=True, help="Print a text histogram of orbit sizes instead of the report.")
@click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True, help="Orbit-tracing workers.")
@click.option("--cap", type=click.IntRange(min=1), default=None, help="Largest state space to enumerate.")
@click.option("--no-representatives", "representatives", is_flag=True, flag_value=False, default=True,
              help="Omit the least state of each orbit.")
@handled("orbits")
def orbits_command(
    box: Optional[str],
    inc: Optional[str],
    q: Optional[int],
    fpl: Optional[int],
    action: Optional[str],
    direction: Optional[str],
    as_csv: bool,
    output: Optional[str],
    timings: bool,
    histogram: bool,
    workers: int,
    cap: Optional[int],
    representatives: bool,
) -> int:
    """Partition a state space into orbits of its cyclic action."""
    cfg = run_config(
        command="orbits",
        system=build_system(box, inc, q, fpl, action, direction),
        output_format=OutputFormat.CSV if as_csv else OutputFormat.JSON,
        histogram=histogram,
        workers=workers,
        cap=cap,
        timings=timings,
        representatives=representatives,
    )
    report = DynamicsService.orbit_structure(
        SystemRegistry.build_action(cfg.system),
        workers=cfg.workers,
        cap=cfg.cap,
        representatives=cfg.representatives and cfg.output_format == OutputFormat.JSON,
        timings=cfg.timings,
    )
    if cfg.histogram:
        emit(text_histogram(report.orbit_sizes), output)
    elif cfg.output_format == OutputFormat.CSV:
        emit(render_csv(orbit_rows(serialize_report(report)), ORBIT_COLUMNS), output)
    else:
        emit(render_json(report), output)
    return 0
