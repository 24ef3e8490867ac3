from typing import Optional

import click

from app.repository.system_registry import SystemRegistry
from app.routes.options import build_system, emit, handled, output_options, run_config, system_options
from app.schemas.enums import OutputFormat, ResonanceMap
from app.services.dynamics_service import DynamicsService
from app.utils.helpers import render_csv, render_json


SUMMARY_COLUMNS = ["system", "map", "frequency", "holds", "commutes", "domain_size", "image_size", "image_order"]
PAIR_COLUMNS = ["system", "map", "orbit_size", "image_orbit_size", "count"]


@click.command("resonance")
@system_options
@output_options
@click.option(
    "--map", "resonance_map", default=None,
    type=click.Choice([m.value for m in ResonanceMap]),
    help="Projection and target rotation; defaults to the natural one for the domain.",
)
@click.option("--frequency", type=click.IntRange(min=1), default=None, help="Claimed frequency; defaults to the map's.")
@click.option("--by-orbit", is_flag=True, help="Tabulate orbit sizes against image orbit sizes.")
@handled("resonance")
def resonance_command(
    box: Optional[str],
    inc: Optional[str],
    q: Optional[int],
    fpl: Optional[int],
    action: Optional[str],
    direction: Optional[str],
    as_csv: bool,
    output: Optional[str],
    timings: bool,
    resonance_map: Optional[str],
    frequency: Optional[int],
    by_orbit: bool,
) -> int:
    """Check that a projection intertwines the action with a small rotation."""
    system = build_system(box, inc, q, fpl, action, direction)
    cfg = run_config(
        command="resonance",
        system=system,
        resonance_map=resonance_map or SystemRegistry.default_map(system),
        frequency=frequency,
        output_format=OutputFormat.CSV if as_csv else OutputFormat.JSON,
        timings=timings,
        by_orbit=by_orbit,
    )
    spec = SystemRegistry.resonance_system(cfg.system, cfg.resonance_map)
    report = DynamicsService.verify_resonance(
        SystemRegistry.build_action(spec),
        SystemRegistry.build_resonance(spec, cfg.resonance_map, cfg.frequency),
        by_orbit=cfg.by_orbit,
        timings=cfg.timings,
    )
    if cfg.output_format == OutputFormat.CSV:
        if report.orbit_pairs is not None:
            rows = [
                {"system": report.system, "map": report.map, "orbit_size": s, "image_orbit_size": t, "count": k}
                for s, t, k in report.orbit_pairs
            ]
            emit(render_csv(rows, PAIR_COLUMNS), output)
        else:
            emit(render_csv([report.model_dump(include=set(SUMMARY_COLUMNS))], SUMMARY_COLUMNS), output)
    else:
        emit(render_json(report), output)
    return 0 if report.holds else 1
