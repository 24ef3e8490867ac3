import json
from typing import Optional, Tuple

import click

from app.routes.options import emit, handled, output_options, run_config
from app.schemas.enums import OutputFormat, SuiteName
from app.services.suite_service import SuiteService
from app.utils.helpers import parse_int_list, render_csv, render_json


CASE_COLUMNS = ["suite", "parameters", "passed", "expected", "observed"]


@click.command("verify")
@click.option("--suite", required=True, type=click.Choice([s.value for s in SuiteName]), help="Theorem suite to run.")
@click.option("--max", "max_size", type=click.IntRange(min=1), default=None, help="Largest side length to sweep.")
@click.option("--box", "boxes", multiple=True, help="Restrict the suite to these boxes (repeatable), e.g. 2,3,2.")
@click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True, help="Orbit-tracing workers.")
@output_options
@handled("verify")
def verify_command(
    suite: str,
    max_size: Optional[int],
    boxes: Tuple[str, ...],
    workers: int,
    as_csv: bool,
    output: Optional[str],
    timings: bool,
) -> int:
    """Run one theorem suite; exit 0 iff every case passes."""
    cfg = run_config(
        command="verify",
        suite=suite,
        max_size=max_size,
        output_format=OutputFormat.CSV if as_csv else OutputFormat.JSON,
        workers=workers,
        timings=timings,
    )
    report = SuiteService.run(
        cfg.suite,
        max_size=cfg.max_size,
        boxes=[tuple(parse_int_list(b, "--box")) for b in boxes] or None,
        workers=cfg.workers,
        timings=cfg.timings,
    )
    if cfg.output_format == OutputFormat.CSV:
        rows = [
            {
                "suite": report.suite,
                "parameters": json.dumps(case.parameters, sort_keys=True),
                "passed": case.passed,
                "expected": json.dumps(case.expected, sort_keys=True),
                "observed": json.dumps(case.observed, sort_keys=True),
            }
            for case in report.cases
        ]
        emit(render_csv(rows, CASE_COLUMNS), output)
    else:
        emit(render_json(report), output)
    return 0 if report.passed else 1
