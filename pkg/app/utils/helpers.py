import json
from typing import Any, Dict, List, Sequence

import pandas as pd
from pydantic import BaseModel

from app.configuration.config import settings
from app.handlers.exception import InvalidSpecError


def parse_int_list(text: str, option: str) -> List[int]:
    """
    Parses "2,3,2" into [2, 3, 2].

    Raises:
        InvalidSpecError: on an empty or non-integer entry.
    """
    try:
        values = [int(part) for part in text.split(",")]
    except ValueError:
        raise InvalidSpecError(f"{option} expects comma-separated integers, got {text!r}", option=option)
    return values


def parse_shape(text: str) -> List[int]:
    """Rectangle "4x4" (rows x columns) or partition "3,2,2"."""
    if "x" in text.lower():
        parts = text.lower().split("x")
        if len(parts) != 2:
            raise InvalidSpecError(f"--inc expects AxB or a partition, got {text!r}", option="--inc")
        rows, cols = parse_int_list(",".join(parts), "--inc")
        return [cols] * rows
    return parse_int_list(text, "--inc")


def serialize_report(report: BaseModel) -> Dict[str, Any]:
    return json.loads(report.model_dump_json(exclude_none=True))


def render_json(report: BaseModel) -> str:
    """Deterministic JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(serialize_report(report), sort_keys=True, indent=settings.REPORT_INDENT, ensure_ascii=False) + "\n"


def render_csv(rows: Sequence[Dict[str, Any]], columns: Sequence[str]) -> str:
    frame = pd.DataFrame(list(rows), columns=list(columns))
    return frame.to_csv(index=False, lineterminator="\n")


def orbit_rows(report: Dict[str, Any]) -> List[Dict[str, Any]]:
    """One CSV row per orbit size of an orbit report."""
    return [
        {
            "system": report["system"],
            "action": report["action"],
            "domain_size": report["domain_size"],
            "order": report["order"],
            "orbit_size": entry["size"],
            "count": entry["count"],
        }
        for entry in report["size_counts"]
    ]


def text_histogram(sizes: Sequence[int], width: int = 40) -> str:
    """Orbit-size histogram, one bar per distinct size."""
    if not sizes:
        return "(no orbits)\n"
    counts = pd.Series(list(sizes)).value_counts().sort_index()
    peak = int(counts.max())
    label_width = max(len(str(s)) for s in counts.index)
    count_width = max(len(str(c)) for c in counts.values)
    lines = []
    for size, count in counts.items():
        bar = "#" * max(1, round(width * int(count) / peak))
        lines.append(f"{str(size).rjust(label_width)} | {str(int(count)).rjust(count_width)} {bar}")
    return "\n".join(lines) + "\n"
