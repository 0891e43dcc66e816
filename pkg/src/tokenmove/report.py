"""Machine-readable run records."""

from __future__ import annotations

import json
from typing import Optional

from .graph import Instance, instance_stats

REPORT_FIELDS = (
    "variant", "n", "m", "k", "ell", "f", "sym_diff", "decision",
    "sequence_length", "wall_time", "method", "transform_chain", "reason",
)


def run_report(
    instance: Instance,
    method: str,
    decision: Optional[bool],
    sequence=None,
    wall_time: float = 0.0,
    reason: Optional[str] = None,
) -> dict:
    """Fixed-field record; ``decision`` None means unknown (refused or failed)."""
    stats = instance_stats(instance)
    return {
        "variant": instance.variant,
        "n": instance.graph.vertex_count,
        "m": instance.graph.edge_count,
        "k": stats.k,
        "ell": instance.budget,
        "f": stats.f,
        "sym_diff": len(stats.symmetric_difference),
        "decision": "unknown" if decision is None else ("yes" if decision else "no"),
        "sequence_length": None if sequence is None else len(sequence),
        "wall_time": round(wall_time, 6),
        "method": method,
        "transform_chain": list(instance.provenance),
        "reason": reason,
    }


def report_json(record: dict) -> str:
    return json.dumps(record, sort_keys=False)
