"""Machine-readable run reports.

A report is plain JSON with sorted keys and no timestamps or host details,
so two runs with the same inputs and seed produce byte-identical files at
any thread count. Exact efficiencies travel as integer numerator and
denominator; thresholds travel as the decimal strings the user gave.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema

from ._version import __version__

SCHEMA_VERSION = 1

REPORT_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "additionalProperties": False,
    "required": ["schema_version", "manifest", "kmeans", "selections"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "manifest": {
            "type": "object",
            "additionalProperties": False,
            "required": ["command", "tool_version", "seed", "input_sha256",
                         "parameters"],
            "properties": {
                "command": {"type": "string"},
                "tool_version": {"type": "string"},
                "seed": {"type": "integer", "minimum": 0},
                "input_sha256": {
                    "type": ["string", "null"],
                    "pattern": "^[0-9a-f]{64}$",
                },
                "parameters": {"type": "object"},
            },
        },
        "kmeans": {
            "type": "object",
            "additionalProperties": False,
            "required": ["centers", "inertia", "cluster_sizes"],
            "properties": {
                "centers": {
                    "type": "array",
                    "items": {"type": "array", "items": {"type": "number"}},
                },
                "inertia": {"type": "number"},
                "cluster_sizes": {
                    "type": "array",
                    "items": {"type": "integer", "minimum": 0},
                },
            },
        },
        "selections": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["threshold", "minimal_cardinality", "solutions",
                             "trace_summary"],
                "properties": {
                    "threshold": {"type": "string"},
                    "minimal_cardinality": {
                        "type": ["integer", "null"], "minimum": 1,
                    },
                    "solutions": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "additionalProperties": False,
                            "required": ["indices", "efficiency_numerator",
                                         "efficiency_denominator"],
                            "properties": {
                                "indices": {
                                    "type": "array",
                                    "items": {"type": "integer", "minimum": 1},
                                },
                                "efficiency_numerator": {
                                    "type": "integer", "minimum": 0,
                                },
                                "efficiency_denominator": {
                                    "type": "integer", "minimum": 1,
                                },
                            },
                        },
                    },
                    "trace_summary": {
                        "type": "object",
                        "additionalProperties": False,
                        "required": ["distinct_subsets_evaluated"],
                        "properties": {
                            "distinct_subsets_evaluated": {
                                "type": "integer", "minimum": 0,
                            },
                        },
                    },
                },
            },
        },
    },
}


@dataclass(frozen=True)
class RunManifest:
    """What produced a report: command, version, seed, input digest, knobs.

    Deliberately excludes wall-clock time, hostnames, and thread counts;
    none of those may influence results, so none belong in the record.
    """

    command: str
    seed: int
    input_sha256: str | None = None
    parameters: dict = field(default_factory=dict)
    tool_version: str = __version__

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "tool_version": self.tool_version,
            "seed": int(self.seed),
            "input_sha256": self.input_sha256,
            "parameters": dict(self.parameters),
        }


def file_sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def selection_entry(threshold_text: str, report) -> dict:
    """JSON section for one threshold; ``report`` None means unreachable."""
    if report is None:
        return {
            "threshold": str(threshold_text),
            "minimal_cardinality": None,
            "solutions": [],
            "trace_summary": {"distinct_subsets_evaluated": 0},
        }
    return {
        "threshold": str(threshold_text),
        "minimal_cardinality": report.minimal_cardinality,
        "solutions": [
            {
                "indices": list(s.subset.indices),
                "efficiency_numerator": int(s.matches),
                "efficiency_denominator": int(s.n),
            }
            for s in report.solutions
        ],
        "trace_summary": {
            "distinct_subsets_evaluated": report.distinct_evaluations,
        },
    }


def build_select_report(manifest: RunManifest, partition, selections) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "manifest": manifest.to_dict(),
        "kmeans": {
            "centers": [[float(x) for x in row]
                        for row in partition.cluster_centers_],
            "inertia": float(partition.inertia_),
            "cluster_sizes": [int(c) for c in partition.cluster_sizes_],
        },
        "selections": selections,
    }
    validate_report(doc)
    return doc


def validate_report(doc: dict) -> None:
    jsonschema.validate(doc, REPORT_SCHEMA)


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_report(path, doc: dict) -> None:
    Path(path).write_text(dumps(doc))


def write_solutions_csv(path, selections) -> None:
    """Flat companion table: one row per (threshold, solution)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["threshold", "minimal_cardinality", "indices",
                         "efficiency_numerator", "efficiency_denominator"])
        for sel in selections:
            if not sel["solutions"]:
                writer.writerow([sel["threshold"], "", "", "", ""])
                continue
            for sol in sel["solutions"]:
                writer.writerow([
                    sel["threshold"],
                    sel["minimal_cardinality"],
                    " ".join(str(i) for i in sol["indices"]),
                    sol["efficiency_numerator"],
                    sol["efficiency_denominator"],
                ])


def render_selection_table(doc: dict) -> str:
    """Small human-readable summary printed after a select run."""
    lines = []
    sizes = doc["kmeans"]["cluster_sizes"]
    lines.append(f"clusters: {len(sizes)} (sizes {', '.join(map(str, sizes))})"
                 f", inertia {doc['kmeans']['inertia']:.6g}")
    for sel in doc["selections"]:
        if sel["minimal_cardinality"] is None:
            lines.append(f"threshold {sel['threshold']}: unreachable")
            continue
        subsets = ", ".join(
            "{" + ", ".join(map(str, sol["indices"])) + "}"
            for sol in sel["solutions"]
        )
        first = sel["solutions"][0]
        eff = first["efficiency_numerator"] / first["efficiency_denominator"]
        lines.append(
            f"threshold {sel['threshold']}: {sel['minimal_cardinality']} "
            f"variable(s), efficiency {eff:.4f}, subsets {subsets}"
        )
    return "\n".join(lines)
