"""JSON and CSV emission plus the ensemble file format.

Every output document embeds a run manifest (command, parameters, seed,
version, timestamp) so a result file is self-describing: re-running the
manifest reproduces the numbers, and with a pinned timestamp the bytes.
Floats serialize at full double precision through Python's shortest
round-trip repr; non-finite values become the strings "inf"/"-inf"/"nan".
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .catalog import CatalogEntry, resolve
from .engine import (
    CorrelatedEnsemble,
    ICPReport,
    ObservableAssignment,
    build_ensemble,
)
from .gpt import State


@dataclass(frozen=True)
class RunManifest:
    command: str
    parameters: dict
    seed: int
    tool_version: str
    timestamp: str

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "parameters": dict(self.parameters),
            "seed": self.seed,
            "tool_version": self.tool_version,
            "timestamp": self.timestamp,
        }


def jsonable(value):
    """Recursively convert to types the json module serializes portably."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.floating, float)):
        v = float(value)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    return value


def render_json(kind: str, payload, manifest: RunManifest) -> str:
    doc = {"manifest": manifest.to_json(), "kind": kind, "payload": jsonable(payload)}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _csv_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return ";".join(_csv_cell(v) for v in value)
    return str(value)


def render_csv(fieldnames, rows, manifest: RunManifest) -> str:
    buf = io.StringIO()
    for key, val in sorted(manifest.to_json().items()):
        buf.write(f"# {key}: {json.dumps(jsonable(val), sort_keys=True)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fieldnames)
    for row in rows:
        writer.writerow([_csv_cell(jsonable(row.get(f, ""))) for f in fieldnames])
    return buf.getvalue()


# --- ensembles and certificates -------------------------------------------------

def ensemble_to_json(ensemble: CorrelatedEnsemble) -> dict:
    return {
        "theory": ensemble.theory.theory_id,
        "register_alphabets": list(ensemble.register_alphabets),
        "entries": [
            {
                "p": e.probability,
                "state": e.state.coords.tolist(),
                "registers": list(e.registers),
            }
            for e in ensemble.entries
        ],
    }


def _require(cond: bool, path: str, message: str):
    if not cond:
        raise ValueError(f"{path}: {message}")


def ensemble_from_json(doc) -> tuple[CatalogEntry, CorrelatedEnsemble]:
    """Rebuild an ensemble; errors carry the JSON path of the offending field."""
    _require(isinstance(doc, dict), "ensemble", "expected an object")
    theory_id = doc.get("theory")
    _require(isinstance(theory_id, str), "ensemble.theory", "expected a theory id string")
    try:
        entry = resolve(theory_id)
    except (KeyError, ValueError) as exc:
        raise ValueError(f"ensemble.theory: {exc}") from exc
    entries_doc = doc.get("entries")
    _require(isinstance(entries_doc, list) and entries_doc, "ensemble.entries", "expected a non-empty list")
    entries = []
    for i, item in enumerate(entries_doc):
        path = f"ensemble.entries[{i}]"
        _require(isinstance(item, dict), path, "expected an object")
        p = item.get("p")
        _require(isinstance(p, (int, float)) and not isinstance(p, bool), f"{path}.p", "expected a number")
        coords = item.get("state")
        _require(
            isinstance(coords, list) and all(isinstance(c, (int, float)) for c in coords),
            f"{path}.state",
            "expected a list of numbers",
        )
        regs = item.get("registers")
        _require(
            isinstance(regs, list) and all(isinstance(r, int) and not isinstance(r, bool) for r in regs),
            f"{path}.registers",
            "expected a list of integers",
        )
        entries.append((float(p), State(np.array(coords, dtype=float), theory_id), tuple(regs)))
    alphabets = doc.get("register_alphabets")
    if alphabets is not None:
        _require(
            isinstance(alphabets, list) and all(isinstance(a, int) for a in alphabets),
            "ensemble.register_alphabets",
            "expected a list of integers",
        )
    try:
        ensemble = build_ensemble(entry.theory, entries, alphabets)
    except ValueError as exc:
        raise ValueError(f"ensemble: {exc}") from exc
    return entry, ensemble


def assignment_to_json(assignment: ObservableAssignment) -> list:
    return [
        {"measurement": m.label, "register": r} for m, r in assignment.pairs
    ]


def report_to_json(report: ICPReport) -> dict:
    return report.to_json()


def certificate_to_json(cert) -> dict:
    return {
        "theory": cert.theory_id,
        "ensemble": ensemble_to_json(cert.ensemble),
        "assignment": assignment_to_json(cert.assignment),
        "report": report_to_json(cert.report),
        "closed_form": dict(cert.closed_form),
        "crosscheck_max_abs_diff": cert.crosscheck_max_abs_diff,
    }


REPORT_CSV_FIELDS = (
    "pairs",
    "gains",
    "redundancy",
    "extractable",
    "observed_dimension",
    "bound",
    "margin",
    "violated",
)


def report_csv_row(report: ICPReport) -> dict:
    return {
        "pairs": list(report.pair_labels),
        "gains": list(report.gains),
        "redundancy": report.redundancy,
        "extractable": report.extractable,
        "observed_dimension": report.observed_dim,
        "bound": report.bound,
        "margin": report.margin,
        "violated": report.violated,
    }
