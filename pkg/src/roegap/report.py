"""Report documents: structured JSON tree, flat CSV, and determinism hash.

The hash walks every numeric payload of the document in sorted key order,
packing floats as raw IEEE doubles, so two runs agree exactly or not at all;
printed numbers use 12 significant digits but never feed the hash.  The
provenance block (tool version, timestamps) is excluded.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import struct
import time
from pathlib import Path

from .spectral import SpectralReport

__all__ = [
    "SCHEMA",
    "determinism_hash",
    "build_report_document",
    "spectral_section",
    "write_report",
    "spectral_csv_rows",
    "write_csv",
    "merge_reports",
    "format_number",
]

SCHEMA = "report v1"
TOOL_VERSION = "0.1.0"

# the hash pins the numeric result payloads; the config echo and provenance
# block (tool version, timestamps, output paths) stay outside it
_EXCLUDED_KEYS = {"provenance", "config", "determinism_hash"}


def _hash_walk(node, h) -> None:
    if node is None:
        h.update(b"n")
    elif isinstance(node, bool):
        h.update(b"T" if node else b"F")
    elif isinstance(node, int):
        h.update(b"i" + str(node).encode())
    elif isinstance(node, float):
        h.update(b"f" + struct.pack(">d", node))
    elif isinstance(node, str):
        h.update(b"s" + node.encode("utf-8"))
    elif isinstance(node, (list, tuple)):
        h.update(b"[")
        for item in node:
            _hash_walk(item, h)
        h.update(b"]")
    elif isinstance(node, dict):
        h.update(b"{")
        for key in sorted(node):
            if key in _EXCLUDED_KEYS:
                continue
            h.update(b"k" + str(key).encode("utf-8"))
            _hash_walk(node[key], h)
        h.update(b"}")
    else:
        raise TypeError(f"unhashable report node of type {type(node)!r}")


def determinism_hash(document: dict) -> str:
    h = hashlib.sha256()
    _hash_walk(document, h)
    return h.hexdigest()


def format_number(x) -> str:
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def spectral_section(report: SpectralReport) -> dict:
    comps = []
    for c in report.components:
        comps.append({
            "component": c.component,
            "size": c.size,
            "n": c.n,
            "lambda": c.lam,
            "iterations": c.iterations,
            "residual": c.residual,
            "converged": c.converged,
            "mode": c.mode,
            "oracle_diff": c.oracle_diff,
            "S_bound": c.s_bound if c.s_bound != float("inf") else None,
            "c_bound": c.c_bound,
            "lp": {format_number(p): [lo, hi] for p, (lo, hi) in sorted(c.lp.items())},
            "flags": list(c.flags),
        })
    section = {
        "components": comps,
        "verdict": {
            "uniform": report.verdict.uniform,
            "threshold": report.verdict.threshold,
            "max_lambda": report.verdict.max_lam,
            "witness_component": report.verdict.witness_component,
            "banner": report.verdict.text,
        },
        "witness_checks": report.witness,
    }
    if report.decay is not None:
        section["decay"] = [{
            "component": d.component,
            "size": d.size,
            "lambda": d.lam,
            "k_stop": d.k_stop,
            "table": list(d.table),
            "rate": d.rate,
            "dominated": d.dominated,
            "entrywise_ok": d.entrywise_ok,
            "product_deviation": d.product_deviation,
            "no_gap": d.no_gap,
            "route": d.route,
        } for d in report.decay]
    return section


def build_report_document(config_dict: dict, sections: dict, checks: list[dict]) -> dict:
    doc = {
        "schema": SCHEMA,
        "config": config_dict,
        "checks": checks,
        "provenance": {
            "tool_version": TOOL_VERSION,
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S"),
        },
    }
    doc.update(sections)
    doc["determinism_hash"] = determinism_hash(doc)
    return doc


def write_report(document: dict, path) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(document, fh, indent=2, sort_keys=True)
        fh.write("\n")


def spectral_csv_rows(report: SpectralReport, p_values) -> tuple[list[str], list[list]]:
    header = ["component_id", "size", "n", "p", "lambda", "lambda_lo_p", "lambda_hi_p",
              "S_bound", "c_bound", "iters", "flag"]
    rows = []
    for c in report.components:
        flag = ";".join(c.flags) if c.flags else "ok"
        ps = list(p_values) if p_values else [None]
        for p in ps:
            lo, hi = c.lp.get(p, (None, None)) if p is not None else (None, None)
            rows.append([
                c.component, c.size, c.n,
                format_number(p) if p is not None else "",
                format_number(c.lam),
                format_number(lo) if lo is not None else "",
                format_number(hi) if hi is not None else "",
                format_number(c.s_bound) if c.s_bound != float("inf") else "inf",
                format_number(c.c_bound),
                c.iterations, flag,
            ])
    return header, rows


def write_csv(header: list[str], rows: list[list], path) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    with open(path, "w", newline="") as fh:
        fh.write(buf.getvalue())


def merge_reports(documents: list[dict]) -> dict:
    """Combine section payloads of several documents under one fresh hash."""
    merged = {
        "schema": SCHEMA,
        "config": {"merged_from": [d.get("config", {}) for d in documents]},
        "checks": [c for d in documents for c in d.get("checks", [])],
        "provenance": {
            "tool_version": TOOL_VERSION,
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S"),
        },
    }
    for i, doc in enumerate(documents):
        for key, value in doc.items():
            if key in ("schema", "config", "checks", "provenance", "determinism_hash"):
                continue
            merged[f"{key}" if key not in merged else f"{key}_{i}"] = value
    merged["determinism_hash"] = determinism_hash(merged)
    return merged
