#!/usr/bin/python
# coding: utf-8 -*-
"""Serialization of results to CSV, JSON and the binary basin raster.

CSV and JSON floats are written with 17 significant digits, so values
read back from a file are bit-identical to the computed ones. JSON reports
carry a ``schema_version`` key. Byte layouts are documented in
``docs/FORMATS.md``.

Functions
---------
    write_orbit_csv, write_attractor_csv, write_curves_csv, write_periodic_csv,
    write_basin_csv, write_scan_csv: one CSV schema each.
    write_basin_raster / read_basin_raster: compact uint8 label grid.
    report_json: JSON text of a report with the schema version.
"""

from __future__ import annotations

import csv
import json
import math
import re
from pathlib import Path
from typing import IO, Any, Dict, Iterable, List, Sequence, Tuple

import numpy as np
from pydantic import BaseModel

from square_billiard import SCHEMA_VERSION, EnhancedJSONEncoder
from square_billiard.defaults import RASTER_MAGIC, RASTER_VERSION
from square_billiard.exceptions import DomainError
from square_billiard.logics.bifurcation import cell_centres
from square_billiard.models.curves import Curve
from square_billiard.models.orbit import OrbitNonexistence, PeriodicOrbitRecord
from square_billiard.models.reports import BASIN_CODES, AttractorSample, BasinReport, OrbitTrace, ScanRow
from square_billiard.tools import fmt_float

_LABEL_NAMES = {code: name for name, code in BASIN_CODES.items()}

RASTER_HEADER = np.dtype(
    [
        ("magic", "S4"),
        ("version", "<u2"),
        ("n_theta", "<u4"),
        ("n_s", "<u4"),
        ("lam", "<f8"),
        ("extent", "<f8", (4,)),
    ]
)
"""Little-endian header of the basin raster (54 bytes)."""


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return fmt_float(float(value))
    return str(value)


def write_csv(stream: IO[str], header: Sequence[str], rows: Iterable[Sequence[Any]]) -> int:
    """Write a header and rows; returns the number of data rows."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    count = 0
    for row in rows:
        writer.writerow([_cell(value) for value in row])
        count += 1
    return count


def write_orbit_csv(trace: OrbitTrace, stream: IO[str]) -> int:
    """``index,s,theta,branch`` rows and a ``# status=...`` footer line."""
    count = write_csv(stream, ("index", "s", "theta", "branch"), ((r.index, r.s, r.theta, r.branch) for r in trace.rows))
    stream.write(f"# status={trace.status},last_index={trace.last_index}\n")
    return count


def write_attractor_csv(sample: AttractorSample, stream: IO[str]) -> int:
    """``s,theta`` rows of the sampled iterates, orbit-major."""
    return write_csv(stream, ("s", "theta"), zip(sample.s.tolist(), sample.theta.tolist()))


def write_curves_csv(curves: Sequence[Curve], stream: IO[str]) -> int:
    """``curve,kind,depth,s,theta`` rows, one per sample; ``curve`` is the label or index."""
    rows: List[Tuple[Any, ...]] = []
    for index, curve in enumerate(curves):
        name = curve.label or str(index)
        rows.extend((name, curve.kind, curve.depth, s, theta) for s, theta in curve.samples())
    return write_csv(stream, ("curve", "kind", "depth", "s", "theta"), rows)


def write_basin_csv(report: BasinReport, stream: IO[str]) -> int:
    """``s,theta,label,escape`` rows at cell centres, angle-major."""
    s_axis = cell_centres(report.n_s, report.extent[0], report.extent[1])
    theta_axis = cell_centres(report.n_theta, report.extent[2], report.extent[3])

    def rows() -> Iterable[Tuple[Any, ...]]:
        for i, theta in enumerate(theta_axis.tolist()):
            for j, s in enumerate(s_axis.tolist()):
                yield s, theta, _LABEL_NAMES[int(report.labels[i, j])], int(report.escape_steps[i, j])

    return write_csv(stream, ("s", "theta", "label", "escape"), rows())


def write_scan_csv(rows: Sequence[ScanRow], stream: IO[str]) -> int:
    """One row per λ with the scan summary columns."""
    header = ("lambda", "regime", "fraction_to_P", "attractor_nonempty", "homoclinic", "q_count", "p_count", "error")
    return write_csv(
        stream,
        header,
        (
            (r.lam, r.regime, r.fraction_to_P, r.attractor_nonempty, r.homoclinic, r.q_count, r.p_count, r.error)
            for r in rows
        ),
    )


def write_periodic_csv(results: Sequence[PeriodicOrbitRecord | OrbitNonexistence], stream: IO[str]) -> int:
    """``family,n,exists,s,theta,period,itinerary,residual,stability,alpha,reason``.

    Existing orbits give one row per orbit point; rejected candidates a
    single row with ``exists=false`` and the reason.
    """
    header = ("family", "n", "exists", "s", "theta", "period", "itinerary", "residual", "stability", "alpha", "reason")

    def rows() -> Iterable[Tuple[Any, ...]]:
        for result in results:
            if isinstance(result, OrbitNonexistence):
                yield result.family, result.n, False, None, None, None, None, None, None, None, f"step {result.step}: {result.reason}"
                continue
            kind = result.stability.kind if result.stability else None
            alpha = result.stability.alpha if result.stability else None
            for s, theta in result.coordinates():
                yield result.family, result.n, True, s, theta, result.period, result.itinerary, result.residual, kind, alpha, None

    return write_csv(stream, header, rows())


def write_basin_raster(report: BasinReport, path: Path) -> None:
    """Header followed by ``n_theta × n_s`` uint8 labels, row-major by angle."""
    header = np.zeros(1, dtype=RASTER_HEADER)
    header["magic"] = RASTER_MAGIC
    header["version"] = RASTER_VERSION
    header["n_theta"] = report.n_theta
    header["n_s"] = report.n_s
    header["lam"] = report.lam
    header["extent"] = report.extent
    with path.open("wb") as handle:
        handle.write(header.tobytes())
        handle.write(np.ascontiguousarray(report.labels, dtype=np.uint8).tobytes())


def read_basin_raster(path: Path) -> Tuple[Dict[str, Any], np.ndarray]:
    """Header fields and label grid of a raster written by :func:`write_basin_raster`.

    Raises
    ------
    DomainError
        On a bad magic, an unknown version or a truncated file.
    """
    data = path.read_bytes()
    if len(data) < RASTER_HEADER.itemsize:
        raise DomainError(f"{path} is too short for a basin raster")
    header = np.frombuffer(data[: RASTER_HEADER.itemsize], dtype=RASTER_HEADER)[0]
    if bytes(header["magic"]) != RASTER_MAGIC:
        raise DomainError(f"{path} is not a basin raster")
    if int(header["version"]) != RASTER_VERSION:
        raise DomainError(f"unsupported raster version {int(header['version'])}")
    n_theta, n_s = int(header["n_theta"]), int(header["n_s"])
    body = np.frombuffer(data[RASTER_HEADER.itemsize :], dtype=np.uint8)
    if body.size != n_theta * n_s:
        raise DomainError(f"{path}: expected {n_theta * n_s} labels, found {body.size}")
    fields = {
        "version": int(header["version"]),
        "n_theta": n_theta,
        "n_s": n_s,
        "lambda": float(header["lam"]),
        "extent": tuple(float(v) for v in header["extent"]),
    }
    return fields, body.reshape(n_theta, n_s).copy()


def report_payload(report: BaseModel | Dict[str, Any], kind: str) -> Dict[str, Any]:
    """``{"schema_version", "kind", ...fields}`` for a model or a plain mapping."""
    fields = report.model_dump(mode="json", by_alias=True) if isinstance(report, BaseModel) else dict(report)
    return {"schema_version": SCHEMA_VERSION, "kind": kind, **fields}


_FLOAT_SLOT = re.compile(r'"__sqb_float_(\d+)__"')


def _json_float(value: float) -> str:
    text = fmt_float(value)
    return text if any(mark in text for mark in ".e") else f"{text}.0"


def _slot_floats(value: Any, floats: List[float]) -> Any:
    """Replace finite floats by numbered string slots, collecting them in ``floats``."""
    if isinstance(value, float) and math.isfinite(value):
        floats.append(value)
        return f"__sqb_float_{len(floats) - 1}__"
    if isinstance(value, dict):
        return {key: _slot_floats(item, floats) for key, item in value.items()}
    if isinstance(value, list):
        return [_slot_floats(item, floats) for item in value]
    return value


def report_json(report: BaseModel | Dict[str, Any], kind: str) -> str:
    """Deterministic JSON text: sorted keys, 17-digit floats, trailing newline."""
    plain = json.loads(json.dumps(report_payload(report, kind), cls=EnhancedJSONEncoder))
    floats: List[float] = []
    text = json.dumps(_slot_floats(plain, floats), indent=2, sort_keys=True)
    return _FLOAT_SLOT.sub(lambda match: _json_float(floats[int(match.group(1))]), text) + "\n"


def constants_payload(constants: BaseModel, timings: bool = False) -> Dict[str, Any]:
    """Constants report in its documented shape.

    ``{lambda0: {low, high, source}, lambda1, lambda2, cn: [[n, c_n], ...], meta}``;
    wall times are kept only with ``timings``.
    """
    fields = constants.model_dump(mode="json")
    meta = fields["solver_meta"]
    if not timings:
        meta = {key: {k: v for k, v in entry.items() if k != "wall_time"} for key, entry in meta.items()}
    low, high = fields["lambda0_bracket"]
    return {
        "lambda0": {"low": low, "high": high, "source": fields["lambda0_source"]},
        "lambda1": fields["lambda1"],
        "lambda2": fields["lambda2"],
        "cn": [list(entry) for entry in fields["cn_table"]],
        "meta": meta,
    }
