"""Text file formats: covariance documents, calibration constants, raw
moment tables, SNTJ sweeps and analysis reports.

Documents are JSON. Tables are comma-separated with a header row; lines
starting with ``#`` are comments, and ``# key: value`` comments at the top
of an SNTJ sweep carry its metadata.
"""

from __future__ import annotations

import csv
import io
import json
from collections import defaultdict
from pathlib import Path
from typing import Any

import numpy as np

from .calibration import (
    CalibrationConstants,
    ModeCalibration,
    RawMomentRecord,
    SntjSweep,
    chop_difference,
)
from .errors import FormatError
from .gaussian import CovarianceMatrix, ModeSpec

ORDERING = "xp-interleaved"
VACUUM_VARIANCE = 1


def _load_json(path) -> dict:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"{path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise FormatError(f"{path}: expected a JSON object")
    return doc


def dumps(doc: Any) -> str:
    # json emits shortest round-trip reprs (17 significant digits at most)
    return json.dumps(doc, indent=2, sort_keys=False, allow_nan=True) + "\n"


# covariance documents

def covariance_to_dict(V: CovarianceMatrix, provenance: dict | None = None) -> dict:
    doc = {
        "modes": [{"label": m.label, "frequency_hz": m.frequency} for m in V.modes],
        "ordering": ORDERING,
        "vacuum_variance": VACUUM_VARIANCE,
        "matrix": [[float(x) for x in row] for row in V.matrix],
    }
    if provenance:
        doc["provenance"] = provenance
    return doc


def covariance_from_dict(doc: dict, source: str = "<dict>") -> CovarianceMatrix:
    for key in ("modes", "ordering", "vacuum_variance", "matrix"):
        if key not in doc:
            raise FormatError(f"{source}: missing field {key!r}")
    if doc["ordering"] != ORDERING:
        raise FormatError(f"{source}: ordering must be {ORDERING!r}, got {doc['ordering']!r}")
    if doc["vacuum_variance"] != VACUUM_VARIANCE:
        raise FormatError(
            f"{source}: only the vacuum-variance-1 convention is accepted, got {doc['vacuum_variance']!r}")
    try:
        modes = [ModeSpec(str(m["label"]), float(m["frequency_hz"])) for m in doc["modes"]]
        matrix = np.array(doc["matrix"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{source}: {exc}") from exc
    try:
        return CovarianceMatrix(tuple(modes), matrix)
    except ValueError as exc:
        raise FormatError(f"{source}: {exc}") from exc


def read_covariance(path) -> CovarianceMatrix:
    return covariance_from_dict(_load_json(path), str(path))


def read_provenance(path) -> dict:
    return _load_json(path).get("provenance", {})


def write_covariance(path, V: CovarianceMatrix, provenance: dict | None = None) -> None:
    Path(path).write_text(dumps(covariance_to_dict(V, provenance)))


# calibration constants

def constants_to_dict(c: CalibrationConstants) -> dict:
    return {
        "modes": [{"label": m.label, "f_hz": m.frequency, "gain": m.gain,
                   "temperature_k": m.temperature} for m in c.modes],
        "z0_ohm": c.z0,
        "bw_hz": c.bw,
    }


def read_constants(path) -> CalibrationConstants:
    doc = _load_json(path)
    try:
        modes = tuple(ModeCalibration(str(m["label"]), float(m["f_hz"]), float(m["gain"]),
                                      float(m["temperature_k"])) for m in doc["modes"])
        return CalibrationConstants(modes, float(doc["z0_ohm"]), float(doc["bw_hz"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: {exc}") from exc


def write_constants(path, c: CalibrationConstants) -> None:
    Path(path).write_text(dumps(constants_to_dict(c)))


# tables

def _rows(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"{path}: {exc}") from exc
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    return list(csv.DictReader(lines, skipinitialspace=True))


RAW_COLUMNS = ("mode_i", "quad_i", "mode_j", "quad_j", "on_moment", "off_moment")


def read_raw_moments(path) -> RawMomentRecord:
    """Raw moments table; an optional ``cycle`` column holds per-cycle rows."""
    rows = _rows(path)
    if not rows:
        raise FormatError(f"{path}: no data rows")
    missing = [c for c in RAW_COLUMNS if c not in rows[0]]
    if missing:
        raise FormatError(f"{path}: missing columns {missing}")
    by_key: dict[tuple, list[tuple[int, float, float]]] = defaultdict(list)
    try:
        for n, row in enumerate(rows):
            key = (row["mode_i"], row["quad_i"].upper(), row["mode_j"], row["quad_j"].upper())
            cycle = int(row["cycle"]) if row.get("cycle") not in (None, "") else n
            by_key[key].append((cycle, float(row["on_moment"]), float(row["off_moment"])))
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from exc
    counts = {len(v) for v in by_key.values()}
    if len(counts) != 1:
        raise FormatError(f"{path}: entries have unequal cycle counts {sorted(counts)}")
    n_cycles = counts.pop()
    series = {}
    for key, vals in by_key.items():
        vals.sort()
        series[key] = [x for _, on, off in vals for x in (on, off)]
    return chop_difference(series, n_cycles)


def write_raw_moments(path, record: RawMomentRecord) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RAW_COLUMNS)
    for key in record.on:
        w.writerow([*key, repr(float(record.on[key])), repr(float(record.off[key]))])
    Path(path).write_text(buf.getvalue())


def read_sntj_sweep(path) -> SntjSweep:
    """SNTJ table with ``# label:`` and ``# frequency_hz:`` header comments."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"{path}: {exc}") from exc
    meta = {}
    for ln in text.splitlines():
        s = ln.strip()
        if s.startswith("#") and ":" in s:
            k, v = s[1:].split(":", 1)
            meta[k.strip()] = v.strip()
    if "frequency_hz" not in meta:
        raise FormatError(f"{path}: missing '# frequency_hz:' header")
    rows = _rows(path)
    try:
        bias = [float(r["bias_volts"]) for r in rows]
        power = [float(r["noise_power"]) for r in rows]
        return SntjSweep(np.array(bias), np.array(power), float(meta["frequency_hz"]),
                         meta.get("label", ""))
    except (KeyError, ValueError) as exc:
        raise FormatError(f"{path}: {exc}") from exc


def write_sntj_sweep(path, sweep: SntjSweep) -> None:
    lines = [f"# label: {sweep.label}", f"# frequency_hz: {float(sweep.frequency)!r}",
             "bias_volts,noise_power"]
    lines += [f"{b!r},{p!r}" for b, p in zip(sweep.bias.tolist(), sweep.power.tolist())]
    Path(path).write_text("\n".join(lines) + "\n")
