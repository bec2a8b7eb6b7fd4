"""Machine-readable analysis reports and run manifests."""

from __future__ import annotations

import datetime as _dt
import os

from . import __version__
from .entanglement import EntanglementReport, WitnessConfig
from .gaussian import PSD_TOL, QUANTUM_TOL


def timestamp() -> str:
    """UTC time, or ``SOURCE_DATE_EPOCH`` when set (reproducible output)."""
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    t = (_dt.datetime.fromtimestamp(int(epoch), _dt.timezone.utc) if epoch
         else _dt.datetime.now(_dt.timezone.utc))
    return t.replace(microsecond=0).isoformat()


def manifest(command: str, inputs: list[str], config: dict) -> dict:
    return {
        "command": command,
        "inputs": list(inputs),
        "config": config,
        "tool_version": __version__,
        "timestamp": timestamp(),
    }


def analysis_config(witness: WitnessConfig, quantum_tol: float = QUANTUM_TOL) -> dict:
    return {
        "psd_tol": PSD_TOL,
        "quantum_tol": quantum_tol,
        "witness": {
            "grid_points": witness.grid_points,
            "max_iter": witness.max_iter,
            "ftol": witness.ftol,
            "xtol": witness.xtol,
        },
    }


def _genuine_to_dict(g) -> dict | None:
    if g is None:
        return None
    return {
        "s_min": g.s_min,
        "h": list(g.h),
        "g": list(g.g),
        "case": g.case,
        "anchor_mode": g.anchor_mode,
        "bound": g.bound,
        "raw_bound": g.raw_bound,
        "certified": g.genuine,
        "refined": g.refined,
        "candidates": [
            {"case": c.case, "anchor": c.anchor, "params": list(c.params), "s": c.s,
             "refined": c.refined}
            for c in g.candidates
        ],
    }


def report_to_dict(rep: EntanglementReport) -> dict:
    return {
        "physicality": {
            "classical_ok": rep.physicality.classical_ok,
            "quantum_ok": rep.physicality.quantum_ok,
            "min_eigenvalue": rep.physicality.min_eigenvalue,
            "min_symplectic_eigenvalue": rep.physicality.min_symplectic_eigenvalue,
        },
        "ppt": [
            {
                "bipartition": str(p.bipartition),
                "side_a": sorted(p.bipartition.side_a),
                "side_b": sorted(p.bipartition.side_b),
                "nu_tilde_min": p.nu_tilde_min,
                "log_negativity": p.log_negativity,
            }
            for p in rep.ppt
        ],
        "tripartite_negativity": rep.tripartite_negativity,
        "fully_inseparable": rep.fully_inseparable,
        "genuine": _genuine_to_dict(rep.genuine),
        "purity": rep.purity,
        "status": dict(rep.status),
        "summary": rep.summary_line(),
    }
