"""Command-line front end.

Exit codes: 0 ran, 2 parse failure, 3 unphysical input with ``--strict``,
4 unstable simulation, 5 calibration fit failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import fileio, parametric as ps
from .calibration import CalibrationConstants, ModeCalibration, assemble_covariance, sntj_fit
from .constants import BANDWIDTH_HZ, QUALITY_FACTOR, Z0_OHM
from .entanglement import WitnessConfig, full_report
from .errors import (
    FitNotConverged,
    FormatError,
    InsufficientBiasRange,
    MissingEntry,
    ParamcavError,
    UnstableSystem,
)
from .gaussian import QUANTUM_TOL, ModeSpec, vacuum
from .report import analysis_config, manifest, report_to_dict

log = logging.getLogger("paramcav")

EXIT_OK, EXIT_PARSE, EXIT_STRICT, EXIT_UNSTABLE, EXIT_FIT = 0, 2, 3, 4, 5


def _pump_arg(text: str) -> ps.PumpTone:
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise argparse.ArgumentTypeError("pump must be FREQ_HZ:COUPLING[:PHASE]")
    try:
        vals = [float(p) for p in parts]
        return ps.PumpTone(*vals)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _modes_arg(text: str) -> tuple[ModeSpec, ...]:
    try:
        freqs = [float(f) for f in text.split(",")]
        return tuple(ModeSpec(f"m{i + 1}", f) for i, f in enumerate(freqs))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="paramcav", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="entanglement report for a covariance file")
    a.add_argument("--input", required=True, type=Path)
    a.add_argument("--strict", action="store_true", help="exit 3 if the state is unphysical")
    a.add_argument("--genuine-grid", type=int, default=WitnessConfig.grid_points, metavar="N")
    a.add_argument("--quantum-tol", type=float, default=QUANTUM_TOL)
    a.add_argument("--out", type=Path)

    s = sub.add_parser("simulate", help="simulate a pumping scheme")
    s.add_argument("--scheme", choices=["cm", "bs"])
    s.add_argument("--g1", type=float, default=0.0, help="first pump coupling, rad/s")
    s.add_argument("--g2", type=float, default=0.0, help="second pump coupling, rad/s")
    s.add_argument("--pump", type=_pump_arg, action="append", default=[],
                   metavar="F:G[:PHASE]", help="explicit pump tone (repeatable)")
    s.add_argument("--modes", type=_modes_arg, help="comma-separated mode frequencies, Hz")
    s.add_argument("--q", type=float, default=QUALITY_FACTOR)
    s.add_argument("--rwa-tol", type=float, default=ps.DEFAULT_RWA_TOL_HZ)
    s.add_argument("--mode", choices=["unitary", "steady"], default="steady")
    s.add_argument("--time", type=float, help="evolution time for --mode unitary, s")
    s.add_argument("--out", required=True, type=Path)

    c = sub.add_parser("calibrate", help="SNTJ fit and covariance assembly")
    c.add_argument("--sntj", nargs="+", required=True, type=Path)
    c.add_argument("--raw", required=True, type=Path)
    c.add_argument("--out-cal", required=True, type=Path)
    c.add_argument("--out-cov", required=True, type=Path)
    c.add_argument("--z0", type=float, default=Z0_OHM)
    c.add_argument("--bw", type=float, default=BANDWIDTH_HZ)
    return p


def cmd_analyze(args) -> int:
    try:
        V = fileio.read_covariance(args.input)
    except FormatError as exc:
        log.error("parse failure: %s", exc)
        return EXIT_PARSE
    wcfg = WitnessConfig(grid_points=args.genuine_grid)
    try:
        rep = full_report(V, wcfg, quantum_tol=args.quantum_tol)
    except ParamcavError as exc:
        log.error("analysis failed: %s", exc)
        return EXIT_STRICT if args.strict else EXIT_PARSE
    doc = {
        "manifest": manifest("analyze", [str(args.input)],
                             {**analysis_config(wcfg, args.quantum_tol), "strict": args.strict}),
        "results": report_to_dict(rep),
    }
    if args.out:
        args.out.write_text(fileio.dumps(doc))
    print(rep.summary_line())
    if args.strict and not rep.physicality.quantum_ok:
        log.error("input is not physical (min nu = %s)", rep.physicality.min_symplectic_eigenvalue)
        return EXIT_STRICT
    return EXIT_OK


def cmd_simulate(args) -> int:
    if args.mode == "unitary" and args.time is None:
        log.error("--mode unitary needs --time")
        return EXIT_PARSE
    if args.scheme and (args.pump or args.modes):
        log.error("use either --scheme or explicit --pump/--modes, not both")
        return EXIT_PARSE
    if args.scheme:
        cfg, gen = ps.scheme_preset(args.scheme, args.g1, args.g2, args.rwa_tol)
        if args.q != QUALITY_FACTOR:
            cfg = ps.CavityConfig.from_quality_factor(cfg.modes, args.q, args.rwa_tol)
        pumps = ps.scheme_pumps(args.scheme, args.g1, args.g2)
    else:
        modes = args.modes or ps.preset_modes()
        cfg = ps.CavityConfig.from_quality_factor(modes, args.q, args.rwa_tol)
        pumps = tuple(args.pump)
        try:
            gen = ps.generator_from_pumps(cfg, pumps)
        except ParamcavError as exc:
            log.error("%s", exc)
            return EXIT_PARSE
    if not gen.terms:
        log.warning("no resonant terms")
    provenance = {
        "scheme": args.scheme.upper() if args.scheme else None,
        "pumps": [{"frequency_hz": p.frequency, "coupling": p.coupling, "phase": p.phase}
                  for p in pumps],
        "terms": [{"kind": t.kind, "mode_pair": list(t.mode_pair), "strength": t.strength,
                   "phase": t.phase} for t in gen.terms],
        "kappas": list(cfg.kappas),
        "rwa_tol_hz": cfg.rwa_tol,
        "mode": args.mode,
        "time_s": args.time,
    }
    if args.mode == "unitary":
        V = ps.unitary_propagate(vacuum(cfg.modes), gen, args.time)
    else:
        try:
            st = ps.steady_state(cfg, gen)
        except UnstableSystem as exc:
            msg = str(exc)
            if args.scheme and args.g1 > 0:
                th = ps.oscillation_threshold(args.scheme, args.g2 / args.g1)
                msg += f"; threshold at g1 = {th:.6g} rad/s for g2/g1 = {args.g2 / args.g1:.6g}"
            log.error("%s", msg)
            return EXIT_UNSTABLE
        V = st.output
        provenance["lyapunov_residual"] = st.lyapunov_residual
    fileio.write_covariance(args.out, V, provenance)
    return EXIT_OK


def cmd_calibrate(args) -> int:
    try:
        sweeps = [fileio.read_sntj_sweep(p) for p in args.sntj]
    except FormatError as exc:
        log.error("parse failure: %s", exc)
        return EXIT_PARSE
    sweeps.sort(key=lambda s: s.frequency)
    modes = []
    for i, sw in enumerate(sweeps):
        label = sw.label or f"m{i + 1}"
        try:
            fit = sntj_fit(sw)
        except (FitNotConverged, InsufficientBiasRange) as exc:
            log.error("SNTJ fit failed for mode %s (%.6g Hz): %s", label, sw.frequency, exc)
            return EXIT_FIT
        log.info("mode %s: G=%.6g T=%.4g K T_sys=%.4g K", label, fit.power_gain(args.bw),
                 fit.T, fit.T_sys)
        modes.append(ModeCalibration(label, sw.frequency, fit.power_gain(args.bw), fit.T))
    consts = CalibrationConstants(tuple(modes), args.z0, args.bw)
    try:
        record = fileio.read_raw_moments(args.raw)
        V = assemble_covariance(record, consts)
    except (FormatError, MissingEntry, ParamcavError, ValueError) as exc:
        log.error("parse failure: %s", exc)
        return EXIT_PARSE
    fileio.write_constants(args.out_cal, consts)
    fileio.write_covariance(args.out_cov, V, {
        "calibration": str(args.out_cal),
        "raw": str(args.raw),
        "n_cycles": record.n_cycles,
    })
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    handler = {"analyze": cmd_analyze, "simulate": cmd_simulate, "calibrate": cmd_calibrate}
    return handler[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
