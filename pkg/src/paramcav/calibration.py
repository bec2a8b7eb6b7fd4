"""Absolute calibration of measured I/Q moments into covariance matrices.

Room-temperature voltage moments are referred back to the device output
with the per-mode system gain ``G_i`` and the input-noise temperature
``T_i``, both obtained from a shot-noise tunnel junction (SNTJ) sweep.
``I`` maps to ``x`` and ``Q`` maps to ``p``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy.optimize import least_squares

from .constants import BANDWIDTH_HZ, E_CHARGE, H_PLANCK, K_B, Z0_OHM
from .errors import (
    FitNotConverged,
    InsufficientBiasRange,
    MissingEntry,
    NonPositiveInput,
    SameMode,
    SegmentCountMismatch,
)
from .gaussian import CovarianceMatrix, ModeSpec

QUADS = ("I", "Q")
COTH_CUTOFF = 20.0


def coth_thermal(f: float, T: float) -> float:
    """``coth(h f / 2 k_B T)``; exactly 1.0 once the argument exceeds 20."""
    if not (f > 0 and T > 0):
        raise NonPositiveInput(f"need f > 0 and T > 0, got f={f}, T={T}")
    arg = H_PLANCK * f / (2 * K_B * T)
    if arg > COTH_CUTOFF:
        return 1.0
    return 1.0 / math.tanh(arg)


@dataclass(frozen=True)
class ModeCalibration:
    label: str
    frequency: float  # Hz
    gain: float  # dimensionless power gain
    temperature: float  # K

    def __post_init__(self):
        if not (self.frequency > 0 and self.gain > 0 and self.temperature > 0):
            raise NonPositiveInput(f"mode {self.label!r}: frequency, gain and temperature must be > 0")


@dataclass(frozen=True)
class CalibrationConstants:
    modes: tuple[ModeCalibration, ...]
    z0: float = Z0_OHM
    bw: float = BANDWIDTH_HZ

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple(self.modes))
        if not (self.z0 > 0 and self.bw > 0):
            raise NonPositiveInput("z0 and bw must be > 0")

    def mode(self, label: str) -> ModeCalibration:
        for m in self.modes:
            if m.label == label:
                return m
        raise KeyError(label)

    @property
    def mode_specs(self) -> tuple[ModeSpec, ...]:
        return tuple(ModeSpec(m.label, m.frequency) for m in self.modes)


def variance_prefactor(m: ModeCalibration, z0: float, bw: float) -> float:
    return 4.0 / (m.gain * z0 * H_PLANCK * m.frequency * bw)


def covariance_prefactor(mi: ModeCalibration, mj: ModeCalibration, z0: float, bw: float) -> float:
    return 4.0 / (math.sqrt(mi.gain * mj.gain * mi.frequency * mj.frequency) * z0 * H_PLANCK * bw)


def scale_variance(on: float, off: float, c: CalibrationConstants, mode: str) -> float:
    """Scaled variance: pump-on excess over pump-off plus the input noise."""
    m = c.mode(mode)
    return (on - off) * variance_prefactor(m, c.z0, c.bw) + coth_thermal(m.frequency, m.temperature)


def scale_covariance(on: float, c: CalibrationConstants, mode_i: str, mode_j: str) -> float:
    """Scaled cross-frequency covariance; input and system noise do not correlate."""
    if mode_i == mode_j:
        raise SameMode("scale_covariance needs two different modes; use scale_variance")
    return on * covariance_prefactor(c.mode(mode_i), c.mode(mode_j), c.z0, c.bw)


# raw moments

MomentKey = tuple[str, str, str, str]  # (mode_i, quad_i, mode_j, quad_j)


def canonical_key(mode_i: str, quad_i: str, mode_j: str, quad_j: str,
                  order: Sequence[str]) -> MomentKey:
    """Order a moment key so the first factor precedes the second in ``order``."""
    for q in (quad_i, quad_j):
        if q not in QUADS:
            raise ValueError(f"quadrature must be one of {QUADS}, got {q!r}")
    a = (order.index(mode_i), QUADS.index(quad_i))
    b = (order.index(mode_j), QUADS.index(quad_j))
    if b < a:
        mode_i, quad_i, mode_j, quad_j = mode_j, quad_j, mode_i, quad_i
    return (mode_i, quad_i, mode_j, quad_j)


def required_keys(labels: Sequence[str]) -> list[MomentKey]:
    """The 2N(2N+1)/2 independent entries, in matrix order."""
    slots = [(lab, q) for lab in labels for q in QUADS]
    return [(a[0], a[1], b[0], b[1]) for a, b in itertools.combinations_with_replacement(slots, 2)]


@dataclass(frozen=True)
class RawMomentRecord:
    """Cycle-averaged second moments in V^2, keyed by (mode, quad, mode, quad)."""

    on: Mapping[MomentKey, float]
    off: Mapping[MomentKey, float]
    n_cycles: int = 1
    segment_duration: float = 5.0

    def __post_init__(self):
        if set(self.on) != set(self.off):
            raise SegmentCountMismatch("pump-on and pump-off records cover different entries")
        for k, v in itertools.chain(self.on.items(), self.off.items()):
            if k[0] == k[2] and k[1] == k[3] and v < 0:
                raise ValueError(f"negative raw variance for {k}")


def chop_difference(series: Mapping[MomentKey, Sequence[float]], n_cycles: int,
                    segment_duration: float = 5.0) -> RawMomentRecord:
    """Average interleaved ``on, off, on, off, ...`` segments per entry."""
    if n_cycles < 1:
        raise SegmentCountMismatch("n_cycles must be >= 1")
    on, off = {}, {}
    for key, seq in series.items():
        arr = np.asarray(seq, dtype=float)
        if arr.ndim != 1 or arr.size != 2 * n_cycles:
            raise SegmentCountMismatch(
                f"{key}: expected {2 * n_cycles} interleaved segments, got {arr.size}")
        on[key] = float(arr[0::2].mean())
        off[key] = float(arr[1::2].mean())
    return RawMomentRecord(on, off, n_cycles, segment_duration)


def assemble_covariance(record: RawMomentRecord, c: CalibrationConstants) -> CovarianceMatrix:
    """Scale every independent entry and fill the symmetric matrix.

    Same-mode I-Q cross moments are on-off differenced with the variance
    prefactor and no input-noise term (vacuum and thermal noise have no
    x-p correlation).
    """
    labels = [m.label for m in c.modes]
    on = {canonical_key(*k, order=labels): v for k, v in record.on.items()}
    off = {canonical_key(*k, order=labels): v for k, v in record.off.items()}
    needed = required_keys(labels)
    missing = [k for k in needed if k not in on]
    if missing:
        raise MissingEntry(missing)
    n = len(labels)
    v = np.zeros((2 * n, 2 * n))
    for key in needed:
        li, qi, lj, qj = key
        a = 2 * labels.index(li) + QUADS.index(qi)
        b = 2 * labels.index(lj) + QUADS.index(qj)
        if li != lj:
            val = scale_covariance(on[key], c, li, lj)
        elif qi == qj:
            val = scale_variance(on[key], off[key], c, li)
        else:
            m = c.mode(li)
            val = (on[key] - off[key]) * variance_prefactor(m, c.z0, c.bw)
        v[a, b] = v[b, a] = val
    return CovarianceMatrix(c.mode_specs, v)


# SNTJ

@dataclass(frozen=True)
class SntjSweep:
    bias: np.ndarray  # V
    power: np.ndarray  # W or any linear unit
    frequency: float  # Hz
    label: str = ""

    def __post_init__(self):
        b = np.asarray(self.bias, dtype=float)
        p = np.asarray(self.power, dtype=float)
        if b.shape != p.shape or b.ndim != 1:
            raise ValueError("bias and power must be 1-D arrays of equal length")
        object.__setattr__(self, "bias", b)
        object.__setattr__(self, "power", p)


@dataclass(frozen=True)
class SntjFit:
    G: float  # sweep power units per kelvin
    T: float  # K
    T_sys: float  # K
    n_iter: int
    residual_rms: float

    def power_gain(self, bw: float = BANDWIDTH_HZ) -> float:
        """Dimensionless power gain, valid when the sweep powers are in watts."""
        return self.G / (K_B * bw)


def _u_coth_u(u):
    u = np.asarray(u, dtype=float)
    small = np.abs(u) < 1e-6
    safe = np.where(small, 1.0, u)
    return np.where(small, 1.0 + u * u / 3.0, safe / np.tanh(safe))


def sntj_noise_temperature(bias, f: float, T: float) -> np.ndarray:
    """Junction noise in kelvin: ``((eV+hf)coth((eV+hf)/2kT) + (eV-hf)coth(...)) / 4k``."""
    ev = E_CHARGE * np.asarray(bias, dtype=float)
    hf = H_PLANCK * f
    two_kt = 2 * K_B * T
    # x coth(x / 2kT) = 2kT * u coth(u)
    return two_kt * (_u_coth_u((ev + hf) / two_kt) + _u_coth_u((ev - hf) / two_kt)) / (4 * K_B)


def sntj_model(bias, f: float, G: float, T: float, T_sys: float) -> np.ndarray:
    return G * (T_sys + sntj_noise_temperature(bias, f, T))


def sntj_fit(sweep: SntjSweep, f: float | None = None, *, xtol: float = 1e-8,
             max_nfev: int = 2000) -> SntjFit:
    """Least-squares fit of gain, electron temperature and system noise."""
    f = sweep.frequency if f is None else f
    bias, power = sweep.bias, sweep.power
    hf_over_e = H_PLANCK * f / E_CHARGE
    if bias.size < 7:
        raise InsufficientBiasRange(f"need >= 7 bias points, got {bias.size}")
    if not (bias.min() < 0 < bias.max()):
        raise InsufficientBiasRange("bias sweep must span both signs")
    if min(-bias.min(), bias.max()) <= 3 * hf_over_e:
        raise InsufficientBiasRange(
            f"|V| must exceed 3hf/e = {3 * hf_over_e:.3g} V at both ends of the sweep")

    # initial guess from the linear high-bias asymptote G (T_sys + e|V| / 2k)
    wings = np.abs(bias) > 3 * hf_over_e
    slope, intercept = np.polyfit(np.abs(bias[wings]), power[wings], 1)
    g0 = slope * 2 * K_B / E_CHARGE
    if not g0 > 0:
        raise FitNotConverged("noise does not grow with |bias|; cannot seed the fit")
    tsys0 = max(intercept / g0, 1e-3)
    t0 = 0.05
    scale = float(np.median(np.abs(power)))

    def resid(p):
        return (sntj_model(bias, f, math.exp(p[0]), p[1], p[2]) - power) / scale

    res = least_squares(resid, x0=[math.log(g0), t0, tsys0],
                        bounds=([-np.inf, 1e-4, -np.inf], [np.inf, 10.0, np.inf]),
                        x_scale=[1.0, 0.01, 1.0], xtol=xtol, ftol=1e-15, gtol=1e-15,
                        max_nfev=max_nfev, method="trf")
    if res.status <= 0:
        raise FitNotConverged(f"SNTJ fit did not converge: {res.message}")
    G, T, T_sys = math.exp(res.x[0]), float(res.x[1]), float(res.x[2])
    rms = float(np.sqrt(np.mean(res.fun ** 2)))
    return SntjFit(G, T, T_sys, int(res.nfev), rms)
