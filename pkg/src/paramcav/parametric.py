"""Multi-pump parametric dynamics of a multimode cavity.

Each pump tone activates the down-conversion or coherent-coupling terms of
the mode pairs it is frequency matched to. The resulting quadratic
Hamiltonian ``H = (hbar/4) K^T M K`` gives Heisenberg dynamics
``dK/dt = Omega M K``; unitary evolution is ``S = exp(Omega M t)`` and the
open cavity is treated with single-port input-output theory.

Phase conventions (phase ``phi`` of the pump):

* down-conversion ``H = i hbar g (e^{i phi} a_i^dag a_j^dag - h.c.)``. At
  ``phi = 0`` this builds ``<x_i x_j> > 0`` and ``<p_i p_j> < 0``.
* coherent coupling ``H = hbar g (e^{i phi} a_i a_j^dag + h.c.)``. At
  ``phi = 0`` the matrix has ``+g`` on both the (x_i, x_j) and (p_i, p_j)
  entries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import expm, solve_continuous_lyapunov

from . import constants as const
from .errors import DegenerateResonance, IndexOutOfRange, SymplecticityLost, UnstableSystem
from .gaussian import CovarianceMatrix, ModeSpec, symplectic_form

DOWN_CONVERSION = "down_conversion"
COHERENT_COUPLING = "coherent_coupling"
DEFAULT_RWA_TOL_HZ = 1.0e6
SYMPLECTIC_TOL = 1e-9
LYAPUNOV_TOL = 1e-10


@dataclass(frozen=True)
class PumpTone:
    frequency: float  # Hz
    coupling: float  # rad/s
    phase: float = 0.0

    def __post_init__(self):
        if not self.frequency > 0:
            raise ValueError("pump frequency must be > 0")
        if self.coupling < 0:
            raise ValueError("pump coupling must be >= 0")


@dataclass(frozen=True)
class RwaTerm:
    kind: str
    mode_pair: tuple[int, int]
    strength: float
    phase: float = 0.0

    def __post_init__(self):
        i, j = self.mode_pair
        if i == j:
            raise ValueError("RWA terms couple two distinct modes")
        if self.kind not in (DOWN_CONVERSION, COHERENT_COUPLING):
            raise ValueError(f"unknown term kind {self.kind!r}")
        if self.strength < 0:
            raise ValueError("term strength must be >= 0")
        object.__setattr__(self, "mode_pair", (min(i, j), max(i, j)))


@dataclass(frozen=True, eq=False)
class QuadraticGenerator:
    h_matrix: np.ndarray
    terms: tuple[RwaTerm, ...] = ()

    def __post_init__(self):
        m = np.array(self.h_matrix, dtype=float)
        if np.max(np.abs(m - m.T), initial=0.0) > 1e-12:
            raise ValueError("generator matrix must be symmetric")
        m.flags.writeable = False
        object.__setattr__(self, "h_matrix", m)
        object.__setattr__(self, "terms", tuple(self.terms))

    @property
    def n_modes(self) -> int:
        return self.h_matrix.shape[0] // 2


@dataclass(frozen=True)
class CavityConfig:
    modes: tuple[ModeSpec, ...]
    kappas: tuple[float, ...]  # energy decay rates, rad/s
    rwa_tol: float = DEFAULT_RWA_TOL_HZ

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple(self.modes))
        object.__setattr__(self, "kappas", tuple(float(k) for k in self.kappas))
        if len(self.kappas) != len(self.modes):
            raise ValueError("need one decay rate per mode")
        if any(k <= 0 for k in self.kappas):
            raise ValueError("decay rates must be > 0")
        if self.rwa_tol <= 0:
            raise ValueError("rwa tolerance must be > 0")

    @classmethod
    def from_quality_factor(cls, modes: Sequence[ModeSpec], q: float = const.QUALITY_FACTOR,
                            rwa_tol: float = DEFAULT_RWA_TOL_HZ) -> "CavityConfig":
        return cls(tuple(modes), tuple(2 * math.pi * m.frequency / q for m in modes), rwa_tol)


def select_rwa_terms(modes: Sequence[ModeSpec], pump: PumpTone,
                     tol: float = DEFAULT_RWA_TOL_HZ) -> list[RwaTerm]:
    """Terms whose sum or difference frequency matches the pump within ``tol``.

    An empty list means the pump is off resonance with every pair.
    """
    if not modes:
        raise ValueError("need at least one mode")
    if tol <= 0:
        raise ValueError("tol must be > 0")
    freqs = [m.frequency for m in modes]
    if len(set(freqs)) != len(freqs):
        raise ValueError("mode frequencies must be distinct")
    for i, f in enumerate(freqs):
        if abs(pump.frequency - 2 * f) <= tol:
            raise DegenerateResonance(
                f"pump {pump.frequency:.6g} Hz matches 2 f of mode {modes[i].label} "
                "(single-mode squeezing is not modelled)")
    terms = []
    for i in range(len(freqs)):
        for j in range(i + 1, len(freqs)):
            if abs(pump.frequency - (freqs[i] + freqs[j])) <= tol:
                terms.append(RwaTerm(DOWN_CONVERSION, (i, j), pump.coupling, pump.phase))
            if abs(pump.frequency - abs(freqs[i] - freqs[j])) <= tol:
                terms.append(RwaTerm(COHERENT_COUPLING, (i, j), pump.coupling, pump.phase))
    return terms


def _ladder(n: int) -> np.ndarray:
    """Rows give a_k = (x_k + i p_k)/2 as a linear form in K."""
    lad = np.zeros((n, 2 * n), dtype=complex)
    for k in range(n):
        lad[k, 2 * k] = 0.5
        lad[k, 2 * k + 1] = 0.5j
    return lad


def term_matrix(n_modes: int, term: RwaTerm) -> np.ndarray:
    """Quadrature-basis matrix M of a single term, ``H = (hbar/4) K^T M K``."""
    i, j = term.mode_pair
    if not (0 <= i < n_modes and 0 <= j < n_modes):
        raise IndexOutOfRange(f"term {term.mode_pair} out of range for {n_modes} modes")
    lad = _ladder(n_modes)
    c = term.strength * np.exp(1j * term.phase)
    if term.kind == DOWN_CONVERSION:
        # i g e^{i phi} a_i^dag a_j^dag + h.c.
        bilinear = 1j * c * np.outer(lad[i].conj(), lad[j].conj())
    else:
        # g e^{i phi} a_i a_j^dag + h.c.
        bilinear = c * np.outer(lad[i], lad[j].conj())
    q = 2.0 * bilinear.real
    return 2.0 * (q + q.T)


def build_generator(modes: Sequence[ModeSpec] | int, terms: Sequence[RwaTerm]) -> QuadraticGenerator:
    n = modes if isinstance(modes, int) else len(modes)
    m = np.zeros((2 * n, 2 * n))
    for t in terms:
        m = m + term_matrix(n, t)
    return QuadraticGenerator(m, tuple(terms))


def symplectic_propagator(gen: QuadraticGenerator, t: float) -> np.ndarray:
    omega = symplectic_form(gen.n_modes)
    s = expm(omega @ gen.h_matrix * t)
    err = float(np.max(np.abs(s @ omega @ s.T - omega)))
    if err > SYMPLECTIC_TOL:
        raise SymplecticityLost(f"|S Omega S^T - Omega|_max = {err:.3g}; subdivide the time step")
    return s


def unitary_propagate(V_in: CovarianceMatrix, gen: QuadraticGenerator, t: float) -> CovarianceMatrix:
    if gen.n_modes != V_in.n_modes:
        raise ValueError(f"generator has {gen.n_modes} modes, state has {V_in.n_modes}")
    if t < 0:
        raise ValueError("t must be >= 0")
    if t == 0:
        return V_in
    s = symplectic_propagator(gen, t)
    return V_in.with_matrix(s @ V_in.matrix @ s.T)


@dataclass(frozen=True, eq=False)
class SteadyState:
    output: CovarianceMatrix
    intracavity: np.ndarray
    drift: np.ndarray
    transfer: np.ndarray
    lyapunov_residual: float
    max_real_part: float


def drift_matrix(cfg: CavityConfig, gen: QuadraticGenerator) -> np.ndarray:
    n = len(cfg.modes)
    if gen.n_modes != n:
        raise ValueError(f"generator has {gen.n_modes} modes, cavity has {n}")
    damping = np.repeat(np.asarray(cfg.kappas), 2) / 2.0
    return symplectic_form(n) @ gen.h_matrix - np.diag(damping)


def steady_state(cfg: CavityConfig, gen: QuadraticGenerator) -> SteadyState:
    """Zero-detuning steady state with ``a_out = sqrt(kappa) a - a_in``.

    The Lyapunov residual is reported in units of the largest decay rate.
    """
    a = drift_matrix(cfg, gen)
    top = float(np.max(np.linalg.eigvals(a).real))
    if top >= 0:
        raise UnstableSystem(
            f"drift matrix not Hurwitz (max Re lambda = {top:.6g} rad/s): "
            "pump is at or above the parametric oscillation threshold", top)
    n2 = a.shape[0]
    kq = np.repeat(np.asarray(cfg.kappas), 2)
    scale = float(kq.max())
    k = np.diag(np.sqrt(kq))
    a_n = a / scale
    d_n = np.diag(kq) / scale
    v_cav = solve_continuous_lyapunov(a_n, -d_n)
    v_cav = 0.5 * (v_cav + v_cav.T)
    resid = float(np.max(np.abs(a_n @ v_cav + v_cav @ a_n.T + d_n)))
    transfer = k @ np.linalg.solve(-a, k) - np.eye(n2)
    v_out = transfer @ transfer.T
    return SteadyState(CovarianceMatrix(cfg.modes, v_out), v_cav, a, transfer, resid, top)


def steady_state_output(cfg: CavityConfig, gen: QuadraticGenerator) -> CovarianceMatrix:
    return steady_state(cfg, gen).output


# scheme presets

SCHEMES = ("CM", "BS")
# Pump phases chosen so the outputs carry x-x / p-p correlations with the
# signs of the measured matrices; the CM coupling pump needs phi = +pi/2.
_SCHEME_PUMPS = {
    "CM": ((const.CM_PUMPS_HZ[0], 0.0), (const.CM_PUMPS_HZ[1], math.pi / 2)),
    "BS": ((const.BS_PUMPS_HZ[0], 0.0), (const.BS_PUMPS_HZ[1], 0.0)),
}


def preset_modes() -> tuple[ModeSpec, ...]:
    return tuple(ModeSpec(lab, f) for lab, f in zip(const.MODE_LABELS, const.MODE_FREQUENCIES_HZ))


def scheme_pumps(name: str, g1: float, g2: float) -> tuple[PumpTone, PumpTone]:
    key = name.upper()
    if key not in _SCHEME_PUMPS:
        raise ValueError(f"unknown scheme {name!r}; expected one of {SCHEMES}")
    (f1, ph1), (f2, ph2) = _SCHEME_PUMPS[key]
    return PumpTone(f1, g1, ph1), PumpTone(f2, g2, ph2)


def generator_from_pumps(cfg: CavityConfig, pumps: Sequence[PumpTone]) -> QuadraticGenerator:
    terms = [t for p in pumps for t in select_rwa_terms(cfg.modes, p, cfg.rwa_tol)]
    return build_generator(cfg.modes, terms)


def scheme_preset(name: str, g1: float, g2: float,
                  rwa_tol: float = DEFAULT_RWA_TOL_HZ) -> tuple[CavityConfig, QuadraticGenerator]:
    if g1 < 0 or g2 < 0:
        raise ValueError("couplings must be >= 0")
    cfg = CavityConfig.from_quality_factor(preset_modes(), const.QUALITY_FACTOR, rwa_tol)
    return cfg, generator_from_pumps(cfg, scheme_pumps(name, g1, g2))


def oscillation_threshold(name: str, ratio: float = 1.0, *, rtol: float = 1e-10) -> float:
    """Coupling g1 (with g2 = ratio * g1) at which the preset turns unstable.

    Found by bisection on the largest real part of the drift eigenvalues.
    """
    def top(g):
        cfg, gen = scheme_preset(name, g, ratio * g)
        return float(np.max(np.linalg.eigvals(drift_matrix(cfg, gen)).real))

    lo = 0.0
    hi = max(CavityConfig.from_quality_factor(preset_modes()).kappas)
    while top(hi) < 0:
        lo, hi = hi, 2 * hi
        if hi > 1e6 * lo + 1e12:
            raise RuntimeError(f"no oscillation threshold found for scheme {name}")
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if top(mid) < 0 else (lo, mid)
    return lo
