"""Covariance-matrix representation of multimode Gaussian states.

Quadratures are ordered interleaved, ``(x_1, p_1, x_2, p_2, ...)``, with
``x = a + a^dag`` and ``p = -i(a - a^dag)`` so that the vacuum has unit
variance and the uncertainty principle reads ``nu_i >= 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    AsymmetryTooLarge,
    DimensionMismatch,
    EmptyOrFullSet,
    InvalidBipartition,
    NotPositiveSemidefinite,
    PairingFailure,
    UnknownMode,
    UnphysicalState,
)

ASYMMETRY_LIMIT = 1e-6
PSD_TOL = 1e-9
QUANTUM_TOL = 0.03
PAIRING_TOL = 1e-9


@dataclass(frozen=True)
class ModeSpec:
    label: str
    frequency: float  # Hz

    def __post_init__(self):
        if not self.frequency > 0:
            raise ValueError(f"mode {self.label!r}: frequency must be > 0, got {self.frequency}")


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    """Symmetrized second moments of the quadratures of N modes.

    The constructor symmetrizes ``entries`` and freezes the array. Diagonal
    entries are not required to be positive here; calibrated data may come
    out slightly negative and :func:`physicality_report` is what judges it.
    """

    modes: tuple[ModeSpec, ...]
    matrix: np.ndarray

    def __post_init__(self):
        modes = tuple(self.modes)
        labels = [m.label for m in modes]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate mode labels: {labels}")
        m = np.array(self.matrix, dtype=float)
        n = 2 * len(modes)
        if m.ndim != 2 or m.shape != (n, n):
            raise DimensionMismatch(f"expected {n}x{n} matrix for {len(modes)} modes, got shape {m.shape}")
        asym = float(np.max(np.abs(m - m.T))) if n else 0.0
        if asym > ASYMMETRY_LIMIT:
            raise AsymmetryTooLarge(f"max |V_ij - V_ji| = {asym:.3g} exceeds {ASYMMETRY_LIMIT:g}")
        m = 0.5 * (m + m.T)
        m.flags.writeable = False
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "matrix", m)

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(m.label for m in self.modes)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise UnknownMode(f"unknown mode {label!r}; have {list(self.labels)}") from None

    def with_matrix(self, matrix: np.ndarray) -> "CovarianceMatrix":
        return CovarianceMatrix(self.modes, matrix)

    def __repr__(self):
        return f"CovarianceMatrix(modes={list(self.labels)}, matrix=\n{np.array2string(self.matrix, precision=4)})"


def new_covariance(modes: Sequence[ModeSpec], entries) -> CovarianceMatrix:
    entries = np.asarray(entries, dtype=float)
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
        raise DimensionMismatch(f"covariance matrix must be square, got shape {entries.shape}")
    return CovarianceMatrix(tuple(modes), entries)


def default_modes(n: int) -> tuple[ModeSpec, ...]:
    """Modes labelled m1..mN; frequencies are placeholders (1..N GHz)."""
    return tuple(ModeSpec(f"m{i + 1}", (i + 1) * 1e9) for i in range(n))


def vacuum(modes: Sequence[ModeSpec] | int) -> CovarianceMatrix:
    if isinstance(modes, int):
        modes = default_modes(modes)
    return CovarianceMatrix(tuple(modes), np.eye(2 * len(modes)))


def two_mode_squeezed(r: float, modes: Sequence[ModeSpec] | None = None) -> CovarianceMatrix:
    """Pure two-mode squeezed vacuum with ``<x1 x2> > 0`` and ``<p1 p2> < 0``."""
    modes = default_modes(2) if modes is None else tuple(modes)
    c, s = np.cosh(2 * r), np.sinh(2 * r)
    z = np.diag([1.0, -1.0])
    v = np.block([[c * np.eye(2), s * z], [s * z, c * np.eye(2)]])
    return CovarianceMatrix(modes, v)


def direct_sum(*states: CovarianceMatrix) -> CovarianceMatrix:
    """Product state of independent subsystems."""
    from scipy.linalg import block_diag

    modes = tuple(m for s in states for m in s.modes)
    return CovarianceMatrix(modes, block_diag(*[s.matrix for s in states]))


def symplectic_form(n_modes: int) -> np.ndarray:
    if n_modes < 1:
        raise ValueError("n_modes must be >= 1")
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


@dataclass(frozen=True)
class SymplecticSpectrum:
    values: tuple[float, ...]
    pairing_residual: float

    @property
    def min(self) -> float:
        return self.values[0]


def _spectrum(matrix: np.ndarray) -> SymplecticSpectrum:
    n = matrix.shape[0] // 2
    eig = np.linalg.eigvals(symplectic_form(n) @ matrix)
    scale = max(1.0, float(np.max(np.abs(matrix))))
    re_resid = float(np.max(np.abs(eig.real))) / scale
    # stable sort keeps ties in original eigenvalue order
    im = np.sort(eig.imag, kind="stable")
    neg = -im[:n][::-1]
    pos = im[n:]
    pair_resid = float(np.max(np.abs(pos - neg))) / scale
    residual = max(re_resid, pair_resid)
    if residual > PAIRING_TOL:
        raise PairingFailure(f"eigenvalues of Omega V are not +-i nu paired (residual {residual:.3g})")
    values = np.sort(0.5 * (pos + neg), kind="stable")
    return SymplecticSpectrum(tuple(float(v) for v in np.abs(values)), residual)


def symplectic_eigenvalues(V: CovarianceMatrix) -> SymplecticSpectrum:
    lam_min = float(np.linalg.eigvalsh(V.matrix)[0])
    if lam_min < -PSD_TOL:
        raise NotPositiveSemidefinite(f"minimum eigenvalue {lam_min:.6g} < 0")
    return _spectrum(V.matrix)


@dataclass(frozen=True)
class PhysicalityReport:
    classical_ok: bool
    quantum_ok: bool
    min_eigenvalue: float
    min_symplectic_eigenvalue: float | None
    psd_tol: float
    quantum_tol: float


def physicality_report(V: CovarianceMatrix, psd_tol: float = PSD_TOL,
                       quantum_tol: float = QUANTUM_TOL) -> PhysicalityReport:
    lam_min = float(np.linalg.eigvalsh(V.matrix)[0])
    classical = lam_min >= -psd_tol
    nu_min = None
    if classical:
        try:
            nu_min = _spectrum(V.matrix).min
        except PairingFailure:
            nu_min = None
    quantum = classical and nu_min is not None and nu_min >= 1.0 - quantum_tol
    return PhysicalityReport(classical, bool(quantum), lam_min, nu_min, psd_tol, quantum_tol)


def _labels_to_indices(V: CovarianceMatrix, labels: Iterable[str]) -> list[int]:
    return [V.index(lab) for lab in labels]


def partial_transpose(V: CovarianceMatrix, flipped: Iterable[str]) -> CovarianceMatrix:
    """Time-reverse the modes in ``flipped`` (``p -> -p``)."""
    flipped = list(dict.fromkeys(flipped))
    idx = _labels_to_indices(V, flipped)
    if not idx or len(idx) == V.n_modes:
        raise EmptyOrFullSet("partial transpose needs a nonempty proper subset of modes")
    signs = np.ones(2 * V.n_modes)
    for i in idx:
        signs[2 * i + 1] = -1.0
    return V.with_matrix(signs[:, None] * V.matrix * signs[None, :])


def reduce_to_modes(V: CovarianceMatrix, keep: Sequence[str]) -> CovarianceMatrix:
    if not keep:
        raise ValueError("keep must be nonempty")
    idx = _labels_to_indices(V, keep)
    rows = [k for i in idx for k in (2 * i, 2 * i + 1)]
    return CovarianceMatrix(tuple(V.modes[i] for i in idx), V.matrix[np.ix_(rows, rows)])


def purity(V: CovarianceMatrix, tol: float = 1e-9) -> float:
    det = float(np.linalg.det(V.matrix))
    if det < 1.0 - tol:
        raise UnphysicalState(f"det V = {det:.6g} < 1 would imply purity > 1")
    return min(1.0, 1.0 / np.sqrt(det))


@dataclass(frozen=True)
class Bipartition:
    side_a: frozenset[str]
    side_b: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "side_a", frozenset(self.side_a))
        object.__setattr__(self, "side_b", frozenset(self.side_b))
        if not self.side_a or not self.side_b:
            raise InvalidBipartition("both sides of a bipartition must be nonempty")
        if self.side_a & self.side_b:
            raise InvalidBipartition(f"sides overlap: {sorted(self.side_a & self.side_b)}")

    @classmethod
    def split(cls, V: CovarianceMatrix, side_a: Iterable[str]) -> "Bipartition":
        side_a = frozenset(side_a)
        return cls(side_a, frozenset(V.labels) - side_a)

    def check(self, V: CovarianceMatrix) -> None:
        if self.side_a | self.side_b != set(V.labels):
            raise InvalidBipartition(
                f"bipartition {self} does not cover modes {list(V.labels)} exactly")

    def smaller_side(self, V: CovarianceMatrix) -> list[str]:
        """Smaller side in mode order; ties go to the side holding the first mode."""
        a = [lab for lab in V.labels if lab in self.side_a]
        b = [lab for lab in V.labels if lab in self.side_b]
        if len(a) != len(b):
            return a if len(a) < len(b) else b
        return a if V.labels[0] in self.side_a else b

    def __str__(self):
        return "{" + ",".join(sorted(self.side_a)) + "}|{" + ",".join(sorted(self.side_b)) + "}"


def single_mode_bipartitions(V: CovarianceMatrix) -> list[Bipartition]:
    """The splits {k} | rest, one per mode, in mode order."""
    return [Bipartition.split(V, [lab]) for lab in V.labels]
