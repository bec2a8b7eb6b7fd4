"""The two measured three-mode covariance matrices, transcribed as printed."""

import numpy as np

from .gaussian import CovarianceMatrix, two_mode_squeezed, vacuum
from .parametric import preset_modes

CM_MATRIX = np.array([
    [2.05, 0.00, 1.87, 0.00, 0.88, 0.00],
    [0.00, 2.04, 0.00, -1.87, 0.00, 0.88],
    [1.87, 0.00, 2.85, 0.00, 1.56, 0.00],
    [0.00, -1.87, 0.00, 2.85, 0.00, -1.56],
    [0.88, 0.00, 1.56, 0.00, 1.79, 0.00],
    [0.00, 0.88, 0.00, -1.56, 0.00, 1.79],
])

BS_MATRIX = np.array([
    [3.91, 0.00, 2.34, 0.00, 2.78, 0.00],
    [0.00, 3.91, 0.00, -2.33, 0.00, -2.78],
    [2.34, 0.00, 2.28, 0.00, 1.45, 0.00],
    [0.00, -2.33, 0.00, 2.28, 0.00, 1.45],
    [2.78, 0.00, 1.45, 0.00, 2.72, 0.00],
    [0.00, -2.78, 0.00, 1.45, 0.00, 2.72],
])

# published measures per scheme: (nu_tilde_min values, tripartite negativity, S)
PUBLISHED = {
    "CM": ((0.48, 0.39, 0.57), 0.73, 1.49),
    "BS": ((0.31, 0.48, 0.39), 0.94, 1.19),
}


def cm_state() -> CovarianceMatrix:
    return CovarianceMatrix(preset_modes(), CM_MATRIX)


def bs_state() -> CovarianceMatrix:
    return CovarianceMatrix(preset_modes(), BS_MATRIX)


def vacuum_state() -> CovarianceMatrix:
    return vacuum(preset_modes())


def tms_state(r: float = 0.5) -> CovarianceMatrix:
    modes = preset_modes()[:2]
    return two_mode_squeezed(r, modes)


