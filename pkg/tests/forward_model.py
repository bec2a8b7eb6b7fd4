"""Forward model for calibration tests: covariance -> raw room-temperature moments.

Written directly from the calibration formulas, solved for the raw moments;
it shares no code with the library's inverse path beyond the constants.
"""

import itertools
import math

import numpy as np
from scipy.constants import Boltzmann as kB, e as qe, h as hP


def coth(f, T):
    return 1.0 / math.tanh(hP * f / (2 * kB * T))


def raw_from_covariance(V, modes, z0, bw, off_level=1e-9, rng=None):
    """``modes``: list of (label, f, G, T). Returns (on, off) dicts keyed like the library."""
    rng = rng or np.random.default_rng(0)
    slots = [(m, q) for m in modes for q in "IQ"]
    on, off = {}, {}
    for (a, qa), (b, qb) in itertools.combinations_with_replacement(slots, 2):
        ia = 2 * modes.index(a) + "IQ".index(qa)
        ib = 2 * modes.index(b) + "IQ".index(qb)
        key = (a[0], qa, b[0], qb)
        _, fa, ga, ta = a
        _, fb, gb, tb = b
        if a is b and qa == qb:
            o = off_level * (1 + rng.uniform())
            on[key] = o + (V[ia, ib] - coth(fa, ta)) * ga * z0 * hP * fa * bw / 4
            off[key] = o
        elif a is b:
            o = off_level * rng.uniform(-0.01, 0.01)
            on[key] = o + V[ia, ib] * ga * z0 * hP * fa * bw / 4
            off[key] = o
        else:
            on[key] = V[ia, ib] * math.sqrt(ga * gb * fa * fb) * z0 * hP * bw / 4
            off[key] = off_level * rng.uniform(-0.01, 0.01)
    return on, off


def sntj_power(bias, f, G, T, T_sys):
    """Shot-noise junction output in the fit's units, ``G (T_sys + T_junction)``."""
    def xcoth(x):
        den = 2 * kB * T
        with np.errstate(invalid="ignore", divide="ignore"):
            out = x / np.tanh(x / den)
        return np.where(np.abs(x) < 1e-30, den, out)

    ev = qe * np.asarray(bias)
    return G * (T_sys + (xcoth(ev + hP * f) + xcoth(ev - hP * f)) / (4 * kB))
