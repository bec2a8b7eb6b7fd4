"""Physical constants (CODATA, via scipy) and defaults used across modules."""

from scipy.constants import Boltzmann as K_B
from scipy.constants import e as E_CHARGE
from scipy.constants import h as H_PLANCK

Z0_OHM = 50.0
BANDWIDTH_HZ = 1.0e6
QUALITY_FACTOR = 7000.0

# Mode frequencies of the three-mode cavity and pump tones of the two schemes.
MODE_FREQUENCIES_HZ = (4.20e9, 6.16e9, 7.55e9)
MODE_LABELS = ("m1", "m2", "m3")
CM_PUMPS_HZ = (10.36e9, 3.35e9)
BS_PUMPS_HZ = (10.36e9, 11.75e9)

__all__ = [
    "K_B", "E_CHARGE", "H_PLANCK", "Z0_OHM", "BANDWIDTH_HZ", "QUALITY_FACTOR",
    "MODE_FREQUENCIES_HZ", "MODE_LABELS", "CM_PUMPS_HZ", "BS_PUMPS_HZ",
]
