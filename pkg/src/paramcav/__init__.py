"""Simulation, calibration and entanglement certification of multimode
Gaussian microwave states from a parametrically pumped cavity."""

__version__ = "0.1.0"
