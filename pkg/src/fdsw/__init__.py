"""Stability of periodic wave trains in the full-dispersion shallow water
equations: dispersion, wave trains, modulational indices, Hill spectra,
eigenvalue collisions and time integration."""

from . import collisions, dispersion, evolve, hill, modindex, spectrum_origin, stokes
from .dispersion import Medium

__all__ = ["collisions", "dispersion", "evolve", "hill", "modindex", "spectrum_origin",
           "stokes", "Medium"]
__version__ = "0.1.0"
