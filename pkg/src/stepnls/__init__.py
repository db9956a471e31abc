"""Defocusing NLS with step-like boundary data: scattering, long-time asymptotics and direct evolution."""
from .background import Params, Sector, classify_sector, make_params, sector_of_xi

__version__ = "0.1.0"

__all__ = ["Params", "Sector", "classify_sector", "make_params", "sector_of_xi", "__version__"]
