"""Ribbon Grothendieck-Verdier categories from bosonic lattice data."""

from __future__ import annotations

from .errors import GVLatError
from .lattice import BosonicLatticeData, Coset, discriminant_enumerate, from_json, validate
from .gvcat import GVCategory

__all__ = ["BosonicLatticeData", "Coset", "GVCategory", "GVLatError", "discriminant_enumerate", "from_json", "validate"]
__version__ = "0.1.0"
