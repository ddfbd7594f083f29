# Shared numerical value types
from .spectrum import SymSpectrum

__all__ = ["SymSpectrum"]
