from typing import List

import numpy as np

from app.base.models.base_model import DomainModel
from app.boundary.models.boundary_spec import BoundarySpec
from app.core.models.spectrum import SymSpectrum


class PerturbationResult(DomainModel):
    """Outcome of separating the spectrum of M^t M at p0"""

    spec: BoundarySpec
    p0: np.ndarray
    mu: float
    M_before: np.ndarray
    M_after: np.ndarray
    spectrum_before: SymSpectrum
    spectrum_after: SymSpectrum
    gaps: List[float]
    regularized: bool
    delta_synth: np.ndarray

    @property
    def strictly_separated(self) -> bool:
        g = self.gaps
        return g[0] > 0.0 and g[1] > 0.0 and g[2] > 0.0
