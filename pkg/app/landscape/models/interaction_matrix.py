from typing import Dict

import numpy as np
from pydantic import field_validator

from app.base.models.base_model import DomainModel
from app.core.models.spectrum import SymSpectrum
from app.core.utils.linalg import det_sign, sym_eigen
from app.core.utils.rotations import as_matrix3

# |det M| at or below DET_TOL * |M|^3 counts as det M = 0
DET_TOL = 1e-10


class InteractionMatrix(DomainModel):
    """
    M(A_0, p) with the spectrum of M^t M.

    route records how M was obtained: "closed" (pi^2 H(p) A with a zero
    base), "closed+volume", "volume" or "boundary".
    """

    M: np.ndarray
    spectrum: SymSpectrum
    detM: float
    p: np.ndarray
    route: str = "closed"
    est_rel_error: float = 0.0
    nodes_used: int = 0
    converged: bool = True

    @field_validator("M", mode="before")
    @classmethod
    def validate_m(cls, v):
        return as_matrix3(v)

    @classmethod
    def build(cls, m, p, route: str, est_rel_error: float = 0.0, nodes_used: int = 0, converged: bool = True) -> "InteractionMatrix":
        m = as_matrix3(m)
        return cls(
            M=m,
            spectrum=sym_eigen(m.T @ m),
            detM=float(np.linalg.det(m)),
            p=np.asarray(p, dtype=float),
            route=route,
            est_rel_error=est_rel_error,
            nodes_used=nodes_used,
            converged=converged,
        )

    @property
    def mu(self) -> np.ndarray:
        return self.spectrum.mu

    @property
    def sqrt_mu(self) -> np.ndarray:
        return self.spectrum.sqrt_mu()

    @property
    def det_sign(self) -> int:
        """Sign of det M with the zero band |det M| <= 1e-10 |M|^3"""
        return det_sign(self.M, DET_TOL)

    def gammas(self) -> Dict[str, float]:
        s1, s2, s3 = (float(v) for v in self.sqrt_mu)
        return {
            "Gamma1p": s1 + s2 + s3,
            "Gamma1m": s1 + s2 - s3,
            "Gamma2p": s1 - s2 - s3,
            "Gamma2m": s1 - s2 + s3,
            "Gamma3m": -s1 + s2 + s3,
            "Gamma10": s1 + s2,
            "Gamma20": s1 - s2,
        }
