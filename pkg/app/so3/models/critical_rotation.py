from typing import Optional, Tuple

import numpy as np
from pydantic import field_validator

from app.base.models.base_model import DomainModel

# sign patterns (s1, s2, s3), listed so that values come out descending
POSITIVE_PATTERNS = ((1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1))
NEGATIVE_PATTERNS = ((1, 1, -1), (1, -1, 1), (-1, 1, 1), (-1, -1, -1))


class CriticalRotation(DomainModel):
    """
    A critical point R0 of tau_M(R) = Tr(R M) on SO(3).

    B = R0 M is symmetric with eigenvalues lambda_i = s_i sqrt(mu_i) in the
    eigenframe `frame`; the Hessian in that frame is diagonal.
    """

    R0: np.ndarray
    B: np.ndarray
    signs: Tuple[int, int, int]
    value: float
    morse_index: Optional[int] = None
    degenerate: bool = False
    hessian_diag: np.ndarray
    frame: np.ndarray
    route: str = "eigen"

    @field_validator("signs")
    @classmethod
    def validate_signs(cls, v):
        if any(s not in (-1, 1) for s in v):
            raise ValueError("signs must be +1 or -1")
        return v

    @property
    def lambdas(self) -> np.ndarray:
        d = self.hessian_diag
        # hessian_diag = (-l2-l3, -l1-l3, -l1-l2)
        total = -0.5 * float(np.sum(d))
        return np.array([total + d[0], total + d[1], total + d[2]])

    def symmetry_residual(self, m) -> float:
        rm = self.R0 @ np.asarray(m, dtype=float)
        return float(np.linalg.norm(rm - rm.T))
