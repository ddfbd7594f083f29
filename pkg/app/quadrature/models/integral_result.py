from typing import Optional

import numpy as np
from pydantic import Field, field_validator

from app.base.models.base_model import DomainModel


class IntegralResult(DomainModel):
    """
    Value of a scalar integral with its error report.

    est_rel_error is relative to the L1 mass of the integrand. For Monte
    Carlo results std_error holds the standard error of the estimate.
    """

    value: float
    est_rel_error: float = Field(ge=0.0)
    nodes_used: int = Field(ge=0)
    converged: bool = True
    refinements: int = 0
    std_error: Optional[float] = None


class IntegralVector(DomainModel):
    """Componentwise integral of a vector-valued integrand"""

    values: np.ndarray
    est_rel_error: float = Field(ge=0.0)
    nodes_used: int = Field(ge=0)
    converged: bool = True
    refinements: int = 0

    @field_validator("values", mode="before")
    @classmethod
    def validate_values(cls, v):
        return np.asarray(v, dtype=float)

    def component(self, k: int) -> IntegralResult:
        return IntegralResult(
            value=float(self.values.flat[k]),
            est_rel_error=self.est_rel_error,
            nodes_used=self.nodes_used,
            converged=self.converged,
            refinements=self.refinements,
        )
