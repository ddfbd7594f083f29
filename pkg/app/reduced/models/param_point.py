import math
from typing import Optional, Tuple

import numpy as np
from pydantic import Field, field_validator, model_validator

from app.base.models.base_model import DomainModel
from app.core.utils.points import as_point4
from app.core.utils.rotations import as_matrix3, is_rotation

WINDOW_FACES = ("p", "lambda_low", "lambda_high")


class ParamPoint(DomainModel):
    """A point q = (p, R, lambda) of the parameter space at coupling epsilon"""

    p: np.ndarray
    R: np.ndarray
    lam: float = Field(gt=0.0)
    epsilon: float = Field(gt=0.0)

    @field_validator("p", mode="before")
    @classmethod
    def validate_p(cls, v):
        v = as_point4(v, "p")
        if not float(np.linalg.norm(v)) < 1.0:
            raise ValueError("p must lie in the open unit ball")
        return v

    @field_validator("R", mode="before")
    @classmethod
    def validate_r(cls, v):
        v = as_matrix3(v, "R")
        if not is_rotation(v, 1e-9):
            raise ValueError("R must be a rotation")
        return v


class SearchWindow(DomainModel):
    """
    The box B_{1-d0} x SO(3) x (0, lambda0) cut down to D1 eps < lambda^2 < D2 eps.

    C4, C5 and F_max are the grid extrema a suggested window was built from.
    """

    d0: float = Field(gt=0.0, lt=1.0)
    lambda0: float = Field(gt=0.0)
    D1: float = Field(gt=0.0)
    D2: float = Field(gt=0.0)
    C0: float = Field(gt=0.0)
    C4: Optional[float] = None
    C5: Optional[float] = None
    F_max: Optional[float] = None

    @model_validator(mode="after")
    def validate_window(self):
        if not 2.0 * self.lambda0 < self.d0:
            raise ValueError("window needs 2 lambda0 < d0")
        if not self.D1 < self.D2:
            raise ValueError("window needs D1 < D2")
        return self

    @classmethod
    def from_values(cls, d0: float, D1: float, D2: float, C0: float) -> "SearchWindow":
        return cls(d0=d0, lambda0=0.99 * d0 / 2.0, D1=D1, D2=D2, C0=C0)

    @property
    def radius(self) -> float:
        return 1.0 - self.d0

    def lambda_bounds(self, epsilon: float) -> Tuple[float, float]:
        return math.sqrt(self.D1 * epsilon), math.sqrt(self.D2 * epsilon)

    def fits(self, epsilon: float) -> bool:
        """(D2 eps)^(1/2) < lambda0"""
        return self.lambda_bounds(epsilon)[1] < self.lambda0

    def violated_face(self, q: ParamPoint) -> Optional[str]:
        """First face of the window that q is not strictly inside of"""
        if not float(np.linalg.norm(q.p)) < self.radius:
            return "p"
        lam2 = q.lam**2
        if not lam2 > self.D1 * q.epsilon:
            return "lambda_low"
        if not lam2 < self.D2 * q.epsilon:
            return "lambda_high"
        return None
