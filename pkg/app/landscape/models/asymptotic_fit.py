from typing import List, Optional

import numpy as np
from pydantic import field_validator

from app.base.models.base_model import DomainModel

QUANTITIES = ("F", "gradF", "M_entry", "M_grad")


class AsymptoticFit(DomainModel):
    """
    Values of a quantity at p = (1 - d) direction and the least-squares fit
    log|value| = slope log d + log constant.
    """

    quantity: str
    direction: np.ndarray
    d: List[float]
    values: List[float]
    slope: float
    constant: float
    radial: Optional[List[float]] = None
    tangential: Optional[List[float]] = None

    @field_validator("d")
    @classmethod
    def validate_d(cls, v):
        if any(x <= 0.0 for x in v) or any(b >= a for a, b in zip(v, v[1:])):
            raise ValueError("d must be positive and strictly decreasing")
        return v
