import math

import numpy as np
from pydantic import Field, field_validator

from app.base.models.base_model import DomainModel


class QuadratureSpec(DomainModel):
    """
    Orders and tolerances of the S^3 and B^4 rules.

    psi_order and theta_order are Gauss-Legendre orders per panel, phi_points
    is the size of the periodic trapezoid rule and radial_order is the
    Gauss-Legendre order per radial panel.
    """

    radial_order: int = Field(default=12, ge=2)
    psi_order: int = Field(default=12, ge=2)
    theta_order: int = Field(default=10, ge=2)
    phi_points: int = Field(default=16, ge=4)
    mc_samples: int = Field(default=0, ge=0)
    seed: int = 20240601
    target_rel_tol: float = Field(default=1e-6, gt=0.0, lt=1.0)
    max_refinements: int = Field(default=2, ge=0)

    @field_validator("seed")
    @classmethod
    def validate_seed(cls, v):
        if not (-(2**63) <= v < 2**64):
            raise ValueError("seed must fit in 64 bits")
        return v

    def estimate_order(self) -> "QuadratureSpec":
        """Same panels at two thirds of every order, the companion rule of the error estimate"""
        return self.model_copy(
            update={
                "radial_order": max(2, math.ceil(2 * self.radial_order / 3)),
                "psi_order": max(2, math.ceil(2 * self.psi_order / 3)),
                "theta_order": max(2, math.ceil(2 * self.theta_order / 3)),
                "phi_points": max(4, math.ceil(2 * self.phi_points / 3)),
            }
        )

    def coarse(self) -> "QuadratureSpec":
        """A cheaper rule for search stages"""
        return self.model_copy(
            update={
                "radial_order": max(4, math.ceil(self.radial_order * 0.6)),
                "psi_order": max(4, math.ceil(self.psi_order * 0.6)),
                "theta_order": max(4, math.ceil(self.theta_order * 0.6)),
                "phi_points": max(8, math.ceil(self.phi_points * 0.6)),
                "target_rel_tol": min(0.5, self.target_rel_tol * 100.0),
                "max_refinements": min(self.max_refinements, 1),
            }
        )

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)
