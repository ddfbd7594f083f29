from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from pydantic import ValidationError as PydanticValidationError

from app.core.exceptions import ValidationError
from app.quadrature.models.quadrature_spec import QuadratureSpec
from config.numerics import SearchSettings
from config.settings import settings


class RunConfig(BaseModel):
    """
    Global command-line flags, validated before any computation runs.
    Unset flags fall back to the environment settings.
    """

    model_config = ConfigDict(frozen=True)

    quad_radial: Optional[int] = Field(default=None, ge=2)
    quad_sphere: Optional[int] = Field(default=None, ge=2)
    quad_tol: Optional[float] = Field(default=None, gt=0.0, lt=1.0)
    mc_samples: Optional[int] = Field(default=None, ge=0)
    seed: Optional[int] = Field(default=None, ge=0, lt=2**64)
    out: Optional[str] = None
    fmt: Optional[Literal["json", "csv", "text"]] = None

    @classmethod
    def from_flags(cls, **flags) -> "RunConfig":
        try:
            return cls(**flags)
        except PydanticValidationError as e:
            raise ValidationError(_first_error(e), details=str(e)) from e

    def output_format(self, default: str = "json") -> str:
        return self.fmt or default

    @property
    def search(self) -> SearchSettings:
        return settings.numerics.search

    @property
    def effective_seed(self) -> int:
        return self.seed if self.seed is not None else settings.numerics.search.seed

    def quadrature_spec(self) -> QuadratureSpec:
        """Default spec from the settings with the flags applied"""
        base = settings.numerics.quadrature.to_spec()
        update = {"seed": self.effective_seed}
        if self.quad_radial is not None:
            update["radial_order"] = self.quad_radial
        if self.quad_sphere is not None:
            update["psi_order"] = self.quad_sphere
            update["theta_order"] = self.quad_sphere
        if self.quad_tol is not None:
            update["target_rel_tol"] = self.quad_tol
        if self.mc_samples is not None:
            update["mc_samples"] = self.mc_samples
        try:
            return QuadratureSpec(**{**base.model_dump(), **update})
        except PydanticValidationError as e:
            raise ValidationError(_first_error(e), details=str(e)) from e

    def seed_sequence(self) -> np.random.SeedSequence:
        return np.random.SeedSequence(self.effective_seed)

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed_sequence())


def _first_error(e: PydanticValidationError) -> str:
    err = e.errors()[0]
    where = ".".join(str(part) for part in err.get("loc", ())) or "input"
    return f"Invalid {where}: {err.get('msg', 'invalid value')}"
