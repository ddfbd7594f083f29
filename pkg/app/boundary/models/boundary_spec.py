from typing import List

import numpy as np
from numpy.typing import NDArray
from pydantic import Field, field_validator

from app.base.models.base_model import DomainModel
from app.boundary.models.harmonic_poly import HarmonicPolyOneForm
from app.core.utils.forms import asd_project, exterior_derivative
from app.core.utils.points import check_closed_ball
from app.core.utils.rotations import as_matrix3


class BoundarySpec(DomainModel):
    """
    Boundary connection of the synthesized family

        B_{0,l}(A) = A_{0,l} + sum_k a_{kl} beta_k,   l = 1, 2, 3

    with a harmonic polynomial base A_0 and a real 3x3 matrix `synth` (the
    "A" of the file format).
    """

    base: List[HarmonicPolyOneForm] = Field(
        default_factory=lambda: [HarmonicPolyOneForm.zero() for _ in range(3)]
    )
    synth: np.ndarray = Field(default_factory=lambda: np.zeros((3, 3)))

    @field_validator("base")
    @classmethod
    def validate_base(cls, v):
        if len(v) != 3:
            raise ValueError(f"base needs one 1-form per Lie component (3), got {len(v)}")
        return v

    @field_validator("synth", mode="before")
    @classmethod
    def validate_synth(cls, v):
        return as_matrix3(v, "A")

    @classmethod
    def flat(cls, synth) -> "BoundarySpec":
        """base = 0 with the given synthesis matrix"""
        return cls(synth=synth)

    @property
    def base_is_zero(self) -> bool:
        return all(form.is_zero for form in self.base)

    def with_synth(self, synth) -> "BoundarySpec":
        return BoundarySpec(base=self.base, synth=synth)

    def base_curvature_asd(self, x) -> NDArray:
        """(dA_{0,l})^- coefficients, shape (..., 3, 3) indexed [l, k]"""
        x = check_closed_ball(x)
        rows = [asd_project(exterior_derivative(form.jacobian(x))) for form in self.base]
        return np.stack(rows, axis=-2)

    def curvature_asd(self, x) -> NDArray:
        """(dB_{0,l})^- coefficients: the base part plus row l = column l of A"""
        return self.base_curvature_asd(x) + self.synth.T

    def to_dict(self) -> dict:
        return {
            "base": [form.to_dict()["components"] for form in self.base],
            "A": self.synth.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BoundarySpec":
        base = [
            HarmonicPolyOneForm(components=[[{"mono": t["mono"], "coef": t["coef"]} for t in comp] for comp in form])
            for form in data.get("base", [[[], [], [], []]] * 3)
        ]
        return cls(base=base, synth=data.get("A", np.zeros((3, 3))))
