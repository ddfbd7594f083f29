"""
Polynomial 1-forms A = sum_j A_j dx^j on R^4 with harmonic components.

Each component is a list of terms coef * x1^e1 x2^e2 x3^e3 x4^e4.
Harmonicity and constant divergence are checked exactly on the
coefficients; together they make A a solution of the linear Yang-Mills
equation d*dA = 0.
"""

from collections import defaultdict
from typing import Dict, List, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray
from pydantic import Field, field_validator, model_validator

from app.base.models.base_model import DomainModel
from app.core.exceptions import InvalidBoundarySpec

Monomial = Tuple[int, int, int, int]

MAX_DEGREE = 8
# relative size below which a symbolic coefficient counts as zero
COEF_TOL = 1e-12


class Term(DomainModel):
    mono: Tuple[int, int, int, int]
    coef: float

    @field_validator("mono")
    @classmethod
    def validate_mono(cls, v):
        if any(e < 0 for e in v):
            raise ValueError("monomial exponents must be non-negative")
        if sum(v) > MAX_DEGREE:
            raise ValueError(f"monomial degree exceeds {MAX_DEGREE}")
        return tuple(int(e) for e in v)

    @property
    def degree(self) -> int:
        return sum(self.mono)


def _collect(terms) -> Dict[Monomial, float]:
    acc: Dict[Monomial, float] = defaultdict(float)
    for mono, coef in terms:
        acc[mono] += coef
    return dict(acc)


def _is_zero(poly: Dict[Monomial, float], scale: float) -> bool:
    return all(abs(c) <= COEF_TOL * max(scale, 1.0) for c in poly.values())


def laplacian_terms(terms: Sequence[Term]) -> Dict[Monomial, float]:
    """Symbolic Laplacian of one component"""
    out = []
    for t in terms:
        for j, e in enumerate(t.mono):
            if e >= 2:
                mono = list(t.mono)
                mono[j] -= 2
                out.append((tuple(mono), t.coef * e * (e - 1)))
    return _collect(out)


def derivative_terms(terms: Sequence[Term], j: int) -> Dict[Monomial, float]:
    out = []
    for t in terms:
        e = t.mono[j]
        if e >= 1:
            mono = list(t.mono)
            mono[j] -= 1
            out.append((tuple(mono), t.coef * e))
    return _collect(out)


class HarmonicPolyOneForm(DomainModel):
    """
    Four harmonic polynomial components A_1..A_4 with constant divergence.

    Raises:
        InvalidBoundarySpec: On construction when a component has a
            non-zero Laplacian or the divergence is not constant
    """

    components: List[List[Term]] = Field(default_factory=lambda: [[], [], [], []])

    @field_validator("components")
    @classmethod
    def validate_components(cls, v):
        if len(v) != 4:
            raise ValueError(f"a 1-form on R^4 needs 4 components, got {len(v)}")
        return v

    @model_validator(mode="after")
    def validate_harmonic(self):
        scale = self.coef_scale
        for j, terms in enumerate(self.components):
            if not _is_zero(laplacian_terms(terms), scale):
                raise InvalidBoundarySpec(f"component {j + 1} of the base 1-form is not harmonic")
        div = _collect(
            (mono, c) for j in range(4) for mono, c in derivative_terms(self.components[j], j).items()
        )
        non_constant = {m: c for m, c in div.items() if sum(m) > 0}
        if not _is_zero(non_constant, scale):
            raise InvalidBoundarySpec("the base 1-form must have constant divergence")
        return self

    @classmethod
    def zero(cls) -> "HarmonicPolyOneForm":
        return cls()

    @classmethod
    def from_coefficients(cls, components: Sequence[Sequence[Tuple[Sequence[int], float]]]) -> "HarmonicPolyOneForm":
        """Build from [(mono, coef), ...] per component"""
        return cls(components=[[Term(mono=tuple(m), coef=float(c)) for m, c in comp] for comp in components])

    @property
    def coef_scale(self) -> float:
        coefs = [abs(t.coef) for comp in self.components for t in comp]
        return max(coefs, default=0.0)

    @property
    def max_degree(self) -> int:
        return max((t.degree for comp in self.components for t in comp), default=0)

    @property
    def is_zero(self) -> bool:
        return all(t.coef == 0.0 for comp in self.components for t in comp)

    def evaluate(self, x) -> NDArray:
        """Component values A_j(x) as (..., 4)"""
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape)
        for j, terms in enumerate(self.components):
            for t in terms:
                out[..., j] += t.coef * np.prod(x ** np.array(t.mono, dtype=float), axis=-1)
        return out

    def jacobian(self, x) -> NDArray:
        """J[..., a, b] = dA_a/dx_b"""
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape + (4,))
        for a, terms in enumerate(self.components):
            for b in range(4):
                for mono, c in derivative_terms(terms, b).items():
                    out[..., a, b] += c * np.prod(x ** np.array(mono, dtype=float), axis=-1)
        return out

    def to_dict(self) -> dict:
        return {
            "components": [
                [{"mono": list(t.mono), "coef": t.coef} for t in comp] for comp in self.components
            ]
        }
