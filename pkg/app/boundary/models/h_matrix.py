import numpy as np
from numpy.typing import NDArray

from app.base.models.base_model import DomainModel
from app.harmonic.models.alpha_field import AlphaField, dh_from_jacobian


class HMatrix(DomainModel):
    """
    H(p), the matrix of (dh_{p,l})_k^-(0):

        [[ h0,  h1, h2],
         [-h1,  h0, h3],
         [-h2, -h3, h0]]
    """

    p: np.ndarray
    h0: float
    h1: float
    h2: float
    h3: float

    @classmethod
    def at(cls, p) -> "HMatrix":
        """Assemble H(p) from the alpha Jacobian at x = 0"""
        field = AlphaField(p=p)
        d = dh_from_jacobian(field.jacobian(np.zeros(4)))
        return cls(p=field.p, h0=float(d[0, 0]), h1=float(d[0, 1]), h2=float(d[0, 2]), h3=float(d[1, 2]))

    @property
    def matrix(self) -> NDArray:
        return np.array(
            [
                [self.h0, self.h1, self.h2],
                [-self.h1, self.h0, self.h3],
                [-self.h2, -self.h3, self.h0],
            ]
        )

    @property
    def det(self) -> float:
        """h0 (h0^2 + h1^2 + h2^2 + h3^2)"""
        return self.h0 * (self.h0**2 + self.h1**2 + self.h2**2 + self.h3**2)

    def solve(self, rhs) -> NDArray:
        """(pi^2 H)^{-1} rhs"""
        return np.linalg.solve(np.pi**2 * self.matrix, np.asarray(rhs, dtype=float))
