import numpy as np
from pydantic import field_validator

from app.base.models.base_model import DomainModel


class SymSpectrum(DomainModel):
    """Eigen-decomposition of a symmetric 3x3 matrix.

    mu holds the eigenvalues in descending order and the columns of frame
    are the matching unit eigenvectors; frame is a proper rotation.
    """

    mu: np.ndarray
    frame: np.ndarray
    sweeps: int = 0

    @field_validator("mu", mode="before")
    @classmethod
    def validate_mu(cls, v):
        v = np.asarray(v, dtype=float)
        if v.shape != (3,):
            raise ValueError("mu must have three entries")
        if not (v[0] >= v[1] >= v[2]):
            raise ValueError("mu must be sorted in descending order")
        return v

    @field_validator("frame", mode="before")
    @classmethod
    def validate_frame(cls, v):
        v = np.asarray(v, dtype=float)
        if v.shape != (3, 3):
            raise ValueError("frame must be 3x3")
        return v

    def reconstruct(self) -> np.ndarray:
        return self.frame @ np.diag(self.mu) @ self.frame.T

    def sqrt_mu(self) -> np.ndarray:
        """Square roots with negatives from round-off clamped to zero"""
        return np.sqrt(np.maximum(self.mu, 0.0))

    def tol_mu(self, rel: float = 1e-9) -> float:
        return rel * max(float(self.mu[0]), 0.0)

    def is_strict(self, rel: float = 1e-9) -> bool:
        """mu1 > mu2 > mu3 beyond the degeneracy tolerance"""
        tol = self.tol_mu(rel)
        return bool(self.mu[0] - self.mu[1] > tol and self.mu[1] - self.mu[2] > tol)

    def has_ties(self, rel: float = 1e-9) -> bool:
        tol = self.tol_mu(rel)
        return bool(self.mu[0] - self.mu[1] <= tol or self.mu[1] - self.mu[2] <= tol)
