from typing import List, Optional

import numpy as np

from app.base.models.base_model import DomainModel


class BoundaryTrace(DomainModel):
    """Boundary data at a point of S^3: alpha trace and Im[(x-p)^bar dx]/|x-p|^4"""

    p: np.ndarray
    x: np.ndarray
    alpha: np.ndarray
    h: np.ndarray


class FieldSample(DomainModel):
    """Everything the closed forms give at one (p, x)"""

    p: np.ndarray
    x: np.ndarray
    branch: str
    alpha: np.ndarray
    grad_alpha: np.ndarray
    h: np.ndarray
    dh_asd: np.ndarray
    boundary_trace: Optional[BoundaryTrace] = None


class PoissonComparison(DomainModel):
    p: np.ndarray
    x: np.ndarray
    index: int
    closed: float
    poisson: float
    abs_error: float
    est_rel_error: float
    converged: bool


class LaplacianReport(DomainModel):
    """Largest scaled FD Laplacian of the alpha and (dh)^- fields over the sampled points"""

    p: np.ndarray
    points: int
    max_alpha: float
    max_dh: float
    worst_point: List[float]


class MeanValueReport(DomainModel):
    """Ball integral of 2 (dh)^- against pi^2 (dh)^-(0), entrywise"""

    p: np.ndarray
    integral: np.ndarray
    expected: np.ndarray
    max_rel_error: float
    est_rel_error: float
