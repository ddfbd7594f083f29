from typing import Dict, List, Optional

import numpy as np
from pydantic import Field

from app.base.models.base_model import DomainModel
from app.landscape.models.interaction_matrix import InteractionMatrix

SCAN_HEADER = (
    "p1", "p2", "p3", "p4", "F", "mu1", "mu2", "mu3", "detM",
    "Gamma1p", "Gamma1m", "Gamma2p", "Gamma2m", "Gamma3m",
    "G1p", "G1m", "G2p", "G2m", "G3m", "G10", "G20",
)

# G name -> the Gamma it squares
G_OF_GAMMA = {
    "G1p": "Gamma1p",
    "G1m": "Gamma1m",
    "G2p": "Gamma2p",
    "G2m": "Gamma2m",
    "G3m": "Gamma3m",
    "G10": "Gamma10",
    "G20": "Gamma20",
}


class LandscapeSample(DomainModel):
    """F, M and every Gamma and G = Gamma^2 / F at one p"""

    p: np.ndarray
    F: float = Field(gt=0.0)
    M: InteractionMatrix
    gamma: Dict[str, float]
    G: Dict[str, float]
    index: Optional[int] = None

    @classmethod
    def build(cls, p, F: float, M: InteractionMatrix, index: Optional[int] = None) -> "LandscapeSample":
        gamma = M.gammas()
        G = {name: gamma[g] ** 2 / F for name, g in G_OF_GAMMA.items()}
        return cls(p=np.asarray(p, dtype=float), F=F, M=M, gamma=gamma, G=G, index=index)

    def csv_row(self) -> List[float]:
        mu = self.M.mu
        return (
            [float(v) for v in self.p]
            + [self.F, float(mu[0]), float(mu[1]), float(mu[2]), self.M.detM]
            + [self.gamma[k] for k in ("Gamma1p", "Gamma1m", "Gamma2p", "Gamma2m", "Gamma3m")]
            + [self.G[k] for k in ("G1p", "G1m", "G2p", "G2m", "G3m", "G10", "G20")]
        )
