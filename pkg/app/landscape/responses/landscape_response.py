from typing import Dict, List, Optional

from pydantic import Field

from app.base.responses.base_response import BaseResponse
from app.landscape.models.asymptotic_fit import AsymptoticFit
from app.landscape.models.landscape_sample import SCAN_HEADER, LandscapeSample


class SampleRow(BaseResponse):
    p: List[float]
    F: float
    mu: List[float]
    detM: float
    gamma: Dict[str, float]
    G: Dict[str, float]
    converged: bool = True

    @classmethod
    def from_domain(cls, sample: LandscapeSample) -> "SampleRow":
        return cls(
            p=sample.p.tolist(),
            F=sample.F,
            mu=sample.M.mu.tolist(),
            detM=sample.M.detM,
            gamma=sample.gamma,
            G=sample.G,
            converged=sample.M.converged,
        )


class ScanResponse(BaseResponse):
    """Landscape samples in grid order"""

    grid: int
    d0: float
    header: List[str] = Field(default_factory=lambda: list(SCAN_HEADER))
    samples: List[SampleRow]

    @classmethod
    def from_domain(cls, samples: List[LandscapeSample], grid: int, d0: float) -> "ScanResponse":
        return cls(grid=grid, d0=d0, samples=[SampleRow.from_domain(s) for s in samples])


class ProbeResponse(BaseResponse):
    """Boundary asymptotics of one quantity along a direction"""

    quantity: str
    direction: List[float]
    d: List[float]
    values: List[float]
    slope: float
    constant: float
    radial: Optional[List[float]] = None
    tangential: Optional[List[float]] = None

    @classmethod
    def from_domain(cls, fit: AsymptoticFit) -> "ProbeResponse":
        return cls(
            quantity=fit.quantity,
            direction=fit.direction.tolist(),
            d=fit.d,
            values=fit.values,
            slope=fit.slope,
            constant=fit.constant,
            radial=fit.radial,
            tangential=fit.tangential,
        )

    def rows(self) -> List[List[Optional[float]]]:
        out = []
        for n, (d, v) in enumerate(zip(self.d, self.values)):
            radial = self.radial[n] if self.radial else None
            tangential = self.tangential[n] if self.tangential else None
            out.append([d, v, radial, tangential])
        return out
