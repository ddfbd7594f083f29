import logging
from typing import Optional

from app.base.controllers.base_controllers import BaseController
from app.boundary.models.boundary_spec import BoundarySpec
from app.boundary.repositories.boundary_spec_repository import BoundarySpecRepository
from app.core.middlewares.run_context_middleware import context_extra
from app.landscape.models.landscape_sample import SCAN_HEADER
from app.landscape.requests.landscape_request import ProbeRequest, ScanRequest
from app.landscape.responses.landscape_response import ProbeResponse, ScanResponse
from app.landscape.services.landscape_service import LandscapeService
from app.quadrature.services.quadrature_service import QuadratureService

logger = logging.getLogger("ymreduce.controllers")


class LandscapeController(BaseController):
    """Controller for landscape scan and landscape probe"""

    def __init__(
        self,
        service: Optional[LandscapeService] = None,
        repository: Optional[BoundarySpecRepository] = None,
        out: Optional[str] = None,
        fmt: str = "csv",
    ):
        super().__init__(out, fmt)
        self.service = service or LandscapeService()
        self.repository = repository or BoundarySpecRepository()

    @classmethod
    def from_config(cls, config, default_format: str = "json") -> "LandscapeController":
        service = LandscapeService(QuadratureService(config.quadrature_spec()))
        return cls(service, BoundarySpecRepository(), config.out, config.output_format(default_format))

    def _spec(self, spec_file: Optional[str]) -> BoundarySpec:
        if spec_file:
            return self.repository.load(spec_file)
        return BoundarySpec.flat([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])

    def scan(self, request: ScanRequest) -> ScanResponse:
        """Sample F, the spectrum and every G on the grid"""
        logger.debug("Scan request received", extra=context_extra(request_data=request.get()))

        samples = self.service.landscape_scan(self._spec(request.spec_file), request.grid, request.d0)
        unconverged = sum(1 for s in samples if not s.M.converged)
        if unconverged:
            logger.warning("Some samples missed the quadrature target", extra=context_extra(count=unconverged))

        response = ScanResponse.from_domain(samples, request.grid, request.d0)
        self.emit_document(response, SCAN_HEADER, [s.csv_row() for s in samples])
        return response

    def probe(self, request: ProbeRequest) -> ProbeResponse:
        """Fit the log-log slope of a quantity as p approaches the sphere"""
        logger.debug("Probe request received", extra=context_extra(request_data=request.get()))

        bspec = self.repository.load(request.spec_file) if request.spec_file else None
        fit = self.service.asymptotic_probe(request.quantity, request.direction, request.d, bspec, request.entry)
        response = ProbeResponse.from_domain(fit)
        self.emit_document(response, ("d", "value", "radial", "tangential"), response.rows())
        return response
